//! The rank-based empirical stdf on a sample drawn from one process,
//! compared with the true function across k.
//!
//! cargo run --release --example empirical_stdf -- archimax-logistic 5000

use stdf::dgp::{sample_dgp, true_stdf, DgpSpec, RngStream};
use stdf::{empirical_stdf, Point, RankMatrix};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let dgp: DgpSpec = args.next().as_deref().unwrap_or("archimax-logistic").parse()?;
    let n: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(5000);

    let sample = sample_dgp(&dgp, n, RngStream::new(7, 0, 0))?;
    let ranks = RankMatrix::from_sample(&sample);
    let points = [Point::xy(1.0, 1.0), Point::xy(0.3, 0.7), Point::xy(1.5, 0.5)];

    print!("{:>6}", "k");
    for x in &points {
        print!(" {:>12}", x.to_string());
    }
    println!();
    for k in [n / 100, n / 50, n / 20, n / 10, n / 4] {
        print!("{k:>6}");
        for x in &points {
            print!(" {:>12.4}", empirical_stdf(&ranks, k as f64, x)?);
        }
        println!();
    }
    print!("{:>6}", "true");
    for x in &points {
        print!(" {:>12.4}", true_stdf(&dgp, x)?);
    }
    println!();
    Ok(())
}
