//! Every estimator of the study set on one sample, at a few k.
//!
//! cargo run --release --example bias_corrected -- t4

use stdf::dgp::{sample_dgp, true_stdf, DgpSpec, RngStream};
use stdf::harness::{evaluate_estimator, EstimatorSpec, Tuning};
use stdf::{Point, RankMatrix};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dgp: DgpSpec = std::env::args().nth(1).as_deref().unwrap_or("t4").parse()?;
    let sample = sample_dgp(&dgp, 1000, RngStream::new(11, 0, 0))?;
    let ranks = RankMatrix::from_sample(&sample);
    let tuning = Tuning::default();
    let x = Point::xy(0.5, 0.5);
    let ks = [51, 201, 501, 901];

    println!("{dgp} at {x}, true value {:.4}\n", true_stdf(&dgp, &x)?);
    print!("{:<32}", "estimator");
    for k in ks {
        print!(" {:>9}", format!("k={k}"));
    }
    println!();
    for spec in EstimatorSpec::study_set() {
        print!("{:<32}", spec.id());
        for k in ks {
            match evaluate_estimator(&spec, &ranks, &tuning, k, &x) {
                Ok(v) => print!(" {v:>9.4}"),
                Err(_) => print!(" {:>9}", "failed"),
            }
        }
        println!();
    }
    Ok(())
}
