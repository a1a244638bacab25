//! Second-order parameter estimates from every rho estimator over a batch of
//! samples, summarized by median and interquartile range.
//!
//! cargo run --release --example rho_estimators -- t6 50

use stdf::dgp::{sample_dgp, DgpSpec, RngStream};
use stdf::harness::{RhoMethod, Tuning};
use stdf::{EmpiricalStdf, Point, RankMatrix, ThresholdPolicy};

fn quantile(sorted: &[f64], q: f64) -> f64 {
    sorted[((sorted.len() - 1) as f64 * q).round() as usize]
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let dgp: DgpSpec = args.next().as_deref().unwrap_or("t6").parse()?;
    let reps: u32 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(50);

    let tuning = Tuning::default();
    let x = Point::xy(0.5, 0.5);
    let methods = [
        RhoMethod::Fougeres,
        RhoMethod::FougeresAgg,
        RhoMethod::Beirlant,
        RhoMethod::Goegebeur,
        RhoMethod::PenalizedAgg,
    ];
    let mut draws = vec![Vec::new(); methods.len()];
    for rep in 0..reps {
        let sample = sample_dgp(&dgp, 1000, RngStream::new(5, 0, rep))?;
        let ranks = RankMatrix::from_sample(&sample);
        let source = EmpiricalStdf::new(&ranks).with_policy(ThresholdPolicy::Saturate);
        for (m, out) in methods.iter().zip(draws.iter_mut()) {
            if let Some(r) = tuning.estimate_rho(*m, &source, &x)? {
                out.push(r);
            }
        }
    }

    println!("{reps} samples of {dgp}, n = 1000\n");
    println!("{:<14} {:>8} {:>8} {:>8}", "method", "q25", "median", "q75");
    for (m, mut v) in methods.iter().zip(draws) {
        v.sort_by(f64::total_cmp);
        println!(
            "{:<14} {:>8.3} {:>8.3} {:>8.3}",
            m.name(),
            quantile(&v, 0.25),
            quantile(&v, 0.5),
            quantile(&v, 0.75)
        );
    }
    Ok(())
}
