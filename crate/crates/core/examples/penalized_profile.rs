//! The profiled residual sum of squares behind the penalized rho estimate at
//! one point, with the grid point chosen for several penalty strengths.
//!
//! cargo run --release --example penalized_profile -- t4

use stdf::dgp::{sample_dgp, DgpSpec, RngStream};
use stdf::rho::{profile_rss, rho_penalized_pointwise, stdf_curve, PenalizedRhoConfig};
use stdf::{EmpiricalStdf, Point, RankMatrix, ThresholdPolicy};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dgp: DgpSpec = std::env::args().nth(1).as_deref().unwrap_or("t4").parse()?;
    let sample = sample_dgp(&dgp, 1000, RngStream::new(3, 0, 0))?;
    let ranks = RankMatrix::from_sample(&sample);
    let source = EmpiricalStdf::new(&ranks).with_policy(ThresholdPolicy::Saturate);
    let cfg = PenalizedRhoConfig::default();
    let x = Point::xy(0.5, 0.5);
    let curve = stdf_curve(&source, &cfg, &x)?;

    println!("{:>6} {:>12} {:>10} {:>10}", "r", "rss", "b0", "b1");
    for &r in cfg.grid().iter().step_by(4) {
        let fit = profile_rss(&curve, &cfg, r)?;
        println!("{r:>6.1} {:>12.4e} {:>10.4} {:>10.4}", fit.rss, fit.b0, fit.b1);
    }
    println!();
    for eta in [0.0, 0.25, 0.5, 1.0, 2.0] {
        let fit = rho_penalized_pointwise(&curve, &cfg.clone().with_eta(eta)?)?;
        println!("eta {eta:<4} -> rho {:>5.1}", fit.rho);
    }
    Ok(())
}
