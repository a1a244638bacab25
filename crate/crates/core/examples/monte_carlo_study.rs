//! A reduced Monte Carlo study on one process, printed as a table.
//!
//! cargo run --release --example monte_carlo_study -- t4 50

use std::time::Instant;

use stdf::dgp::DgpSpec;
use stdf::harness::{run_experiment, ExperimentConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let dgp: DgpSpec = args.next().as_deref().unwrap_or("cauchy").parse()?;
    let reps: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(50);

    let config = ExperimentConfig {
        dgp,
        reps,
        seed: 2024,
        ..ExperimentConfig::default()
    };
    let started = Instant::now();
    let table = run_experiment(&config, 0)?;
    println!("{} replications of {} in {:.1?}\n", reps, table.dgp, started.elapsed());

    println!("{:<32} {:>5} {:>12} {:>12} {:>12}", "estimator", "k", "bias^2", "variance", "mse");
    for row in table.rows.iter().filter(|r| r.k % 200 == 1) {
        println!(
            "{:<32} {:>5} {:>12.3e} {:>12.3e} {:>12.3e}",
            row.estimator, row.k, row.squared_bias, row.variance, row.mse
        );
    }
    Ok(())
}
