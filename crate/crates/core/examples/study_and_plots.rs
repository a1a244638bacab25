//! A small study written to disk the way `stdf-sim simulate` does, then
//! plotted.
//!
//! cargo run --release --example study_and_plots -- out/

use std::path::PathBuf;

use stdf::dgp::DgpSpec;
use stdf::harness::{run_experiment, write_manifest, write_metrics_csv, ExperimentConfig, RunManifest};
use stdf::plot::{plot_table, PlotOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "study-out".into()));
    std::fs::create_dir_all(&out)?;
    let config = ExperimentConfig {
        dgp: DgpSpec::by_name("archimax-mixed")?,
        reps: 40,
        ..ExperimentConfig::default()
    };
    let table = run_experiment(&config, 0)?;
    let csv = format!("{}.csv", table.dgp);
    write_metrics_csv(&table, &out.join(&csv))?;
    write_manifest(
        &RunManifest::new(&config, None, &out, csv.clone()),
        &out.join(format!("{}.manifest.json", table.dgp)),
    )?;
    println!("{}", out.join(csv).display());
    for path in plot_table(&table, &out, PlotOptions::default())? {
        println!("{}", path.display());
    }
    Ok(())
}
