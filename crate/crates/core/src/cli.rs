//! The `stdf-sim` command line: `simulate`, `plot` and `estimate`.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::{load_config, parse_points};
use crate::dgp::{DgpSpec, DGP_NAMES};
use crate::empirical::{EmpiricalStdf, ThresholdPolicy};
use crate::error::{Error, Result};
use crate::harness::{
    read_metrics_csv, run_experiment, write_manifest, write_metrics_csv, EstimatorSpec, ExperimentConfig, RhoMethod,
    RunManifest, StdfMethod, Tuning,
};
use crate::plot::{plot_table, PlotOptions};
use crate::sample::{RankMatrix, Sample};

#[derive(Debug, Parser)]
#[command(name = "stdf-sim", version, about = "Stable tail dependence function estimators and their Monte Carlo study")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the Monte Carlo study and write metrics CSVs with manifests.
    Simulate(SimulateArgs),
    /// Draw squared bias, variance and MSE charts from metrics CSVs.
    Plot(PlotArgs),
    /// Apply an estimator to a data file.
    Estimate(EstimateArgs),
}

fn dgp_names() -> Vec<&'static str> {
    DGP_NAMES.iter().copied().chain(["all"]).collect()
}

fn parse_estimator(s: &str) -> std::result::Result<EstimatorSpec, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Process name, or `all` for every study process.
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(dgp_names()))]
    pub dgp: Option<String>,
    /// Sample size.
    #[arg(long)]
    pub n: Option<usize>,
    /// Monte Carlo replications.
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, default_value = "results")]
    pub out: PathBuf,
    /// Comma-separated estimator ids, e.g. `empirical,beirlant+penalized-agg`.
    #[arg(long, value_delimiter = ',', value_parser = parse_estimator)]
    pub estimators: Option<Vec<EstimatorSpec>>,
    /// Key-value configuration file, or a manifest from an earlier run.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long, env = "STDF_WORKERS", default_value_t = 0)]
    pub workers: usize,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// Metrics CSVs written by `simulate`.
    #[arg(long = "in", num_args = 1.., required = true)]
    pub inputs: Vec<PathBuf>,
    #[arg(long, default_value = "plots")]
    pub out: PathBuf,
    /// Logarithmic y axis.
    #[arg(long)]
    pub log_y: bool,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// Headerless CSV, one observation per row.
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub k: u64,
    /// Points separated by `;`, coordinates by `,`: "1,1;0.5,0.5".
    #[arg(long)]
    pub points: String,
    #[arg(long, default_value = "empirical", value_parser = clap::builder::PossibleValuesParser::new(StdfMethod::ALL.map(StdfMethod::name)))]
    pub estimator: String,
    #[arg(long, default_value = "none", value_parser = clap::builder::PossibleValuesParser::new(RhoMethod::ALL.map(RhoMethod::name)))]
    pub rho_method: String,
}

/// A failure with its exit code: 2 for usage errors, 1 otherwise.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidParameter { .. } | Error::InvalidPoint(_) => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

pub fn main() -> ExitCode {
    run(Cli::parse())
}

pub fn run(cli: Cli) -> ExitCode {
    let result = match cli.command {
        Command::Simulate(args) => simulate(args),
        Command::Plot(args) => plot(args),
        Command::Estimate(args) => estimate(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn simulate(args: SimulateArgs) -> std::result::Result<(), Failure> {
    let mut base = match &args.config {
        Some(path) => load_config(path)?,
        None => ExperimentConfig::default(),
    };
    set(&mut base.n, args.n);
    set(&mut base.reps, args.reps);
    set(&mut base.seed, args.seed);
    set(&mut base.estimators, args.estimators.clone());
    let dgps = match args.dgp.as_deref() {
        Some("all") => DgpSpec::catalogue().into_iter().map(|(_, s)| s).collect(),
        Some(name) => vec![DgpSpec::by_name(name)?],
        None => vec![base.dgp],
    };
    std::fs::create_dir_all(&args.out).map_err(|e| Error::io(&args.out, e))?;
    for dgp in dgps {
        let config = ExperimentConfig { dgp, ..base.clone() };
        config.validate()?;
        let table = run_experiment(&config, args.workers)?;
        let csv_name = format!("{}.csv", table.dgp);
        let csv_path = args.out.join(&csv_name);
        write_metrics_csv(&table, &csv_path)?;
        let manifest = RunManifest::new(&config, args.config.as_deref(), &args.out, csv_name);
        write_manifest(&manifest, &args.out.join(format!("{}.manifest.json", table.dgp)))?;
        for row in table.rows.iter().filter(|r| r.is_aborted()) {
            eprintln!(
                "warning: {} k={} aborted, {} of {} replications failed",
                row.estimator,
                row.k,
                row.failures,
                config.reps
            );
        }
        println!("{}", csv_path.display());
    }
    Ok(())
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn plot(args: PlotArgs) -> std::result::Result<(), Failure> {
    let opts = PlotOptions {
        log_y: args.log_y,
        ..PlotOptions::default()
    };
    for input in &args.inputs {
        let table = read_metrics_csv(input)?;
        for path in plot_table(&table, &args.out, opts)? {
            println!("{}", path.display());
        }
    }
    Ok(())
}

/// Reads a headerless numeric CSV.
pub fn read_data(path: &Path) -> Result<Sample> {
    let parse_err = |message: String| Error::Parse {
        path: path.to_path_buf(),
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| parse_err(e.to_string()))?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| parse_err(e.to_string()))?;
        let row = rec
            .iter()
            .enumerate()
            .map(|(j, cell)| {
                cell.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| parse_err(format!("row {}, column {}: `{cell}` is not a finite number", i + 1, j + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Sample::from_rows(&rows)
}

fn estimate(args: EstimateArgs) -> std::result::Result<(), Failure> {
    let stdf: StdfMethod = args.estimator.parse()?;
    let rho_method: RhoMethod = args.rho_method.parse()?;
    if stdf != StdfMethod::Empirical && rho_method == RhoMethod::None {
        return Err(Error::param("rho-method", format!("`{}` needs a rho estimator", stdf.name())).into());
    }
    let points = parse_points(&args.points)?;
    if points.is_empty() {
        return Err(Error::param("points", "no points given").into());
    }
    let sample = read_data(&args.data)?;
    if let Some(p) = points.iter().find(|p| p.dim() != sample.d()) {
        return Err(Error::param("points", format!("{p} has dimension {}, data has {}", p.dim(), sample.d())).into());
    }
    let ranks = RankMatrix::from_sample(&sample);
    let source = EmpiricalStdf::new(&ranks).with_policy(ThresholdPolicy::Saturate);
    let tuning = Tuning::scaled_for(sample.n(), sample.d())?;
    let k = usize::try_from(args.k).map_err(|_| Error::param("k", "too large"))?;

    let mut out = csv::Writer::from_writer(std::io::stdout().lock());
    let mut header: Vec<String> = (1..=sample.d()).map(|j| format!("x{j}")).collect();
    header.extend(["k", "estimator", "rho_method", "rho", "estimate"].map(String::from));
    let io_err = |e: csv::Error| Failure {
        code: 1,
        message: e.to_string(),
    };
    out.write_record(&header).map_err(io_err)?;
    for x in &points {
        let rho = tuning.estimate_rho(rho_method, &source, x)?;
        let value = tuning.evaluate_with_rho(stdf, &source, k, x, rho)?;
        let mut record: Vec<String> = x.coords().iter().map(f64::to_string).collect();
        record.extend([
            k.to_string(),
            stdf.name().to_string(),
            rho_method.name().to_string(),
            rho.map(|r| r.to_string()).unwrap_or_default(),
            value.to_string(),
        ]);
        out.write_record(&record).map_err(io_err)?;
    }
    out.flush().map_err(|e| Failure {
        code: 1,
        message: e.to_string(),
    })?;
    Ok(())
}
