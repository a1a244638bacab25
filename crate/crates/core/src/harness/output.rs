use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::metrics::{MetricsRow, MetricsTable};
use super::ExperimentConfig;
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 8] = ["dgp", "estimator", "k", "squared_bias", "variance", "mse", "reps", "failures"];

/// `%.10g`-style formatting: ten significant digits, trailing zeros removed,
/// scientific notation outside `[1e-5, 1e10)`.
pub fn format_significant(v: f64) -> String {
    if v.is_nan() {
        return "NaN".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.9e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..10).contains(&exp) {
        return format!("{}e{}{:02}", trim_zeros(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs());
    }
    let decimals = (9 - exp).max(0) as usize;
    trim_zeros(&format!("{v:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn write_metrics_csv(table: &MetricsTable, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = csv::Writer::from_writer(BufWriter::new(file));
    let csv_err = |e: csv::Error| Error::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for r in &table.rows {
        w.write_record([
            table.dgp.clone(),
            r.estimator.clone(),
            r.k.to_string(),
            format_significant(r.squared_bias),
            format_significant(r.variance),
            format_significant(r.mse),
            r.reps.to_string(),
            r.failures.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

#[derive(Deserialize)]
struct CsvRow {
    dgp: String,
    estimator: String,
    k: usize,
    squared_bias: f64,
    variance: f64,
    mse: f64,
    reps: usize,
    failures: usize,
}

/// Reads a file written by [`write_metrics_csv`].
pub fn read_metrics_csv(path: &Path) -> Result<MetricsTable> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    let mut dgp = None;
    let mut rows = Vec::new();
    for (line, rec) in reader.deserialize::<CsvRow>().enumerate() {
        let rec = rec.map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            message: format!("row {}: {e}", line + 1),
        })?;
        if dgp.get_or_insert_with(|| rec.dgp.clone()) != &rec.dgp {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                message: format!("mixes processes `{}` and `{}`", dgp.unwrap_or_default(), rec.dgp),
            });
        }
        rows.push(MetricsRow {
            estimator: rec.estimator,
            k: rec.k,
            squared_bias: rec.squared_bias,
            variance: rec.variance,
            mse: rec.mse,
            reps: rec.reps,
            failures: rec.failures,
        });
    }
    let dgp = dgp.ok_or_else(|| Error::Parse {
        path: path.to_path_buf(),
        message: "no data rows".into(),
    })?;
    Ok(MetricsTable { dgp, rows })
}

/// Provenance record written next to each metrics file. Feeding it back as a
/// configuration reproduces the run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub dgp: String,
    /// Configuration file the run started from, if any.
    pub config_path: Option<String>,
    pub output_dir: String,
    pub csv: String,
    pub seed: u64,
    /// RFC 3339 UTC time the run finished.
    pub timestamp: String,
    pub fingerprint: String,
    /// Fully resolved configuration, defaults included.
    pub config: ExperimentConfig,
}

impl RunManifest {
    pub fn new(config: &ExperimentConfig, config_path: Option<&Path>, output_dir: &Path, csv: impl Into<String>) -> Self {
        RunManifest {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            dgp: config.dgp.to_string(),
            config_path: config_path.map(|p| p.display().to_string()),
            output_dir: output_dir.display().to_string(),
            csv: csv.into(),
            seed: config.seed,
            timestamp: humantime::format_rfc3339_seconds(std::time::SystemTime::now()).to_string(),
            fingerprint: config.fingerprint(),
            config: config.clone(),
        }
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}

pub fn write_manifest(manifest: &RunManifest, path: &Path) -> Result<()> {
    let mut json = serde_json::to_string_pretty(manifest)?;
    json.push('\n');
    let mut file = File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(json.as_bytes()).map_err(|e| Error::io(path, e))
}
