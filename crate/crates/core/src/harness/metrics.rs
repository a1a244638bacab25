use serde::{Deserialize, Serialize};

use super::run::ReplicationEstimates;
use super::ExperimentConfig;

/// Performance of one estimator at one `k`, averaged over evaluation points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub estimator: String,
    pub k: usize,
    pub squared_bias: f64,
    pub variance: f64,
    pub mse: f64,
    /// Replications entering the averages.
    pub reps: usize,
    /// Replications dropped because an evaluation failed.
    pub failures: usize,
}

impl MetricsRow {
    /// More than 1% failed replications: the metrics are NaN.
    pub fn is_aborted(&self) -> bool {
        self.mse.is_nan()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsTable {
    pub dgp: String,
    pub rows: Vec<MetricsRow>,
}

impl MetricsTable {
    pub fn row(&self, estimator: &str, k: usize) -> Option<&MetricsRow> {
        self.rows.iter().find(|r| r.estimator == estimator && r.k == k)
    }

    pub fn rows_for<'a>(&'a self, estimator: &'a str) -> impl Iterator<Item = &'a MetricsRow> + 'a {
        self.rows.iter().filter(move |r| r.estimator == estimator)
    }

    pub fn estimators(&self) -> Vec<String> {
        let mut ids: Vec<String> = self.rows.iter().map(|r| r.estimator.clone()).collect();
        ids.dedup();
        ids
    }
}

/// Folds replications in index order, so the result is independent of how
/// they were scheduled.
pub(crate) fn aggregate(config: &ExperimentConfig, truth: &[f64], reps: &[ReplicationEstimates]) -> MetricsTable {
    let mut rows = Vec::new();
    for (ei, spec) in config.estimators.iter().enumerate() {
        for (ki, &k) in config.k_grid.iter().enumerate() {
            let valid: Vec<&[Option<f64>]> = reps
                .iter()
                .map(|r| r.values[ei][ki].as_slice())
                .filter(|v| v.iter().all(Option::is_some))
                .collect();
            let failures = reps.len() - valid.len();
            let (squared_bias, variance, mse) = if failures * 100 > reps.len() || valid.is_empty() {
                (f64::NAN, f64::NAN, f64::NAN)
            } else {
                point_averaged(truth, &valid)
            };
            rows.push(MetricsRow {
                estimator: spec.id(),
                k,
                squared_bias,
                variance,
                mse,
                reps: valid.len(),
                failures,
            });
        }
    }
    rows.sort_by(|a, b| a.estimator.cmp(&b.estimator).then(a.k.cmp(&b.k)));
    MetricsTable {
        dgp: config.dgp.to_string(),
        rows,
    }
}

/// Squared bias, variance and MSE at each point, averaged over points.
fn point_averaged(truth: &[f64], valid: &[&[Option<f64>]]) -> (f64, f64, f64) {
    let m = valid.len() as f64;
    let mut acc = (0.0, 0.0, 0.0);
    for (xi, &l) in truth.iter().enumerate() {
        let est = || valid.iter().map(|v| v[xi].expect("valid replication"));
        let mean = est().sum::<f64>() / m;
        let variance = est().map(|e| (e - mean).powi(2)).sum::<f64>() / m;
        let mse = est().map(|e| (e - l).powi(2)).sum::<f64>() / m;
        acc.0 += (mean - l).powi(2);
        acc.1 += variance;
        acc.2 += mse;
    }
    let p = truth.len() as f64;
    (acc.0 / p, acc.1 / p, acc.2 / p)
}
