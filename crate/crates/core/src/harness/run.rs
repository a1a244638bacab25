use rayon::prelude::*;

use super::metrics::{aggregate, MetricsTable};
use super::{ExperimentConfig, RhoMethod, StdfMethod};
use crate::dgp::{sample_dgp, true_stdf, RngStream};
use crate::empirical::{EmpiricalStdf, ThresholdPolicy};
use crate::error::{Error, Result};
use crate::estimators::beirlant_alpha;
use crate::estimators::beirlant_stdf_with_alpha;
use crate::sample::RankMatrix;

/// Estimates of one replication, indexed `[estimator][k][point]`; `None`
/// marks an evaluation that failed.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationEstimates {
    pub values: Vec<Vec<Vec<Option<f64>>>>,
}

/// Draws replication `rep` and evaluates every configured estimator on it.
pub fn replicate(config: &ExperimentConfig, rep: usize) -> Result<ReplicationEstimates> {
    let stream = RngStream::new(config.seed, config.dgp_stream(), rep as u32);
    let sample = sample_dgp(&config.dgp, config.n, stream)?;
    let ranks = RankMatrix::from_sample(&sample);
    let source = EmpiricalStdf::new(&ranks)
        .with_policy(ThresholdPolicy::Saturate)
        .with_joint_table(config.n);
    let tuning = &config.tuning;
    let (nk, nx) = (config.k_grid.len(), config.eval_points.len());

    // aggregated rho estimates are shared by every estimator using them
    let mut shared: Vec<(RhoMethod, Option<f64>)> = Vec::new();
    let mut values = Vec::with_capacity(config.estimators.len());
    for spec in &config.estimators {
        let mut table = vec![vec![None; nx]; nk];
        for (xi, x) in config.eval_points.iter().enumerate() {
            let rho = if spec.rho.is_pointwise() {
                tuning.estimate_rho(spec.rho, &source, x).ok().flatten()
            } else if let Some(&(_, r)) = shared.iter().find(|(m, _)| *m == spec.rho) {
                r
            } else {
                let r = tuning.estimate_rho(spec.rho, &source, x).ok().flatten();
                shared.push((spec.rho, r));
                r
            };
            if spec.rho != RhoMethod::None && rho.is_none() {
                continue;
            }
            match spec.stdf {
                StdfMethod::DotAggregated => {
                    // independent of k
                    let v = tuning.evaluate_with_rho(spec.stdf, &source, 1, x, rho).ok();
                    for row in table.iter_mut() {
                        row[xi] = v;
                    }
                }
                StdfMethod::Beirlant => {
                    let rho = rho.expect("checked above");
                    let cfg = &tuning.beirlant;
                    let Ok(alpha) = beirlant_alpha(&source, cfg.kbar, cfg.tau_b, rho, x) else {
                        continue;
                    };
                    for (ki, &k) in config.k_grid.iter().enumerate() {
                        table[ki][xi] = beirlant_stdf_with_alpha(&source, k, cfg, rho, alpha, x).ok();
                    }
                }
                StdfMethod::Empirical | StdfMethod::Dot => {
                    for (ki, &k) in config.k_grid.iter().enumerate() {
                        table[ki][xi] = tuning.evaluate_with_rho(spec.stdf, &source, k, x, rho).ok();
                    }
                }
            }
        }
        values.push(table);
    }
    Ok(ReplicationEstimates { values })
}

/// Runs the full Monte Carlo study on `workers` threads (0 picks the rayon
/// default). Results do not depend on the number of threads.
pub fn run_experiment(config: &ExperimentConfig, workers: usize) -> Result<MetricsTable> {
    config.validate()?;
    let truth = config
        .eval_points
        .iter()
        .map(|x| true_stdf(&config.dgp, x))
        .collect::<Result<Vec<_>>>()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::param("workers", e.to_string()))?;
    let reps = pool.install(|| {
        (0..config.reps)
            .into_par_iter()
            .map(|rep| replicate(config, rep))
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(aggregate(config, &truth, &reps))
}
