use stdf::dgp::DgpSpec;
use stdf::estimators::clamp_stdf;
use stdf::harness::{replicate, run_experiment, write_metrics_csv, EstimatorSpec, ExperimentConfig, StdfMethod};

fn small(dgp: &str, reps: usize) -> ExperimentConfig {
    ExperimentConfig {
        dgp: DgpSpec::by_name(dgp).unwrap(),
        reps,
        k_grid: vec![51, 251, 551, 951],
        seed: 11,
        ..ExperimentConfig::default()
    }
}

#[test]
fn mse_splits_into_bias_and_variance() {
    let table = run_experiment(&small("t4", 12), 0).unwrap();
    assert_eq!(table.rows.len(), 8 * 4);
    for row in &table.rows {
        assert!(!row.is_aborted(), "{row:?}");
        let sum = row.squared_bias + row.variance;
        assert!((row.mse - sum).abs() <= 1e-10 * row.mse.max(1e-300), "{row:?}");
    }
}

#[test]
fn worker_count_does_not_change_the_csv() {
    let config = small("bpii3", 8);
    let dir = tempfile::tempdir().unwrap();
    let mut bytes = Vec::new();
    for workers in [1, 3, 8] {
        let path = dir.path().join(format!("w{workers}.csv"));
        write_metrics_csv(&run_experiment(&config, workers).unwrap(), &path).unwrap();
        bytes.push(std::fs::read(path).unwrap());
    }
    assert_eq!(bytes[0], bytes[1]);
    assert_eq!(bytes[0], bytes[2]);
}

#[test]
fn corrected_estimates_stay_within_bounds() {
    let config = small("t6", 1);
    for rep in 0..4 {
        let est = replicate(&config, rep).unwrap();
        for (ei, spec) in config.estimators.iter().enumerate() {
            if spec.stdf == StdfMethod::Empirical {
                continue;
            }
            for per_k in &est.values[ei] {
                for (v, x) in per_k.iter().zip(&config.eval_points) {
                    let v = v.expect("no failures on t6");
                    assert_eq!(clamp_stdf(x, v), v, "{spec} at {x}");
                }
            }
        }
    }
}

#[test]
fn empirical_variance_falls_as_k_grows() {
    let config = ExperimentConfig {
        reps: 200,
        k_grid: vec![51, 951],
        estimators: vec![EstimatorSpec::study_set()[0]],
        ..ExperimentConfig::default()
    };
    let table = run_experiment(&config, 0).unwrap();
    let v = |k| table.row("empirical", k).unwrap().variance;
    assert!(v(951) < v(51), "{} vs {}", v(951), v(51));
}
