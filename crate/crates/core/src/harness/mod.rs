//! Monte Carlo comparison of stdf estimators: squared bias, variance and MSE
//! per estimator and per `k`, averaged over a set of evaluation points.

mod metrics;
mod output;
mod run;

pub use metrics::{MetricsRow, MetricsTable};
pub use output::{format_significant, read_metrics_csv, write_manifest, write_metrics_csv, RunManifest, CSV_HEADER};
pub use run::{replicate, run_experiment, ReplicationEstimates};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dgp::DgpSpec;
use crate::empirical::{EmpiricalStdf, StdfSource, ThresholdPolicy};
use crate::error::{Error, Result};
use crate::estimators::{beirlant_stdf, dot_aggregated_stdf, dot_stdf, BeirlantConfig};
use crate::rho::{
    diagonal_points, rho_beirlant, rho_fougeres, rho_fougeres_agg, rho_goegebeur, rho_penalized_agg,
    GoegebeurConfig, PenalizedRhoConfig, RatioRhoConfig,
};
use crate::sample::{Point, RankMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StdfMethod {
    Empirical,
    Dot,
    DotAggregated,
    Beirlant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RhoMethod {
    None,
    Fougeres,
    FougeresAgg,
    Beirlant,
    Goegebeur,
    PenalizedAgg,
}

impl StdfMethod {
    pub const ALL: [StdfMethod; 4] = [
        StdfMethod::Empirical,
        StdfMethod::Dot,
        StdfMethod::DotAggregated,
        StdfMethod::Beirlant,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StdfMethod::Empirical => "empirical",
            StdfMethod::Dot => "dot",
            StdfMethod::DotAggregated => "dot-aggregated",
            StdfMethod::Beirlant => "beirlant",
        }
    }
}

impl RhoMethod {
    pub const ALL: [RhoMethod; 6] = [
        RhoMethod::None,
        RhoMethod::Fougeres,
        RhoMethod::FougeresAgg,
        RhoMethod::Beirlant,
        RhoMethod::Goegebeur,
        RhoMethod::PenalizedAgg,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RhoMethod::None => "none",
            RhoMethod::Fougeres => "fougeres",
            RhoMethod::FougeresAgg => "fougeres-agg",
            RhoMethod::Beirlant => "beirlant",
            RhoMethod::Goegebeur => "goegebeur",
            RhoMethod::PenalizedAgg => "penalized-agg",
        }
    }

    /// Pointwise estimators are evaluated at the same `x` as the stdf.
    pub fn is_pointwise(self) -> bool {
        matches!(self, RhoMethod::Fougeres | RhoMethod::Beirlant | RhoMethod::Goegebeur)
    }
}

fn parse_named<T: Copy>(all: &[T], name: impl Fn(T) -> &'static str, s: &str, what: &'static str) -> Result<T> {
    all.iter().copied().find(|&m| name(m) == s).ok_or_else(|| {
        let valid: Vec<_> = all.iter().map(|&m| name(m)).collect();
        Error::param(what, format!("unknown `{s}`; expected one of {}", valid.join(", ")))
    })
}

impl FromStr for StdfMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_named(&StdfMethod::ALL, StdfMethod::name, s, "estimator")
    }
}

impl FromStr for RhoMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_named(&RhoMethod::ALL, RhoMethod::name, s, "rho-method")
    }
}

/// Line style of a plotted series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dash {
    Solid,
    Dashed,
    Dotted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeriesStyle {
    pub color: &'static str,
    pub dash: Dash,
}

/// An stdf estimator paired with the `rho` estimator feeding it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EstimatorSpec {
    pub stdf: StdfMethod,
    pub rho: RhoMethod,
}

impl EstimatorSpec {
    pub fn new(stdf: StdfMethod, rho: RhoMethod) -> Result<Self> {
        let spec = EstimatorSpec { stdf, rho };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match (self.stdf, self.rho) {
            (StdfMethod::Empirical, RhoMethod::None) => Ok(()),
            (StdfMethod::Empirical, _) => Err(Error::param("estimator", "the empirical estimator takes no rho")),
            (_, RhoMethod::None) => Err(Error::param(
                "estimator",
                format!("`{}` needs a rho estimator", self.stdf.name()),
            )),
            _ => Ok(()),
        }
    }

    /// The eight study configurations, in table order.
    pub fn study_set() -> Vec<EstimatorSpec> {
        use RhoMethod as R;
        use StdfMethod as S;
        [
            (S::Empirical, R::None),
            (S::Dot, R::Fougeres),
            (S::Dot, R::FougeresAgg),
            (S::DotAggregated, R::FougeresAgg),
            (S::DotAggregated, R::PenalizedAgg),
            (S::Beirlant, R::Beirlant),
            (S::Beirlant, R::Goegebeur),
            (S::Beirlant, R::PenalizedAgg),
        ]
        .into_iter()
        .map(|(stdf, rho)| EstimatorSpec { stdf, rho })
        .collect()
    }

    /// `empirical`, or `<stdf>+<rho>`.
    pub fn id(&self) -> String {
        match self.rho {
            RhoMethod::None => self.stdf.name().to_string(),
            rho => format!("{}+{}", self.stdf.name(), rho.name()),
        }
    }

    /// Plot style of the study configurations; other combinations are grey.
    pub fn style(&self) -> SeriesStyle {
        use RhoMethod as R;
        use StdfMethod as S;
        let (color, dash) = match (self.stdf, self.rho) {
            (S::Empirical, _) => ("black", Dash::Solid),
            (S::Dot, R::Fougeres) => ("purple", Dash::Solid),
            (S::Dot, R::FougeresAgg) => ("red", Dash::Solid),
            (S::DotAggregated, R::FougeresAgg) => ("orange", Dash::Solid),
            (S::DotAggregated, R::PenalizedAgg) => ("orange", Dash::Dashed),
            (S::Beirlant, R::Beirlant) => ("blue", Dash::Solid),
            (S::Beirlant, R::Goegebeur) => ("blue", Dash::Dotted),
            (S::Beirlant, R::PenalizedAgg) => ("blue", Dash::Dashed),
            _ => ("grey", Dash::Solid),
        };
        SeriesStyle { color, dash }
    }
}

impl fmt::Display for EstimatorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

impl FromStr for EstimatorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (stdf, rho) = match s.split_once('+') {
            Some((a, b)) => (a.trim().parse()?, b.trim().parse()?),
            None => (s.trim().parse()?, RhoMethod::None),
        };
        EstimatorSpec::new(stdf, rho)
    }
}

impl Serialize for EstimatorSpec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.id())
    }
}

impl<'de> Deserialize<'de> for EstimatorSpec {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Every tuning parameter of the estimators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tuning {
    pub ratio: RatioRhoConfig,
    /// Evaluation points of the aggregated Fougeres estimator.
    pub ratio_eval_points: Vec<Point>,
    /// Kernel exponent of the Beirlant `rho` estimator.
    pub beirlant_rho_tau: f64,
    pub goegebeur: GoegebeurConfig,
    pub beirlant: BeirlantConfig,
    pub dot_a: f64,
    pub dot_kset: Vec<usize>,
    pub penalized: PenalizedRhoConfig,
}

/// `{1, 51, 101, ..., 951}`.
pub fn default_k_grid() -> Vec<usize> {
    (0..20).map(|j| 1 + 50 * j).collect()
}

impl Default for Tuning {
    fn default() -> Self {
        Tuning {
            ratio: RatioRhoConfig::default(),
            ratio_eval_points: diagonal_points(2),
            beirlant_rho_tau: 5.0,
            goegebeur: GoegebeurConfig::default(),
            beirlant: BeirlantConfig::default(),
            dot_a: 0.4,
            dot_kset: default_k_grid(),
            penalized: PenalizedRhoConfig::default(),
        }
    }
}

impl Tuning {
    /// The defaults, with every sample-size dependent index rescaled by
    /// `n / 1000` and evaluation points placed on the diagonal of
    /// dimension `d`. Identical to [`Tuning::default`] for `n = 1000, d = 2`.
    pub fn scaled_for(n: usize, d: usize) -> Result<Self> {
        let scale = n as f64 / 1000.0;
        let at = |v: usize| ((v as f64 * scale).floor() as usize).max(1);
        let mut tuning = Tuning::default();
        tuning.ratio.kbar = at(990).max(2);
        tuning.beirlant.kbar = at(990).max(2);
        let mut index_set: Vec<usize> = (1..=20).map(|j| at(50 * j)).collect();
        index_set.dedup();
        let mut kset: Vec<usize> = (0..20).map(|j| 1 + (50.0 * j as f64 * scale).floor() as usize).collect();
        kset.dedup();
        tuning.dot_kset = kset;
        tuning.ratio_eval_points = diagonal_points(d);
        tuning.penalized = tuning
            .penalized
            .with_index_set(index_set)?
            .with_eval_points(diagonal_points(d))?;
        Ok(tuning)
    }

    pub fn validate(&self) -> Result<()> {
        self.ratio.validate()?;
        self.beirlant.validate()?;
        self.penalized.validate()?;
        if self.ratio_eval_points.is_empty() {
            return Err(Error::param("ratio_eval_points", "must be nonempty"));
        }
        if !(self.dot_a > 0.0 && self.dot_a < 1.0) {
            return Err(Error::param("dot_a", "must lie in (0, 1)"));
        }
        if self.dot_kset.is_empty() || self.dot_kset.contains(&0) {
            return Err(Error::param("dot_kset", "must be nonempty positive integers"));
        }
        Ok(())
    }

    /// Estimate of `rho` for `method`; pointwise methods use `x`, aggregated
    /// ones ignore it. Degenerate ratios take the fallback value.
    pub fn estimate_rho<S: StdfSource + ?Sized>(&self, method: RhoMethod, source: &S, x: &Point) -> Result<Option<f64>> {
        let rho = match method {
            RhoMethod::None => return Ok(None),
            RhoMethod::Fougeres => self.ratio.or_fallback(rho_fougeres(source, &self.ratio, x))?,
            RhoMethod::Beirlant => self
                .ratio
                .or_fallback(rho_beirlant(source, &self.ratio, self.beirlant_rho_tau, x))?,
            RhoMethod::Goegebeur => self
                .ratio
                .or_fallback(rho_goegebeur(source, &self.ratio, &self.goegebeur, x))?,
            RhoMethod::FougeresAgg => rho_fougeres_agg(source, &self.ratio, &self.ratio_eval_points)?.value,
            RhoMethod::PenalizedAgg => rho_penalized_agg(source, &self.penalized)?.value,
        };
        Ok(Some(rho))
    }

    /// The stdf estimate of `stdf` at `(k, x)` given a `rho` estimate.
    pub fn evaluate_with_rho<S: StdfSource + ?Sized>(
        &self,
        stdf: StdfMethod,
        source: &S,
        k: usize,
        x: &Point,
        rho: Option<f64>,
    ) -> Result<f64> {
        let need_rho = || rho.ok_or_else(|| Error::param("rho", format!("`{}` needs a rho estimate", stdf.name())));
        match stdf {
            StdfMethod::Empirical => source.stdf_at(k as f64, x),
            StdfMethod::Dot => dot_stdf(source, k as f64, self.dot_a, need_rho()?, x),
            StdfMethod::DotAggregated => dot_aggregated_stdf(source, &self.dot_kset, self.dot_a, need_rho()?, x),
            StdfMethod::Beirlant => beirlant_stdf(source, k, &self.beirlant, need_rho()?, x),
        }
    }
}

/// Evaluates one estimator configuration on a sample's ranks at `(k, x)`,
/// estimating `rho` on the way. Thresholds beyond the sample saturate.
pub fn evaluate_estimator(spec: &EstimatorSpec, ranks: &RankMatrix, tuning: &Tuning, k: usize, x: &Point) -> Result<f64> {
    spec.validate()?;
    let source = EmpiricalStdf::new(ranks).with_policy(ThresholdPolicy::Saturate);
    let rho = tuning.estimate_rho(spec.rho, &source, x)?;
    tuning.evaluate_with_rho(spec.stdf, &source, k, x, rho)
}

/// `(t, 1 - t)` for `t = 0.1, 0.2, ..., 1.0`.
pub fn default_eval_points() -> Vec<Point> {
    (1..=10)
        .map(|i| {
            let t = i as f64 / 10.0;
            Point::xy(t, (10 - i) as f64 / 10.0)
        })
        .collect()
}

/// Everything needed to reproduce one Monte Carlo study of one process.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub dgp: DgpSpec,
    pub n: usize,
    pub reps: usize,
    pub k_grid: Vec<usize>,
    pub eval_points: Vec<Point>,
    pub estimators: Vec<EstimatorSpec>,
    pub seed: u64,
    pub tuning: Tuning,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            dgp: DgpSpec::by_name("cauchy").expect("catalogue entry"),
            n: 1000,
            reps: 1000,
            k_grid: default_k_grid(),
            eval_points: default_eval_points(),
            estimators: EstimatorSpec::study_set(),
            seed: 0,
            tuning: Tuning::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        self.dgp.validate()?;
        if self.n == 0 {
            return Err(Error::param("n", "must be at least 1"));
        }
        if self.reps == 0 {
            return Err(Error::param("reps", "must be at least 1"));
        }
        if self.k_grid.is_empty() || self.k_grid.contains(&0) {
            return Err(Error::param("k_grid", "must be nonempty positive integers"));
        }
        if self.eval_points.is_empty() || self.eval_points.iter().any(|p| p.dim() != 2) {
            return Err(Error::param("eval_points", "must be nonempty bivariate points"));
        }
        if self.estimators.is_empty() {
            return Err(Error::param("estimators", "must be nonempty"));
        }
        for e in &self.estimators {
            e.validate()?;
        }
        self.tuning.validate()
    }

    /// Stream index of the process: its catalogue position, or 255 for
    /// custom parameters.
    pub fn dgp_stream(&self) -> u32 {
        self.dgp.catalogue_index().map_or(255, |i| i as u32)
    }

    /// Short hash of the canonical JSON encoding.
    pub fn fingerprint(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serializes");
        let digest = Sha256::digest(&json);
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::Sample;

    #[test]
    fn study_set_ids_and_styles() {
        let ids: Vec<String> = EstimatorSpec::study_set().iter().map(|e| e.id()).collect();
        assert_eq!(
            ids,
            [
                "empirical",
                "dot+fougeres",
                "dot+fougeres-agg",
                "dot-aggregated+fougeres-agg",
                "dot-aggregated+penalized-agg",
                "beirlant+beirlant",
                "beirlant+goegebeur",
                "beirlant+penalized-agg",
            ]
        );
        for e in EstimatorSpec::study_set() {
            assert_eq!(e.id().parse::<EstimatorSpec>().unwrap(), e);
            assert_ne!(e.style().color, "grey");
        }
        let styles: Vec<_> = EstimatorSpec::study_set().iter().map(|e| e.style()).collect();
        assert_eq!(styles[4], SeriesStyle { color: "orange", dash: Dash::Dashed });
        assert_eq!(styles[6], SeriesStyle { color: "blue", dash: Dash::Dotted });
    }

    #[test]
    fn illegal_combinations() {
        assert!("empirical+penalized-agg".parse::<EstimatorSpec>().is_err());
        assert!("dot".parse::<EstimatorSpec>().is_err());
        assert!("dot+magic".parse::<EstimatorSpec>().is_err());
        assert!("dot+goegebeur".parse::<EstimatorSpec>().is_ok());
    }

    #[test]
    fn defaults_match_study() {
        let cfg = ExperimentConfig::default();
        assert_eq!(cfg.k_grid.len(), 20);
        assert_eq!(cfg.k_grid[19], 951);
        assert_eq!(cfg.eval_points.len(), 10);
        assert_eq!(cfg.eval_points[9], Point::xy(1.0, 0.0));
        assert_eq!(cfg.tuning.dot_kset, cfg.k_grid);
        cfg.validate().unwrap();
    }

    #[test]
    fn scaled_tuning_is_identity_at_study_size() {
        assert_eq!(Tuning::scaled_for(1000, 2).unwrap(), Tuning::default());
        let small = Tuning::scaled_for(100, 3).unwrap();
        assert_eq!(small.ratio.kbar, 99);
        assert_eq!(small.penalized.index_set()[0], 5);
        assert_eq!(small.penalized.k_rho(), 100.0);
        assert_eq!(small.ratio_eval_points[0].dim(), 3);
        small.validate().unwrap();
    }

    #[test]
    fn evaluate_dispatch() {
        let rows: Vec<[f64; 2]> = (0..40).map(|i| [i as f64, (i * 17 % 40) as f64]).collect();
        let ranks = RankMatrix::from_sample(&Sample::from_rows(&rows).unwrap());
        let tuning = Tuning::scaled_for(40, 2).unwrap();
        let x = Point::xy(0.5, 0.5);
        let empirical: EstimatorSpec = "empirical".parse().unwrap();
        assert_eq!(
            evaluate_estimator(&empirical, &ranks, &tuning, 10, &x).unwrap(),
            crate::empirical_stdf(&ranks, 10.0, &x).unwrap()
        );
        for spec in EstimatorSpec::study_set().into_iter().skip(1) {
            let v = evaluate_estimator(&spec, &ranks, &tuning, 10, &x).unwrap();
            assert!((0.5..=1.0).contains(&v), "{spec}: {v}");
        }
    }

    #[test]
    fn fingerprint_tracks_config() {
        let a = ExperimentConfig::default();
        let mut b = a.clone();
        assert_eq!(a.fingerprint(), b.fingerprint());
        b.seed = 1;
        assert_ne!(a.fingerprint(), b.fingerprint());
    }
}
