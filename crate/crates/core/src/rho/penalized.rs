//! Penalized nonlinear least-squares estimator of the second-order parameter.
//!
//! For a point `x`, the curve `i -> L_i(x)` over the index set `M_n` is
//! regressed on the predictor `(i / k_rho)^(-r)`:
//!
//! ```text
//! RSS(b0, b1, r)     = sum_i w_i [L_i(x) - b0 - b1 (i/k_rho)^(-r)]^2
//! RSS_eta(b0, b1, r) = RSS(b0, b1, r) + (eta / |r|) * min_{b0', b1', r'} RSS(b0', b1', r')
//! ```
//!
//! For fixed `r` the inner problem is a weighted simple linear regression,
//! solved in closed form ([`profile_rss`]), so the estimator reduces to a
//! one-dimensional search over a grid of `r` values. The penalty pushes the
//! estimate away from zero.

use serde::{Deserialize, Serialize};

use crate::empirical::StdfSource;
use crate::error::{Error, Result};
use crate::sample::Point;

use super::RhoEstimate;

/// Tuning parameters of the penalized estimator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PenalizedRhoConfig {
    index_set: Vec<usize>,
    k_rho: f64,
    weights: Vec<f64>,
    k_lo: f64,
    k_hi: f64,
    eta: f64,
    grid: Vec<f64>,
    eval_points: Vec<Point>,
}

impl Default for PenalizedRhoConfig {
    /// `M_n = {50, 100, ..., 1000}`, `w_i ∝ i`, `k_rho = 1000`,
    /// `[K', K''] = [-4, -0.1]`, `eta = 0.5`, grid `{-4, -3.9, ..., -0.1}`,
    /// evaluation points `{(0.3,0.3), (0.35,0.35), ..., (0.7,0.7)}`.
    fn default() -> Self {
        let index_set: Vec<usize> = (1..=20).map(|i| 50 * i).collect();
        PenalizedRhoConfig::new(
            index_set.clone(),
            1000.0,
            proportional_weights(&index_set),
            -4.0,
            -0.1,
            0.5,
            default_grid(),
            diagonal_points(2),
        )
        .expect("default penalized configuration is valid")
    }
}

/// `{-4.0, -3.9, ..., -0.1}`, ascending.
pub fn default_grid() -> Vec<f64> {
    (1..=40).rev().map(|i| -(i as f64) / 10.0).collect()
}

/// `(c, ..., c)` in dimension `d` for `c = 0.30, 0.35, ..., 0.70`.
pub fn diagonal_points(d: usize) -> Vec<Point> {
    (0..=8)
        .map(|i| Point::new(vec![(30 + 5 * i) as f64 / 100.0; d]).expect("diagonal point"))
        .collect()
}

/// Weights proportional to the index, normalized to sum to one.
pub fn proportional_weights(index_set: &[usize]) -> Vec<f64> {
    let total: f64 = index_set.iter().map(|&i| i as f64).sum();
    index_set.iter().map(|&i| i as f64 / total).collect()
}

impl PenalizedRhoConfig {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        index_set: Vec<usize>,
        k_rho: f64,
        weights: Vec<f64>,
        k_lo: f64,
        k_hi: f64,
        eta: f64,
        grid: Vec<f64>,
        eval_points: Vec<Point>,
    ) -> Result<Self> {
        let cfg = PenalizedRhoConfig {
            index_set,
            k_rho,
            weights,
            k_lo,
            k_hi,
            eta,
            grid,
            eval_points,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.index_set.len() < 2 {
            return Err(Error::param("index_set", "needs at least two indices"));
        }
        if self.index_set[0] == 0 || self.index_set.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::param("index_set", "must be strictly ascending positive integers"));
        }
        if !(self.k_rho > 0.0 && self.k_rho.is_finite()) {
            return Err(Error::param("k_rho", "must be positive"));
        }
        if self.weights.len() != self.index_set.len() {
            return Err(Error::param("weights", "must have one weight per index"));
        }
        if self.weights.iter().any(|w| !(*w > 0.0 && w.is_finite())) {
            return Err(Error::param("weights", "must be positive"));
        }
        let total: f64 = self.weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::param("weights", format!("must sum to 1, got {total}")));
        }
        if !(self.k_lo < self.k_hi && self.k_hi < 0.0) {
            return Err(Error::param("k_lo/k_hi", "need k_lo < k_hi < 0"));
        }
        if !(self.eta >= 0.0 && self.eta.is_finite()) {
            return Err(Error::param("eta", "must be nonnegative"));
        }
        if self.grid.is_empty() {
            return Err(Error::param("grid", "must be nonempty"));
        }
        if self.grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::param("grid", "must be strictly ascending"));
        }
        if self.grid.iter().any(|&r| r < self.k_lo || r > self.k_hi) {
            return Err(Error::param("grid", "must lie within [k_lo, k_hi]"));
        }
        if self.eval_points.is_empty() {
            return Err(Error::param("eval_points", "must be nonempty"));
        }
        Ok(())
    }

    pub fn index_set(&self) -> &[usize] {
        &self.index_set
    }

    pub fn k_rho(&self) -> f64 {
        self.k_rho
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.k_lo, self.k_hi)
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn eval_points(&self) -> &[Point] {
        &self.eval_points
    }

    pub fn with_eta(mut self, eta: f64) -> Result<Self> {
        self.eta = eta;
        self.validate()?;
        Ok(self)
    }

    pub fn with_k_rho(mut self, k_rho: f64) -> Result<Self> {
        self.k_rho = k_rho;
        self.validate()?;
        Ok(self)
    }

    pub fn with_eval_points(mut self, points: Vec<Point>) -> Result<Self> {
        self.eval_points = points;
        self.validate()?;
        Ok(self)
    }

    /// Replaces the index set, re-deriving `w_i ∝ i` weights and setting
    /// `k_rho = max(M_n)`.
    pub fn with_index_set(mut self, index_set: Vec<usize>) -> Result<Self> {
        self.weights = proportional_weights(&index_set);
        self.k_rho = index_set.last().copied().unwrap_or(0) as f64;
        self.index_set = index_set;
        self.validate()?;
        Ok(self)
    }

    /// Predictor `(i / k_rho)^(-r)` for every index.
    fn predictor(&self, r: f64) -> impl Iterator<Item = f64> + '_ {
        self.index_set.iter().map(move |&i| (i as f64 / self.k_rho).powf(-r))
    }

    fn check_curve(&self, curve: &[f64]) -> Result<()> {
        if curve.len() != self.index_set.len() {
            return Err(Error::param(
                "curve",
                format!("expected {} values, got {}", self.index_set.len(), curve.len()),
            ));
        }
        Ok(())
    }
}

/// Weighted residual sum of squares at `(b0, b1, r)`.
pub fn rss_plain(curve: &[f64], cfg: &PenalizedRhoConfig, b0: f64, b1: f64, r: f64) -> Result<f64> {
    cfg.check_curve(curve)?;
    Ok(cfg
        .weights
        .iter()
        .zip(curve)
        .zip(cfg.predictor(r))
        .map(|((w, y), p)| {
            let e = y - b0 - b1 * p;
            w * e * e
        })
        .sum())
}

/// Closed-form weighted least-squares fit at fixed `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileFit {
    pub b0: f64,
    pub b1: f64,
    pub rss: f64,
}

/// Weighted moments of a fixed curve against a predictor.
#[derive(Debug, Clone, Copy)]
struct Moments {
    mean_x: f64,
    mean_y: f64,
    sxx: f64,
    sxy: f64,
    syy: f64,
}

fn moments(curve: &[f64], cfg: &PenalizedRhoConfig, r: f64) -> Moments {
    let w = &cfg.weights;
    let xs: Vec<f64> = cfg.predictor(r).collect();
    let mean_x: f64 = w.iter().zip(&xs).map(|(w, x)| w * x).sum();
    let mean_y: f64 = w.iter().zip(curve).map(|(w, y)| w * y).sum();
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for ((w, x), y) in w.iter().zip(&xs).zip(curve) {
        let (dx, dy) = (x - mean_x, y - mean_y);
        sxx += w * dx * dx;
        sxy += w * dx * dy;
        syy += w * dy * dy;
    }
    Moments {
        mean_x,
        mean_y,
        sxx,
        sxy,
        syy,
    }
}

/// All values equal; the weighted spread of such a curve is only rounding
/// noise.
fn is_flat(curve: &[f64]) -> bool {
    curve.iter().all(|&y| y == curve[0])
}

/// Minimizes [`rss_plain`] over `(b0, b1)` at fixed `r`.
///
/// Errors when the curve is flat, where the squared weighted
/// correlation is undefined.
pub fn profile_rss(curve: &[f64], cfg: &PenalizedRhoConfig, r: f64) -> Result<ProfileFit> {
    cfg.check_curve(curve)?;
    if !(r < 0.0) {
        return Err(Error::param("r", format!("must be negative, got {r}")));
    }
    if is_flat(curve) {
        return Err(Error::Degenerate("flat curve"));
    }
    let m = moments(curve, cfg, r);
    if m.sxx == 0.0 {
        return Err(Error::Degenerate("constant predictor"));
    }
    let b1 = m.sxy / m.sxx;
    let b0 = m.mean_y - b1 * m.mean_x;
    // explicit residuals keep exact fits at (numerically) zero
    let rss = rss_plain(curve, cfg, b0, b1, r)?;
    Ok(ProfileFit { b0, b1, rss })
}

/// Squared weighted correlation `S_xy^2 / (S_xx S_yy)` between the curve and
/// the predictor at `r`; the profiled RSS equals `S_yy (1 - corr^2)`.
pub fn squared_correlation(curve: &[f64], cfg: &PenalizedRhoConfig, r: f64) -> Result<f64> {
    cfg.check_curve(curve)?;
    let m = moments(curve, cfg, r);
    if is_flat(curve) || m.sxx == 0.0 {
        return Err(Error::Degenerate("flat curve"));
    }
    Ok(m.sxy * m.sxy / (m.sxx * m.syy))
}

/// Weighted variance `S_yy` of the curve.
pub fn curve_spread(curve: &[f64], cfg: &PenalizedRhoConfig) -> Result<f64> {
    cfg.check_curve(curve)?;
    Ok(moments(curve, cfg, -1.0).syy)
}

/// Result of the penalized grid search at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenalizedFit {
    pub b0: f64,
    pub b1: f64,
    pub rho: f64,
    /// Unpenalized minimum RSS over the grid (the penalty scale).
    pub min_rss: f64,
}

/// Two-pass grid search: the unpenalized minimum `c` over the grid, then the
/// grid point minimizing `RSS(r) + eta c / |r|`. Ties go to the most negative
/// grid point.
pub fn rho_penalized_pointwise(curve: &[f64], cfg: &PenalizedRhoConfig) -> Result<PenalizedFit> {
    let fits = cfg
        .grid
        .iter()
        .map(|&r| profile_rss(curve, cfg, r))
        .collect::<Result<Vec<_>>>()?;
    let min_rss = fits.iter().map(|f| f.rss).fold(f64::INFINITY, f64::min);
    let mut best: Option<(usize, f64)> = None;
    for (idx, (fit, &r)) in fits.iter().zip(&cfg.grid).enumerate() {
        let objective = fit.rss + cfg.eta / r.abs() * min_rss;
        if best.is_none_or(|(_, b)| objective < b) {
            best = Some((idx, objective));
        }
    }
    let (idx, _) = best.expect("grid is nonempty");
    Ok(PenalizedFit {
        b0: fits[idx].b0,
        b1: fits[idx].b1,
        rho: cfg.grid[idx],
        min_rss,
    })
}

/// The curve `i -> L_i(x)` over the configured index set.
pub fn stdf_curve<S: StdfSource + ?Sized>(source: &S, cfg: &PenalizedRhoConfig, x: &Point) -> Result<Vec<f64>> {
    cfg.index_set.iter().map(|&i| source.stdf_at(i as f64, x)).collect()
}

/// Fallback for points whose curve is flat.
pub const PENALIZED_FALLBACK: f64 = -1.0;

/// Mean of pointwise penalized estimates over the configured evaluation
/// points. Points with a flat curve contribute [`PENALIZED_FALLBACK`].
pub fn rho_penalized_agg<S: StdfSource + ?Sized>(source: &S, cfg: &PenalizedRhoConfig) -> Result<RhoEstimate> {
    cfg.validate()?;
    let per_point = cfg
        .eval_points
        .iter()
        .map(|x| {
            let curve = stdf_curve(source, cfg, x)?;
            let rho = match rho_penalized_pointwise(&curve, cfg) {
                Ok(fit) => fit.rho,
                Err(Error::Degenerate(_)) => PENALIZED_FALLBACK,
                Err(e) => return Err(e),
            };
            Ok((x.clone(), rho))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RhoEstimate::mean_of(per_point))
}
