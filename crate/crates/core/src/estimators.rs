//! Kernel-smoothed, Beirlant-type, and three-level ("dot") bias-corrected
//! estimators of the stable tail dependence function.
//!
//! Every estimator is generic over a [`StdfSource`], so the same code runs on
//! real rank data and on synthetic curves.

use serde::{Deserialize, Serialize};

use crate::empirical::StdfSource;
use crate::error::{Error, Result};
use crate::sample::Point;

/// Power kernel `K(t) = (tau + 1) t^tau` on `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerKernel {
    tau: f64,
}

impl PowerKernel {
    pub fn new(tau: f64) -> Result<Self> {
        if !(tau > -1.0 && tau.is_finite()) {
            return Err(Error::param("tau", format!("must exceed -1, got {tau}")));
        }
        Ok(PowerKernel { tau })
    }

    pub fn weight(&self, t: f64) -> f64 {
        if t > 0.0 && t < 1.0 {
            (self.tau + 1.0) * t.powf(self.tau)
        } else {
            0.0
        }
    }
}

/// `a_{j,k} = j / (k + 1)` for `j = 1..=k`.
pub fn kernel_nodes(k: usize) -> impl Iterator<Item = f64> {
    let denom = (k + 1) as f64;
    (1..=k).map(move |j| j as f64 / denom)
}

fn check_k(name: &'static str, k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::param(name, "must be at least 1"));
    }
    Ok(())
}

fn check_rho(rho: f64) -> Result<()> {
    if !(rho < 0.0 && rho.is_finite()) {
        return Err(Error::param("rho", format!("must be negative, got {rho}")));
    }
    Ok(())
}

/// `L_{k a}(x)` for `a = a_{j,k}`, `j = 1..=k`.
fn node_values<S: StdfSource + ?Sized>(source: &S, k: usize, x: &Point) -> Result<Vec<f64>> {
    let kf = k as f64;
    kernel_nodes(k).map(|a| source.stdf_at(kf * a, x)).collect()
}

/// `(1/k) sum_j K(a_{j,k}) L_{k a_{j,k}}(x)`.
pub fn kernel_smoothed_stdf<S: StdfSource + ?Sized>(
    source: &S,
    k: usize,
    tau: f64,
    x: &Point,
) -> Result<f64> {
    power_kernel_stdf(source, k, tau, 1.0, x)
}

/// `(1/k) sum_j K(a_{j,k}) L_{k a_{j,k}}(x)^xi`.
pub fn power_kernel_stdf<S: StdfSource + ?Sized>(
    source: &S,
    k: usize,
    tau: f64,
    xi: f64,
    x: &Point,
) -> Result<f64> {
    check_k("k", k)?;
    if !(xi > 0.0 && xi.is_finite()) {
        return Err(Error::param("xi", format!("must be positive, got {xi}")));
    }
    let kernel = PowerKernel::new(tau)?;
    let values = node_values(source, k, x)?;
    let sum: f64 = kernel_nodes(k)
        .zip(&values)
        .map(|(a, &v)| kernel.weight(a) * if xi == 1.0 { v } else { v.powf(xi) })
        .sum();
    Ok(sum / k as f64)
}

/// Slope estimate of the Beirlant et al. bias correction:
///
/// ```text
///            sum_j sum_l K_B(a_j) K_B(a_l) (a_j^-rho - a_l^-rho) L_{kbar a_j}(x)
/// alpha = ---------------------------------------------------------------------
///            sum_j sum_l K_B(a_j) K_B(a_l) (a_j^-rho - a_l^-rho) a_j^-rho
/// ```
///
/// with `a_j = j / (kbar + 1)`. The double sums are evaluated in factorized
/// form; the numerator is computed on values centred at the first node, which
/// leaves it unchanged (the weights `sum_l K_B(a_l)(a_j^-rho - a_l^-rho)` sum
/// to zero over `j`) and makes it exactly zero on constant curves.
pub fn beirlant_alpha<S: StdfSource + ?Sized>(
    source: &S,
    kbar: usize,
    tau_b: f64,
    rho: f64,
    x: &Point,
) -> Result<f64> {
    if kbar < 2 {
        return Err(Error::param("kbar", format!("must be at least 2, got {kbar}")));
    }
    check_rho(rho)?;
    let kernel = PowerKernel::new(tau_b)?;
    let values = node_values(source, kbar, x)?;
    Ok(beirlant_alpha_from_values(&values, kernel, rho))
}

fn beirlant_alpha_from_values(values: &[f64], kernel: PowerKernel, rho: f64) -> f64 {
    let kbar = values.len();
    let w: Vec<f64> = kernel_nodes(kbar).map(|a| kernel.weight(a)).collect();
    let p: Vec<f64> = kernel_nodes(kbar).map(|a| a.powf(-rho)).collect();
    let s0: f64 = w.iter().sum();
    let s1: f64 = w.iter().zip(&p).map(|(w, p)| w * p).sum();
    let base = values[0];
    let mut num = 0.0;
    let mut den = 0.0;
    for ((&wj, &pj), &vj) in w.iter().zip(&p).zip(values) {
        let c = wj * (pj * s0 - s1);
        num += c * (vj - base);
        den += c * pj;
    }
    assert!(den > 0.0, "Beirlant denominator vanished (kbar={kbar}, rho={rho})");
    num / den
}

/// Tuning of the Beirlant et al. estimator of `L`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeirlantConfig {
    pub kbar: usize,
    pub tau: f64,
    pub tau_b: f64,
}

impl Default for BeirlantConfig {
    fn default() -> Self {
        BeirlantConfig {
            kbar: 990,
            tau: 5.0,
            tau_b: 0.5,
        }
    }
}

impl BeirlantConfig {
    pub fn validate(&self) -> Result<()> {
        if self.kbar < 2 {
            return Err(Error::param("kbar", format!("must be at least 2, got {}", self.kbar)));
        }
        PowerKernel::new(self.tau)?;
        PowerKernel::new(self.tau_b)?;
        Ok(())
    }
}

/// Beirlant et al. bias-corrected estimator, clamped to
/// `[max_j x_j, sum_j x_j]`.
pub fn beirlant_stdf<S: StdfSource + ?Sized>(
    source: &S,
    k: usize,
    cfg: &BeirlantConfig,
    rho: f64,
    x: &Point,
) -> Result<f64> {
    let alpha = beirlant_alpha(source, cfg.kbar, cfg.tau_b, rho, x)?;
    beirlant_stdf_with_alpha(source, k, cfg, rho, alpha, x)
}

/// As [`beirlant_stdf`] with a precomputed `alpha_{kbar}(x, rho)`, which does
/// not depend on `k`.
pub fn beirlant_stdf_with_alpha<S: StdfSource + ?Sized>(
    source: &S,
    k: usize,
    cfg: &BeirlantConfig,
    rho: f64,
    alpha: f64,
    x: &Point,
) -> Result<f64> {
    check_k("k", k)?;
    check_rho(rho)?;
    let kernel = PowerKernel::new(cfg.tau)?;
    let kf = k as f64;
    let values = node_values(source, k, x)?;
    let mut smoothed = 0.0;
    let mut mass = 0.0;
    let mut tilted = 0.0;
    for (a, v) in kernel_nodes(k).zip(values) {
        let w = kernel.weight(a);
        smoothed += w * v;
        mass += w;
        tilted += w * a.powf(-rho);
    }
    let (smoothed, mass, tilted) = (smoothed / kf, mass / kf, tilted / kf);
    let ratio = (cfg.kbar as f64 / kf).powf(rho);
    let raw = (smoothed - ratio * alpha * tilted) / mass;
    Ok(clamp_stdf(x, raw))
}

/// Intermediate level factor `(a^-rho + 1)^(-1/rho)` of the dot estimator.
pub fn dot_level_factor(a: f64, rho: f64) -> f64 {
    (a.powf(-rho) + 1.0).powf(-1.0 / rho)
}

/// `L_{ka}(x) - L_{kb}(x) + L_k(x)` with `b = (a^-rho + 1)^(-1/rho)`,
/// without truncation.
pub fn dot_stdf_unclamped<S: StdfSource + ?Sized>(
    source: &S,
    k: f64,
    a: f64,
    rho: f64,
    x: &Point,
) -> Result<f64> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::param("a", format!("must lie in (0, 1), got {a}")));
    }
    check_rho(rho)?;
    let b = dot_level_factor(a, rho);
    Ok(source.stdf_at(k * a, x)? - source.stdf_at(k * b, x)? + source.stdf_at(k, x)?)
}

/// Dot estimator, clamped to `[max_j x_j, sum_j x_j]`.
pub fn dot_stdf<S: StdfSource + ?Sized>(
    source: &S,
    k: f64,
    a: f64,
    rho: f64,
    x: &Point,
) -> Result<f64> {
    dot_stdf_unclamped(source, k, a, rho, x).map(|v| clamp_stdf(x, v))
}

/// Median over `kset` of clamped dot estimates, clamped again.
pub fn dot_aggregated_stdf<S: StdfSource + ?Sized>(
    source: &S,
    kset: &[usize],
    a: f64,
    rho: f64,
    x: &Point,
) -> Result<f64> {
    if kset.is_empty() {
        return Err(Error::param("kset", "must be nonempty"));
    }
    let mut values = kset
        .iter()
        .map(|&k| {
            check_k("kset", k)?;
            dot_stdf(source, k as f64, a, rho, x)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(clamp_stdf(x, median(&mut values)))
}

/// Median; the mean of the two central values for even lengths.
///
/// Panics on an empty slice.
pub fn median(values: &mut [f64]) -> f64 {
    assert!(!values.is_empty(), "median of empty slice");
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        0.5 * (values[mid - 1] + values[mid])
    }
}

/// Projects `v` onto `[max_j x_j, sum_j x_j]`.
pub fn clamp_stdf(x: &Point, v: f64) -> f64 {
    x.sum().min(x.max_coord().max(v))
}
