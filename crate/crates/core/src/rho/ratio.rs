//! Ratio-of-differences estimators of the second-order parameter.
//!
//! Each estimator builds a difference `Delta(x)` that cancels the first-order
//! term by homogeneity, then reads `rho` off the scaling of `Delta` between
//! `x` and `r x`:
//!
//! ```text
//! rho(x) = (1 - log|Delta(r x) / Delta(x)| / log r) min 0
//! ```
//!
//! followed by the fallback rule: values above `fallback_threshold` are
//! replaced by `fallback_value`.

use serde::{Deserialize, Serialize};

use crate::empirical::StdfSource;
use crate::error::{Error, Result};
use crate::estimators::{kernel_smoothed_stdf, power_kernel_stdf};
use crate::sample::Point;

use super::RhoEstimate;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioRhoConfig {
    pub kbar: usize,
    pub a: f64,
    pub r: f64,
    pub fallback_threshold: f64,
    pub fallback_value: f64,
}

impl Default for RatioRhoConfig {
    fn default() -> Self {
        RatioRhoConfig {
            kbar: 990,
            a: 0.4,
            r: 0.4,
            fallback_threshold: -0.1,
            fallback_value: -1.0,
        }
    }
}

impl RatioRhoConfig {
    pub fn validate(&self) -> Result<()> {
        if self.kbar == 0 {
            return Err(Error::param("kbar", "must be at least 1"));
        }
        if !(self.a > 0.0 && self.a < 1.0) {
            return Err(Error::param("a", format!("must lie in (0, 1), got {}", self.a)));
        }
        if !(self.r > 0.0 && self.r < 1.0) {
            return Err(Error::param("r", format!("must lie in (0, 1), got {}", self.r)));
        }
        if !(self.fallback_threshold < 0.0) {
            return Err(Error::param("fallback_threshold", "must be negative"));
        }
        if !(self.fallback_value <= self.fallback_threshold) {
            return Err(Error::param(
                "fallback_value",
                "must not exceed the fallback threshold",
            ));
        }
        Ok(())
    }

    /// Replaces estimates above the threshold by the fallback value.
    pub fn apply_fallback(&self, rho: f64) -> f64 {
        if rho > self.fallback_threshold {
            self.fallback_value
        } else {
            rho
        }
    }

    /// Maps a degenerate-ratio error to the fallback value.
    pub fn or_fallback(&self, estimate: Result<f64>) -> Result<f64> {
        match estimate {
            Err(Error::Degenerate(_)) => Ok(self.fallback_value),
            other => other,
        }
    }
}

/// Tuning of the Goegebeur-Qin kernel estimator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GoegebeurConfig {
    pub tau: f64,
    pub xi1: f64,
    pub xi2: f64,
}

impl Default for GoegebeurConfig {
    fn default() -> Self {
        GoegebeurConfig {
            tau: 10.0,
            xi1: 4.0,
            xi2: 4.0,
        }
    }
}

/// `(1 - log|d_rx / d_x| / log r) min 0`; errors when either difference is
/// zero or the ratio is not finite.
pub fn ratio_rho(delta_x: f64, delta_rx: f64, r: f64) -> Result<f64> {
    if delta_x == 0.0 || !delta_x.is_finite() {
        return Err(Error::Degenerate("Delta(x) is zero"));
    }
    if delta_rx == 0.0 || !delta_rx.is_finite() {
        return Err(Error::Degenerate("Delta(r x) is zero"));
    }
    let raw = 1.0 - (delta_rx / delta_x).abs().ln() / r.ln();
    if !raw.is_finite() {
        return Err(Error::Degenerate("non-finite difference ratio"));
    }
    Ok(raw.min(0.0))
}

/// `a^-1 L_kbar(a x) - L_kbar(x)`.
pub fn delta_fougeres<S: StdfSource + ?Sized>(source: &S, kbar: usize, a: f64, x: &Point) -> Result<f64> {
    let k = kbar as f64;
    Ok(source.stdf_at(k, &x.scaled(a))? / a - source.stdf_at(k, x)?)
}

fn ratio_estimate(cfg: &RatioRhoConfig, delta: impl Fn(&Point) -> Result<f64>, x: &Point) -> Result<f64> {
    cfg.validate()?;
    let d_x = delta(x)?;
    let d_rx = delta(&x.scaled(cfg.r))?;
    ratio_rho(d_x, d_rx, cfg.r).map(|rho| cfg.apply_fallback(rho))
}

/// Fougeres et al. pointwise estimator.
pub fn rho_fougeres<S: StdfSource + ?Sized>(source: &S, cfg: &RatioRhoConfig, x: &Point) -> Result<f64> {
    ratio_estimate(cfg, |p| delta_fougeres(source, cfg.kbar, cfg.a, p), x)
}

/// Beirlant et al. estimator: the Fougeres construction on the kernel-smoothed
/// estimator.
pub fn rho_beirlant<S: StdfSource + ?Sized>(
    source: &S,
    cfg: &RatioRhoConfig,
    tau: f64,
    x: &Point,
) -> Result<f64> {
    let delta = |p: &Point| -> Result<f64> {
        Ok(kernel_smoothed_stdf(source, cfg.kbar, tau, &p.scaled(cfg.a))? / cfg.a
            - kernel_smoothed_stdf(source, cfg.kbar, tau, p)?)
    };
    ratio_estimate(cfg, delta, x)
}

/// Goegebeur-Qin estimator built on powers of the kernel-smoothed estimator:
///
/// ```text
/// Delta(x) = [a^-xi1 Lt_{kbar,xi1}(a x)]^(1/xi1) - [Lt_{kbar,xi2}(x)]^(1/xi2)
/// ```
pub fn rho_goegebeur<S: StdfSource + ?Sized>(
    source: &S,
    cfg: &RatioRhoConfig,
    gq: &GoegebeurConfig,
    x: &Point,
) -> Result<f64> {
    let delta = |p: &Point| -> Result<f64> {
        let scaled = power_kernel_stdf(source, cfg.kbar, gq.tau, gq.xi1, &p.scaled(cfg.a))?;
        let plain = power_kernel_stdf(source, cfg.kbar, gq.tau, gq.xi2, p)?;
        Ok((cfg.a.powf(-gq.xi1) * scaled).powf(1.0 / gq.xi1) - plain.powf(1.0 / gq.xi2))
    };
    ratio_estimate(cfg, delta, x)
}

/// Mean over `points` of pointwise Fougeres estimates, each after the
/// fallback rule (degenerate points take the fallback value).
pub fn rho_fougeres_agg<S: StdfSource + ?Sized>(
    source: &S,
    cfg: &RatioRhoConfig,
    points: &[Point],
) -> Result<RhoEstimate> {
    if points.is_empty() {
        return Err(Error::param("eval_points", "must be nonempty"));
    }
    let per_point = points
        .iter()
        .map(|x| cfg.or_fallback(rho_fougeres(source, cfg, x)).map(|v| (x.clone(), v)))
        .collect::<Result<Vec<_>>>()?;
    Ok(RhoEstimate::mean_of(per_point))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::empirical::FnSource;
    use approx::assert_relative_eq;

    fn quadratic_family(alpha: f64) -> FnSource<impl Fn(f64, &Point) -> f64> {
        // L(x) = s + alpha s^2 with s = x1 + x2: homogeneous of degree 1 plus degree 2 (rho = -1)
        FnSource(move |_, x: &Point| {
            let s = x.sum();
            s + alpha * s * s
        })
    }

    #[test]
    fn homogeneous_curve_has_no_difference() {
        let src = FnSource(|_, x: &Point| x.sum());
        let d = delta_fougeres(&src, 100, 0.4, &Point::xy(0.3, 0.5)).unwrap();
        assert!(d.abs() < 1e-15);
    }

    #[test]
    fn delta_picks_up_second_order_term() {
        // M(x) = s^2 is homogeneous of degree 1 - rho with rho = -1
        let alpha = 0.01;
        let x = Point::xy(0.3, 0.5);
        let d = delta_fougeres(&quadratic_family(alpha), 100, 0.4, &x).unwrap();
        let m = x.sum().powi(2);
        assert_relative_eq!(d, alpha * (0.4f64.powi(1) - 1.0) * m, max_relative = 1e-12);
        let d2 = delta_fougeres(&quadratic_family(alpha), 100, 0.4, &x.scaled(2.0)).unwrap();
        assert_relative_eq!(d2, 4.0 * d, max_relative = 1e-12);
    }

    #[test]
    fn fougeres_recovers_minus_one() {
        let cfg = RatioRhoConfig::default();
        let rho = rho_fougeres(&quadratic_family(0.01), &cfg, &Point::xy(1.0, 1.0)).unwrap();
        assert_relative_eq!(rho, -1.0, epsilon = 1e-9);
    }

    #[test]
    fn fallback_on_degree_one_remainder() {
        // L = s + c s ln s gives Delta(x) = c s ln a, so Delta(r x) / Delta(x) = r
        let src = FnSource(|_, x: &Point| {
            let s = x.sum();
            s + 0.05 * s * s.ln()
        });
        let cfg = RatioRhoConfig::default();
        let x = Point::xy(1.0, 1.0);
        let d_x = delta_fougeres(&src, cfg.kbar, cfg.a, &x).unwrap();
        let d_rx = delta_fougeres(&src, cfg.kbar, cfg.a, &x.scaled(cfg.r)).unwrap();
        assert!(ratio_rho(d_x, d_rx, cfg.r).unwrap().abs() < 1e-12);
        assert_eq!(rho_fougeres(&src, &cfg, &x).unwrap(), -1.0);
    }

    #[test]
    fn degenerate_delta_maps_to_fallback() {
        let cfg = RatioRhoConfig::default();
        let constant = FnSource(|_, _: &Point| 1.0);
        // a^-1 * 1 - 1 != 0, so use a curve that is exactly a^-1-homogeneous: L = 0
        let zero = FnSource(|_, _: &Point| 0.0);
        let err = rho_fougeres(&zero, &cfg, &Point::xy(1.0, 1.0)).unwrap_err();
        assert!(matches!(err, Error::Degenerate(_)));
        assert_eq!(cfg.or_fallback(Err(err)).unwrap(), -1.0);
        // constant curve: Delta(x) = Delta(r x), ratio 1, raw 1 -> capped 0 -> fallback
        assert_eq!(rho_fougeres(&constant, &cfg, &Point::xy(1.0, 1.0)).unwrap(), -1.0);
    }

    #[test]
    fn beirlant_rho_on_quadratic_family() {
        let cfg = RatioRhoConfig {
            kbar: 50,
            ..Default::default()
        };
        let rho = rho_beirlant(&quadratic_family(0.02), &cfg, 5.0, &Point::xy(0.5, 0.5)).unwrap();
        assert_relative_eq!(rho, -1.0, epsilon = 1e-9);
        let zero = FnSource(|_, _: &Point| 0.0);
        let res = rho_beirlant(&zero, &cfg, 5.0, &Point::xy(0.5, 0.5));
        assert_eq!(cfg.or_fallback(res).unwrap(), -1.0);
    }

    #[test]
    fn goegebeur_with_unit_powers_matches_beirlant() {
        let cfg = RatioRhoConfig {
            kbar: 60,
            ..Default::default()
        };
        let src = FnSource(|m: f64, x: &Point| {
            let s = x.sum();
            s + 0.03 * s.powf(1.6) * (m / 60.0).powf(0.6)
        });
        let x = Point::xy(0.6, 0.4);
        let gq = GoegebeurConfig {
            tau: 3.0,
            xi1: 1.0,
            xi2: 1.0,
        };
        let b = rho_beirlant(&src, &cfg, 3.0, &x).unwrap();
        let g = rho_goegebeur(&src, &cfg, &gq, &x).unwrap();
        assert_relative_eq!(b, g, max_relative = 1e-12);
        assert_relative_eq!(b, -0.6, epsilon = 1e-9);
    }

    #[test]
    fn aggregated_mean() {
        let cfg = RatioRhoConfig::default();
        let zero = FnSource(|_, _: &Point| 0.0);
        let pts = vec![Point::xy(0.3, 0.3), Point::xy(0.5, 0.5)];
        assert_eq!(rho_fougeres_agg(&zero, &cfg, &pts).unwrap().value, -1.0);
        assert!(rho_fougeres_agg(&zero, &cfg, &[]).is_err());
    }
}
