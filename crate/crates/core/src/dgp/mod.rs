//! Data-generating processes for the Monte Carlo study and their true stable
//! tail dependence functions.

mod oracle;
mod sampler;

pub use oracle::{mc_stdf_oracle, mc_stdf_oracle_many, McEstimate};
pub use sampler::{positive_stable, sample_dgp, RngStream, TailSampler};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sample::Point;
use crate::special::student_t_cdf;

/// Stable tail dependence function used as the Archimax generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArchimaxGenerator {
    /// `(x^2 + y^2)^(1/2)`
    Logistic,
    /// `(x^2 + y^2 + x y) / (x + y)`
    Mixed,
}

impl ArchimaxGenerator {
    pub fn value(self, x: f64, y: f64) -> f64 {
        match self {
            ArchimaxGenerator::Logistic => x.hypot(y),
            ArchimaxGenerator::Mixed => {
                let s = x + y;
                if s == 0.0 {
                    0.0
                } else {
                    s - x * y / s
                }
            }
        }
    }

    /// Partial derivative with respect to the first argument.
    pub fn d_first(self, x: f64, y: f64) -> f64 {
        match self {
            ArchimaxGenerator::Logistic => {
                let h = x.hypot(y);
                if h == 0.0 {
                    1.0
                } else {
                    x / h
                }
            }
            ArchimaxGenerator::Mixed => {
                let s = x + y;
                if s == 0.0 {
                    1.0
                } else {
                    1.0 - (y / s) * (y / s)
                }
            }
        }
    }
}

/// A bivariate data-generating process.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum DgpSpec {
    /// Student-t copula with `df` degrees of freedom and correlation `theta`.
    TCopula { df: f64, theta: f64 },
    /// Bivariate Pareto of type II with joint survival `(1 + x + y)^(-beta)`.
    Bpii { beta: f64 },
    /// Symmetric logistic (Gumbel) extreme-value copula, `0 < s <= 1`.
    SymmetricLogistic { s: f64 },
    /// Archimax copula `psi(l(psi^-1(u), psi^-1(v)))` with the Clayton
    /// generator `psi(t) = 1/(1+t)`.
    Archimax { generator: ArchimaxGenerator },
}

/// CLI names of the eight study processes, in table order.
pub const DGP_NAMES: [&str; 8] = [
    "cauchy",
    "t2",
    "t4",
    "t6",
    "bpii3",
    "logistic",
    "archimax-logistic",
    "archimax-mixed",
];

impl DgpSpec {
    pub fn catalogue() -> Vec<(&'static str, DgpSpec)> {
        use ArchimaxGenerator::*;
        let specs = [
            DgpSpec::TCopula { df: 1.0, theta: 0.0 },
            DgpSpec::TCopula { df: 2.0, theta: 0.5 },
            DgpSpec::TCopula { df: 4.0, theta: 0.5 },
            DgpSpec::TCopula { df: 6.0, theta: 0.5 },
            DgpSpec::Bpii { beta: 3.0 },
            DgpSpec::SymmetricLogistic { s: 1.0 / 3.0 },
            DgpSpec::Archimax { generator: Logistic },
            DgpSpec::Archimax { generator: Mixed },
        ];
        DGP_NAMES.into_iter().zip(specs).collect()
    }

    /// Looks up a catalogue entry by its CLI name.
    pub fn by_name(name: &str) -> Result<DgpSpec> {
        DgpSpec::catalogue()
            .into_iter()
            .find(|(n, _)| *n == name)
            .map(|(_, s)| s)
            .ok_or_else(|| {
                Error::param(
                    "dgp",
                    format!("unknown process `{name}`; expected one of {}", DGP_NAMES.join(", ")),
                )
            })
    }

    /// Position in the catalogue, if this is one of the study processes.
    pub fn catalogue_index(&self) -> Option<usize> {
        DgpSpec::catalogue().iter().position(|(_, s)| s == self)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            DgpSpec::TCopula { df, theta } => {
                if !(df > 0.0 && df.is_finite()) {
                    return Err(Error::param("df", format!("must be positive, got {df}")));
                }
                if !(theta > -1.0 && theta < 1.0) {
                    return Err(Error::param("theta", format!("must lie in (-1, 1), got {theta}")));
                }
            }
            DgpSpec::Bpii { beta } => {
                if !(beta > 0.0 && beta.is_finite()) {
                    return Err(Error::param("beta", format!("must be positive, got {beta}")));
                }
            }
            DgpSpec::SymmetricLogistic { s } => {
                if !(s > 0.0 && s <= 1.0) {
                    return Err(Error::param("s", format!("must lie in (0, 1], got {s}")));
                }
            }
            DgpSpec::Archimax { .. } => {}
        }
        Ok(())
    }
}

impl fmt::Display for DgpSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((name, _)) = DgpSpec::catalogue().into_iter().find(|(_, s)| s == self) {
            return f.write_str(name);
        }
        match self {
            DgpSpec::TCopula { df, theta } => write!(f, "t-copula(df={df},theta={theta})"),
            DgpSpec::Bpii { beta } => write!(f, "bpii(beta={beta})"),
            DgpSpec::SymmetricLogistic { s } => write!(f, "logistic(s={s})"),
            DgpSpec::Archimax { generator } => write!(f, "archimax({generator:?})"),
        }
    }
}

impl FromStr for DgpSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DgpSpec::by_name(s)
    }
}

/// Closed-form stable tail dependence function of a bivariate process.
pub fn true_stdf(spec: &DgpSpec, x: &Point) -> Result<f64> {
    spec.validate()?;
    let &[x1, x2] = x.coords() else {
        return Err(Error::InvalidPoint(format!(
            "true stdf is bivariate, got dimension {}",
            x.dim()
        )));
    };
    if x1 == 0.0 || x2 == 0.0 {
        return Ok(x1 + x2);
    }
    let value = match *spec {
        DgpSpec::TCopula { df, theta } => {
            let scale = (df + 1.0).sqrt() / (1.0 - theta * theta).sqrt();
            let term = |a: f64, b: f64| a * student_t_cdf(scale * ((a / b).powf(1.0 / df) - theta), df + 1.0);
            term(x1, x2) + term(x2, x1)
        }
        DgpSpec::Bpii { beta } => {
            let inv = -1.0 / beta;
            x1 + x2 - (x1.powf(inv) + x2.powf(inv)).powf(-beta)
        }
        DgpSpec::SymmetricLogistic { s } => (x1.powf(1.0 / s) + x2.powf(1.0 / s)).powf(s),
        DgpSpec::Archimax { generator } => generator.value(x1, x2),
    };
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn table_anchors() {
        let one = Point::xy(1.0, 1.0);
        let get = |n: &str| true_stdf(&DgpSpec::by_name(n).unwrap(), &one).unwrap();
        assert_relative_eq!(get("archimax-logistic"), 2f64.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(get("archimax-mixed"), 1.5, epsilon = 1e-15);
        assert_relative_eq!(get("bpii3"), 1.875, epsilon = 1e-15);
        assert_relative_eq!(get("cauchy"), 1.0 + 0.5f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn boundary_and_bounds() {
        for (name, spec) in DgpSpec::catalogue() {
            assert_eq!(true_stdf(&spec, &Point::xy(0.7, 0.0)).unwrap(), 0.7, "{name}");
            assert_eq!(true_stdf(&spec, &Point::xy(0.0, 1.3)).unwrap(), 1.3, "{name}");
            assert_eq!(true_stdf(&spec, &Point::xy(0.0, 0.0)).unwrap(), 0.0, "{name}");
            for i in 1..20 {
                let t = i as f64 / 20.0;
                let x = Point::xy(t, 1.0 - t);
                let v = true_stdf(&spec, &x).unwrap();
                assert!(v >= x.max_coord() - 1e-12 && v <= x.sum() + 1e-12, "{name} {t} {v}");
            }
        }
    }

    #[test]
    fn independence_at_unit_logistic() {
        let spec = DgpSpec::SymmetricLogistic { s: 1.0 };
        assert_relative_eq!(true_stdf(&spec, &Point::xy(0.3, 0.9)).unwrap(), 1.2, epsilon = 1e-14);
    }

    #[test]
    fn names_round_trip() {
        for (name, spec) in DgpSpec::catalogue() {
            assert_eq!(spec.to_string(), name);
            assert_eq!(name.parse::<DgpSpec>().unwrap(), spec);
        }
        let err = DgpSpec::by_name("gauss").unwrap_err().to_string();
        assert!(err.contains("archimax-mixed"));
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(DgpSpec::TCopula { df: 0.0, theta: 0.0 }.validate().is_err());
        assert!(DgpSpec::TCopula { df: 2.0, theta: 1.0 }.validate().is_err());
        assert!(DgpSpec::Bpii { beta: -1.0 }.validate().is_err());
        assert!(DgpSpec::SymmetricLogistic { s: 1.5 }.validate().is_err());
        assert!(true_stdf(&DgpSpec::Bpii { beta: 3.0 }, &Point::new(vec![1.0, 1.0, 1.0]).unwrap()).is_err());
    }

    #[test]
    fn generator_derivatives() {
        for g in [ArchimaxGenerator::Logistic, ArchimaxGenerator::Mixed] {
            for (x, y) in [(0.3, 0.9), (2.0, 0.1), (1.0, 1.0)] {
                let h = 1e-6;
                let fd = (g.value(x + h, y) - g.value(x - h, y)) / (2.0 * h);
                assert_relative_eq!(g.d_first(x, y), fd, epsilon = 1e-8);
            }
        }
    }
}
