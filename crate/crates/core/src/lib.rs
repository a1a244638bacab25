//! Estimation of the stable tail dependence function of multivariate
//! extremes, with bias corrections driven by estimates of the second-order
//! parameter `rho`, and a Monte Carlo harness comparing them.

pub mod cli;
pub mod config;
pub mod dgp;
pub mod empirical;
pub mod error;
pub mod estimators;
pub mod harness;
pub mod plot;
pub mod rho;
pub mod sample;
pub mod special;

pub use empirical::{empirical_stdf, empirical_stdf_at_level, EmpiricalStdf, StdfSource, ThresholdPolicy};
pub use error::{Error, Result};
pub use sample::{Point, RankMatrix, Sample};
