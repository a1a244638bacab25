//! Estimators of the second-order parameter `rho`.

mod penalized;
mod ratio;

pub use penalized::{
    curve_spread, default_grid, diagonal_points, profile_rss, proportional_weights, rho_penalized_agg,
    rho_penalized_pointwise, rss_plain, squared_correlation, stdf_curve, PenalizedFit, PenalizedRhoConfig,
    ProfileFit, PENALIZED_FALLBACK,
};
pub use ratio::{
    delta_fougeres, ratio_rho, rho_beirlant, rho_fougeres, rho_fougeres_agg, rho_goegebeur, GoegebeurConfig,
    RatioRhoConfig,
};

use crate::sample::Point;

/// An aggregated estimate together with the per-point values it averages.
#[derive(Debug, Clone, PartialEq)]
pub struct RhoEstimate {
    pub value: f64,
    pub per_point: Vec<(Point, f64)>,
}

impl RhoEstimate {
    /// Arithmetic mean over a fixed point ordering.
    pub(crate) fn mean_of(per_point: Vec<(Point, f64)>) -> Self {
        let value = per_point.iter().map(|(_, v)| v).sum::<f64>() / per_point.len() as f64;
        RhoEstimate { value, per_point }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_of_points() {
        let est = RhoEstimate::mean_of(vec![(Point::xy(0.3, 0.3), -0.5), (Point::xy(0.4, 0.4), -1.5)]);
        assert_eq!(est.value, -1.0);
        let est = RhoEstimate::mean_of(vec![(Point::xy(0.3, 0.3), -1.0); 3]);
        assert_eq!(est.value, -1.0);
    }
}
