use statrs::function::beta::beta_reg;

/// CDF of the Student-t distribution with `nu > 0` degrees of freedom.
///
/// Uses `I_{nu/(nu+z^2)}(nu/2, 1/2)` for the tail and
/// `I_{z^2/(nu+z^2)}(1/2, nu/2)` near the centre, so both regimes keep full
/// absolute precision.
pub fn student_t_cdf(z: f64, nu: f64) -> f64 {
    assert!(nu > 0.0, "degrees of freedom must be positive, got {nu}");
    if z.is_nan() {
        return f64::NAN;
    }
    if z == 0.0 {
        return 0.5;
    }
    if z.is_infinite() {
        return if z > 0.0 { 1.0 } else { 0.0 };
    }
    let z2 = z * z;
    let tail_arg = nu / (nu + z2);
    // lower-tail mass P(T <= -|z|)
    let tail = if tail_arg < 0.5 {
        0.5 * beta_reg(nu / 2.0, 0.5, tail_arg)
    } else {
        0.5 - 0.5 * beta_reg(0.5, nu / 2.0, z2 / (nu + z2))
    };
    if z < 0.0 {
        tail
    } else {
        1.0 - tail
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn t2_cdf(z: f64) -> f64 {
        0.5 + z / (2.0 * (2.0 + z * z).sqrt())
    }

    fn t4_cdf(z: f64) -> f64 {
        // closed form for nu = 4
        let s = z / (4.0 + z * z).sqrt();
        0.5 + 0.75 * s * (1.0 - s * s / 3.0)
    }

    #[test]
    fn symmetry_point() {
        for nu in [0.5, 1.0, 2.0, 7.3, 30.0] {
            assert_eq!(student_t_cdf(0.0, nu), 0.5);
        }
    }

    #[test]
    fn matches_closed_forms() {
        for i in -400..=400 {
            let z = i as f64 / 20.0;
            let cauchy = 0.5 + z.atan() / PI;
            assert!((student_t_cdf(z, 1.0) - cauchy).abs() < 1e-12, "nu=1 z={z}");
            assert!((student_t_cdf(z, 2.0) - t2_cdf(z)).abs() < 1e-12, "nu=2 z={z}");
            assert!((student_t_cdf(z, 4.0) - t4_cdf(z)).abs() < 1e-12, "nu=4 z={z}");
        }
        assert!((student_t_cdf(1.0, 1.0) - 0.75).abs() < 1e-12);
        assert!((student_t_cdf(2f64.sqrt(), 2.0) - 0.853_553_390_593_273_8).abs() < 1e-12);
    }

    #[test]
    fn far_tail_is_relative_accurate() {
        // P(T <= -z) ~ 1/(pi z) for the Cauchy
        let z = 1e8;
        let tail = student_t_cdf(-z, 1.0);
        let exact = (1.0 / z).atan() / PI;
        assert!(((tail - exact) / exact).abs() < 1e-10);
    }
}
