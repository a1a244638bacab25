use rand::Rng;

use super::TailSampler;
use crate::sample::Point;

/// Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
}

/// Finite-`t` Monte Carlo approximation of the stable tail dependence
/// function: `t * P(V_1 <= x_1/t or V_2 <= x_2/t)` where `V_j` are upper-tail
/// probabilities, from `m` draws.
pub fn mc_stdf_oracle<T, R>(sampler: &T, x: &Point, t: f64, m: usize, rng: &mut R) -> McEstimate
where
    T: TailSampler + ?Sized,
    R: Rng + ?Sized,
{
    mc_stdf_oracle_many(sampler, std::slice::from_ref(x), t, m, rng)[0]
}

/// As [`mc_stdf_oracle`], evaluating several points on the same draws.
pub fn mc_stdf_oracle_many<T, R>(sampler: &T, xs: &[Point], t: f64, m: usize, rng: &mut R) -> Vec<McEstimate>
where
    T: TailSampler + ?Sized,
    R: Rng + ?Sized,
{
    assert!(t > 0.0 && m > 0, "oracle needs t > 0 and m > 0");
    let cuts: Vec<[f64; 2]> = xs
        .iter()
        .map(|x| {
            let c = x.coords();
            assert_eq!(c.len(), 2, "oracle points are bivariate");
            [c[0] / t, c[1] / t]
        })
        .collect();
    let mut hits = vec![0u64; xs.len()];
    for _ in 0..m {
        let v = sampler.draw_tail(rng);
        for (h, c) in hits.iter_mut().zip(&cuts) {
            *h += u64::from(v[0] <= c[0] || v[1] <= c[1]);
        }
    }
    hits.into_iter()
        .map(|h| {
            let p = h as f64 / m as f64;
            McEstimate {
                value: t * p,
                std_error: t * (p * (1.0 - p) / m as f64).sqrt(),
            }
        })
        .collect()
}
