//! Independent reference implementations used as test oracles.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;

/// Empirical stdf by sorting each column and comparing raw values with the
/// order statistic `X_{n - floor(k x_j) + 1, n}`.
pub fn naive_empirical_stdf(rows: &[Vec<f64>], k: f64, x: &[f64]) -> f64 {
    let n = rows.len();
    let d = x.len();
    let thresholds: Vec<Option<f64>> = (0..d)
        .map(|j| {
            let m = (k * x[j]).floor() as usize;
            if m == 0 {
                return None;
            }
            assert!(m <= n, "threshold index beyond the sample");
            let mut col: Vec<f64> = rows.iter().map(|r| r[j]).collect();
            col.sort_by(|a, b| a.partial_cmp(b).unwrap());
            Some(col[n - m])
        })
        .collect();
    let count = rows
        .iter()
        .filter(|r| (0..d).any(|j| thresholds[j].is_some_and(|t| r[j] >= t)))
        .count();
    count as f64 / k
}

/// Tie-free sample: each column is a random permutation of distinct values
/// with a random increasing distortion.
pub fn tie_free_rows<R: Rng>(rng: &mut R, n: usize, d: usize) -> Vec<Vec<f64>> {
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(d);
    for _ in 0..d {
        let mut v: Vec<f64> = (0..n).map(|i| i as f64 + rng.random::<f64>() * 0.5).collect();
        v.shuffle(rng);
        cols.push(v);
    }
    (0..n).map(|i| cols.iter().map(|c| c[i]).collect()).collect()
}

/// `alpha` of the Beirlant estimator by the literal double sum.
pub fn double_sum_alpha(values: &[f64], tau_b: f64, rho: f64) -> f64 {
    let kbar = values.len();
    let a: Vec<f64> = (1..=kbar).map(|j| j as f64 / (kbar as f64 + 1.0)).collect();
    let kb = |t: f64| (tau_b + 1.0) * t.powf(tau_b);
    let (mut num, mut den) = (0.0, 0.0);
    for j in 0..kbar {
        for l in 0..kbar {
            let c = kb(a[j]) * kb(a[l]) * (a[j].powf(-rho) - a[l].powf(-rho));
            num += c * values[j];
            den += c * a[j].powf(-rho);
        }
    }
    num / den
}

/// Weighted RSS of `y_i ~ b0 + b1 (i / k_rho)^(-r)`.
pub fn rss(curve: &[f64], index: &[usize], weights: &[f64], k_rho: f64, b0: f64, b1: f64, r: f64) -> f64 {
    curve
        .iter()
        .zip(index)
        .zip(weights)
        .map(|((y, &i), w)| {
            let e = y - b0 - b1 * (i as f64 / k_rho).powf(-r);
            w * e * e
        })
        .sum()
}

/// Minimum of [`rss`] over `(b0, b1)` by a lattice pattern search: an 11 x 11
/// lattice recentred on its best point, halved whenever the centre wins.
pub fn lattice_min_rss(curve: &[f64], index: &[usize], weights: &[f64], k_rho: f64, r: f64) -> f64 {
    let f = |b0: f64, b1: f64| rss(curve, index, weights, k_rho, b0, b1, r);
    let scale = curve.iter().fold(0.0f64, |m, y| m.max(y.abs())).max(1.0);
    let (mut c0, mut c1) = (0.0, 0.0);
    let (mut h0, mut h1) = (scale, scale);
    let mut best = f(c0, c1);
    for _ in 0..20_000 {
        let (mut n0, mut n1, mut nb) = (c0, c1, best);
        for i in -5..=5 {
            for j in -5..=5 {
                let (b0, b1) = (c0 + i as f64 * h0 / 5.0, c1 + j as f64 * h1 / 5.0);
                let v = f(b0, b1);
                if v < nb {
                    (n0, n1, nb) = (b0, b1, v);
                }
            }
        }
        if nb < best {
            (c0, c1, best) = (n0, n1, nb);
        } else {
            h0 *= 0.5;
            h1 *= 0.5;
            if h0 < 1e-13 * scale {
                break;
            }
        }
    }
    best
}

/// A random curve over `index`: noisy power law or pure noise.
pub fn random_curve<R: Rng>(rng: &mut R, index: &[usize], k_rho: f64) -> Vec<f64> {
    let b0 = rng.random_range(0.5..2.0);
    let b1 = rng.random_range(-1.0..1.0);
    let r0 = rng.random_range(-3.0..-0.2);
    let noise = if rng.random_bool(0.2) { 0.2 } else { rng.random_range(0.0..0.05) };
    index
        .iter()
        .map(|&i| b0 + b1 * (i as f64 / k_rho).powf(-r0) + noise * (rng.random::<f64>() - 0.5))
        .collect()
}
