//! Rank-based empirical stable tail dependence function.
//!
//! For a level `k > 0` (not necessarily an integer) and a point `x`,
//!
//! ```text
//! L_k(x) = (1/k) * #{ i : r(i,j) >= n - floor(k x_j) + 1 for some j }
//! ```
//!
//! where `r(i,j)` are column ranks. A coordinate with `floor(k x_j) = 0`
//! contributes no exceedances, so `L_k(0) = 0`.
//!
//! All bias-corrected estimators are written against [`StdfSource`], which
//! abstracts "evaluate the empirical estimator at level `m`". The production
//! implementation is [`EmpiricalStdf`]; tests substitute synthetic curves.

use crate::error::{Error, Result};
use crate::sample::{Point, RankMatrix};

/// Something that can evaluate the empirical estimator `L_m(x)` at an
/// arbitrary positive level `m`.
pub trait StdfSource {
    fn stdf_at(&self, level: f64, x: &Point) -> Result<f64>;
}

impl<S: StdfSource + ?Sized> StdfSource for &S {
    fn stdf_at(&self, level: f64, x: &Point) -> Result<f64> {
        (**self).stdf_at(level, x)
    }
}

/// Strict evaluation directly on the rank matrix.
impl StdfSource for RankMatrix {
    fn stdf_at(&self, level: f64, x: &Point) -> Result<f64> {
        empirical_stdf(self, level, x)
    }
}

/// Wraps a closure `(level, x) -> value` as a [`StdfSource`].
pub struct FnSource<F>(pub F);

impl<F> StdfSource for FnSource<F>
where
    F: Fn(f64, &Point) -> f64,
{
    fn stdf_at(&self, level: f64, x: &Point) -> Result<f64> {
        Ok((self.0)(level, x))
    }
}

/// What to do when `floor(level * x_j)` exceeds the sample size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ThresholdPolicy {
    /// Report [`Error::ThresholdOutOfRange`].
    #[default]
    Strict,
    /// Cap the index at `n`: the threshold falls below the sample minimum and
    /// every observation exceeds it in that coordinate.
    Saturate,
}

/// `L_k(x)` with the strict threshold policy.
pub fn empirical_stdf(ranks: &RankMatrix, k: f64, x: &Point) -> Result<f64> {
    let counts = threshold_counts(ranks.n(), k, x, ThresholdPolicy::Strict)?;
    Ok(count_exceedances(ranks, &counts) as f64 / k)
}

/// `L_{k a}(x)`: the empirical estimator at level `k * a`.
pub fn empirical_stdf_at_level(ranks: &RankMatrix, k: f64, a: f64, x: &Point) -> Result<f64> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::param("a", format!("must be positive, got {a}")));
    }
    empirical_stdf(ranks, k * a, x)
}

/// `floor(level * x_j)` per coordinate, validated against `n`.
fn threshold_counts(n: usize, level: f64, x: &Point, policy: ThresholdPolicy) -> Result<Vec<usize>> {
    if !(level > 0.0 && level.is_finite()) {
        return Err(Error::param("k", format!("level must be positive and finite, got {level}")));
    }
    x.coords()
        .iter()
        .enumerate()
        .map(|(j, &xj)| {
            let m = (level * xj).floor();
            if m <= n as f64 {
                Ok(m as usize)
            } else {
                match policy {
                    ThresholdPolicy::Strict => Err(Error::ThresholdOutOfRange {
                        level,
                        coordinate: j,
                        index: if m < usize::MAX as f64 { m as usize } else { usize::MAX },
                        n,
                    }),
                    ThresholdPolicy::Saturate => Ok(n),
                }
            }
        })
        .collect()
}

/// Number of rows with `r(i,j) > n - m_j` for at least one `j`.
fn count_exceedances(ranks: &RankMatrix, counts: &[usize]) -> usize {
    let n = ranks.n();
    assert_eq!(counts.len(), ranks.d(), "point dimension does not match sample");
    let active: Vec<(&[u32], u32)> = counts
        .iter()
        .enumerate()
        .filter(|(_, &m)| m > 0)
        .map(|(j, &m)| (ranks.column(j), (n - m) as u32))
        .collect();
    match active.len() {
        0 => 0,
        // exactly m ranks exceed n - m in a single column
        1 => n - active[0].1 as usize,
        _ => (0..n)
            .filter(|&i| active.iter().any(|(col, cut)| col[i] > *cut))
            .count(),
    }
}

/// Empirical estimator bound to one rank matrix, with a threshold policy and
/// an optional precomputed joint-exceedance table for bivariate samples.
#[derive(Debug, Clone)]
pub struct EmpiricalStdf<'a> {
    ranks: &'a RankMatrix,
    policy: ThresholdPolicy,
    table: Option<JointExceedanceTable>,
}

impl<'a> EmpiricalStdf<'a> {
    pub fn new(ranks: &'a RankMatrix) -> Self {
        EmpiricalStdf {
            ranks,
            policy: ThresholdPolicy::Strict,
            table: None,
        }
    }

    pub fn with_policy(mut self, policy: ThresholdPolicy) -> Self {
        self.policy = policy;
        self
    }

    /// Precomputes joint exceedance counts for all index pairs up to
    /// `max_index` (capped at `n`), making each bivariate evaluation O(1).
    /// Ignored for `d != 2`.
    pub fn with_joint_table(mut self, max_index: usize) -> Self {
        if self.ranks.d() == 2 {
            self.table = Some(JointExceedanceTable::new(self.ranks, max_index.min(self.ranks.n())));
        }
        self
    }

    pub fn ranks(&self) -> &RankMatrix {
        self.ranks
    }

    pub fn policy(&self) -> ThresholdPolicy {
        self.policy
    }

    /// Number of rows exceeding the thresholds defined by `floor(level * x)`.
    pub fn exceedances(&self, level: f64, x: &Point) -> Result<usize> {
        let counts = threshold_counts(self.ranks.n(), level, x, self.policy)?;
        if let Some(table) = &self.table {
            if let Some(c) = table.union_count(counts[0], counts[1]) {
                return Ok(c);
            }
        }
        Ok(count_exceedances(self.ranks, &counts))
    }
}

impl StdfSource for EmpiricalStdf<'_> {
    fn stdf_at(&self, level: f64, x: &Point) -> Result<f64> {
        Ok(self.exceedances(level, x)? as f64 / level)
    }
}

/// `joint[a][b] = #{ i : r(i,1) > n - a and r(i,2) > n - b }` for
/// `a, b <= max_index`.
#[derive(Debug, Clone)]
struct JointExceedanceTable {
    max_index: usize,
    joint: Vec<u32>,
}

impl JointExceedanceTable {
    fn new(ranks: &RankMatrix, max_index: usize) -> Self {
        let n = ranks.n();
        let width = max_index + 1;
        // second-column rank of the row holding first-column rank r
        let mut partner = vec![0u32; n + 1];
        for (i, &r1) in ranks.column(0).iter().enumerate() {
            partner[r1 as usize] = ranks.rank(i, 1);
        }
        let mut joint = vec![0u32; width * width];
        for a in 1..=max_index {
            // adding the row with first-column rank n - a + 1
            let s = partner[n - a + 1] as usize;
            // it exceeds in column 2 once b >= n - s + 1
            let first_b = n - s + 1;
            let (prev, cur) = joint.split_at_mut(a * width);
            let prev = &prev[(a - 1) * width..];
            let cur = &mut cur[..width];
            for b in 0..width {
                cur[b] = prev[b] + u32::from(b >= first_b);
            }
        }
        JointExceedanceTable { max_index, joint }
    }

    fn union_count(&self, a: usize, b: usize) -> Option<usize> {
        if a > self.max_index || b > self.max_index {
            return None;
        }
        let both = self.joint[a * (self.max_index + 1) + b] as usize;
        Some(a + b - both)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::Sample;

    fn toy() -> RankMatrix {
        RankMatrix::from_sample(
            &Sample::from_rows(&[[1.0, 4.0], [2.0, 3.0], [3.0, 2.0], [4.0, 1.0]]).unwrap(),
        )
    }

    #[test]
    fn antimonotone_toy_value() {
        assert_eq!(empirical_stdf(&toy(), 2.0, &Point::xy(1.0, 1.0)).unwrap(), 2.0);
    }

    #[test]
    fn single_coordinate_gives_one() {
        let r = toy();
        for k in 1..=4 {
            assert_eq!(empirical_stdf(&r, k as f64, &Point::xy(1.0, 0.0)).unwrap(), 1.0);
        }
    }

    #[test]
    fn origin_is_zero() {
        assert_eq!(empirical_stdf(&toy(), 3.0, &Point::xy(0.0, 0.0)).unwrap(), 0.0);
    }

    #[test]
    fn level_product() {
        let r = toy();
        let x = Point::xy(1.0, 1.0);
        assert_eq!(empirical_stdf_at_level(&r, 2.0, 1.0, &x).unwrap(), 2.0);
        assert_eq!(
            empirical_stdf_at_level(&r, 10.0, 0.4, &x).unwrap(),
            empirical_stdf(&r, 4.0, &x).unwrap()
        );
        // floor(0.5 * 1) = 0 in both coordinates
        assert_eq!(empirical_stdf_at_level(&r, 1000.0, 0.0005, &x).unwrap(), 0.0);
    }

    #[test]
    fn out_of_range_threshold() {
        let err = empirical_stdf(&toy(), 5.0, &Point::xy(1.0, 0.5)).unwrap_err();
        assert!(matches!(err, Error::ThresholdOutOfRange { coordinate: 0, index: 5, n: 4, .. }));
        assert!(empirical_stdf(&toy(), 0.0, &Point::xy(1.0, 0.5)).is_err());
    }

    #[test]
    fn saturating_policy_counts_every_row() {
        let r = toy();
        let src = EmpiricalStdf::new(&r).with_policy(ThresholdPolicy::Saturate);
        assert_eq!(src.stdf_at(8.0, &Point::xy(1.0, 0.0)).unwrap(), 4.0 / 8.0);
    }

    #[test]
    fn joint_table_matches_direct_count() {
        let rows: Vec<[f64; 2]> = (0..37)
            .map(|i| {
                let t = i as f64;
                [(t * 7.3).sin(), (t * 3.1).cos() + 0.3 * (t * 7.3).sin()]
            })
            .collect();
        let r = RankMatrix::from_sample(&Sample::from_rows(&rows).unwrap());
        let direct = EmpiricalStdf::new(&r);
        let tabled = EmpiricalStdf::new(&r).with_joint_table(30);
        for level in [1.0, 2.5, 7.0, 19.0, 30.0, 37.0] {
            for x in [(0.0, 1.0), (0.3, 0.7), (1.0, 1.0), (0.8, 0.1)] {
                let x = Point::xy(x.0, x.1);
                assert_eq!(direct.stdf_at(level, &x).unwrap(), tabled.stdf_at(level, &x).unwrap());
            }
        }
    }
}
