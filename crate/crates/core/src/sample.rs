//! Observations, evaluation points and per-column ranks.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An `n x d` matrix of finite observations, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    data: Vec<f64>,
    n: usize,
    d: usize,
}

impl Sample {
    pub fn new(data: Vec<f64>, n: usize, d: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSample("sample must contain at least one row".into()));
        }
        if d < 2 {
            return Err(Error::InvalidSample(format!("dimension must be at least 2, got {d}")));
        }
        if data.len() != n * d {
            return Err(Error::InvalidSample(format!(
                "expected {} entries for a {n}x{d} sample, got {}",
                n * d,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidSample(format!(
                "non-finite entry at row {}, column {}",
                pos / d + 1,
                pos % d + 1
            )));
        }
        Ok(Sample { data, n, d })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let d = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * d);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != d {
                return Err(Error::InvalidSample(format!(
                    "row {} has {} columns, expected {d}",
                    i + 1,
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Sample::new(data, rows.len(), d)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.d..(i + 1) * self.d]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.d)
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = f64> + '_ {
        self.data.iter().skip(j).step_by(self.d).copied()
    }

    /// Applies `f(j, value)` to every entry; used to check rank invariance.
    pub fn map_columns(&self, f: impl Fn(usize, f64) -> f64) -> Result<Sample> {
        let data = self
            .data
            .iter()
            .enumerate()
            .map(|(pos, &v)| f(pos % self.d, v))
            .collect();
        Sample::new(data, self.n, self.d)
    }
}

/// A point `x` in `[0, inf)^d` at which a tail dependence function is evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidPoint("point has no coordinates".into()));
        }
        if let Some(bad) = coords.iter().find(|c| !(c.is_finite() && **c >= 0.0)) {
            return Err(Error::InvalidPoint(format!(
                "coordinates must be finite and nonnegative, got {bad}"
            )));
        }
        Ok(Point(coords))
    }

    /// Shorthand for bivariate points. Panics on negative or non-finite input.
    pub fn xy(x: f64, y: f64) -> Self {
        Point::new(vec![x, y]).expect("valid bivariate point")
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `a * x`. `a` must be nonnegative.
    pub fn scaled(&self, a: f64) -> Point {
        debug_assert!(a >= 0.0);
        Point(self.0.iter().map(|c| c * a).collect())
    }

    pub fn max_coord(&self) -> f64 {
        self.0.iter().copied().fold(0.0, f64::max)
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Point::new(v)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.0
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (j, c) in self.0.iter().enumerate() {
            if j > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Column-wise ranks of a [`Sample`], 1-based, stored column-major.
///
/// Rank `r(i, j)` is the position of `X_i^(j)` in ascending order of column
/// `j`. Equal values are ordered by row index, so each column is a
/// permutation of `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankMatrix {
    ranks: Vec<u32>,
    n: usize,
    d: usize,
}

impl RankMatrix {
    pub fn from_sample(sample: &Sample) -> Self {
        let (n, d) = (sample.n(), sample.d());
        assert!(n <= u32::MAX as usize, "sample too large for u32 ranks");
        let mut ranks = vec![0u32; n * d];
        let mut order: Vec<usize> = Vec::with_capacity(n);
        let mut column = Vec::with_capacity(n);
        for j in 0..d {
            column.clear();
            column.extend(sample.column(j));
            order.clear();
            order.extend(0..n);
            // stable: ties keep row order
            order.sort_by(|&a, &b| column[a].total_cmp(&column[b]));
            let col = &mut ranks[j * n..(j + 1) * n];
            for (pos, &i) in order.iter().enumerate() {
                col[i] = (pos + 1) as u32;
            }
        }
        RankMatrix { ranks, n, d }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Ranks of column `j`, indexed by row.
    pub fn column(&self, j: usize) -> &[u32] {
        &self.ranks[j * self.n..(j + 1) * self.n]
    }

    pub fn rank(&self, i: usize, j: usize) -> u32 {
        self.ranks[j * self.n + i]
    }
}
