//! Experiment configuration files.
//!
//! A configuration is either JSON (a run manifest, or a bare
//! [`ExperimentConfig`]) or a flat `key = value` file overriding the study
//! defaults:
//!
//! ```text
//! # comment
//! dgp = t4
//! n = 1000
//! reps = 200
//! seed = 7
//! k_grid = 1, 51, 101
//! eval_points = 0.5,0.5; 1,0
//! estimators = empirical, dot+fougeres
//! ratio.kbar = 990
//! penalized.eta = 0.5
//! ```
//!
//! Keys: `dgp`, `dgp.df`, `dgp.theta`, `dgp.beta`, `dgp.s` (custom
//! parameters for the family chosen by `dgp`), `n`, `reps`, `seed`,
//! `k_grid`, `eval_points`, `estimators`, `ratio.{kbar,a,r,fallback_threshold,
//! fallback_value,eval_points}`, `beirlant.{kbar,tau,tau_b,rho_tau}`,
//! `goegebeur.{tau,xi1,xi2}`, `dot.{a,kset}`,
//! `penalized.{index_set,k_rho,k_lo,k_hi,eta,grid,eval_points}`.
//! Setting `penalized.index_set` resets `k_rho` to its largest element
//! unless `penalized.k_rho` is also given.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::dgp::DgpSpec;
use crate::error::{Error, Result};
use crate::harness::{ExperimentConfig, RunManifest};
use crate::rho::PenalizedRhoConfig;
use crate::sample::Point;

/// Reads a configuration file of either format.
pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text, path)
}

/// Parses configuration text; `origin` only labels error messages.
pub fn parse_config(text: &str, origin: &Path) -> Result<ExperimentConfig> {
    let config = if text.trim_start().starts_with('{') {
        parse_json(text, origin)?
    } else {
        parse_flat(text, origin)?
    };
    config.validate()?;
    Ok(config)
}

fn parse_json(text: &str, origin: &Path) -> Result<ExperimentConfig> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| parse_err(origin, e))?;
    if value.get("config").is_some() {
        let manifest: RunManifest = serde_json::from_value(value).map_err(|e| parse_err(origin, e))?;
        Ok(manifest.config)
    } else {
        serde_json::from_value(value).map_err(|e| parse_err(origin, e))
    }
}

fn parse_err(origin: &Path, message: impl ToString) -> Error {
    Error::Parse {
        path: origin.to_path_buf(),
        message: message.to_string(),
    }
}

/// `key = value` pairs with their line numbers.
struct Entries<'a> {
    origin: &'a Path,
    map: BTreeMap<&'a str, (usize, &'a str)>,
}

impl<'a> Entries<'a> {
    fn read(text: &'a str, origin: &'a Path) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(parse_err(origin, format!("line {}: expected `key = value`", i + 1)));
            };
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(parse_err(origin, format!("line {}: unknown key `{key}`", i + 1)));
            }
            if map.insert(key, (i + 1, value.trim())).is_some() {
                return Err(parse_err(origin, format!("line {}: duplicate key `{key}`", i + 1)));
            }
        }
        Ok(Entries { origin, map })
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.map
            .get(key)
            .map(|&(line, v)| {
                v.parse::<T>()
                    .map_err(|e| parse_err(self.origin, format!("line {line}: `{key}`: {e}")))
            })
            .transpose()
    }

    fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>>
    where
        T::Err: std::fmt::Display,
    {
        self.map
            .get(key)
            .map(|&(line, v)| {
                v.split(',')
                    .map(|s| {
                        s.trim()
                            .parse::<T>()
                            .map_err(|e| parse_err(self.origin, format!("line {line}: `{key}`: {e}")))
                    })
                    .collect()
            })
            .transpose()
    }

    fn points(&self, key: &str) -> Result<Option<Vec<Point>>> {
        self.map
            .get(key)
            .map(|&(line, v)| parse_points(v).map_err(|e| parse_err(self.origin, format!("line {line}: `{key}`: {e}"))))
            .transpose()
    }
}

/// `"x1,y1; x2,y2"`, any dimension.
pub fn parse_points(text: &str) -> Result<Vec<Point>> {
    text.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|p| {
            let coords = p
                .split(',')
                .map(|c| {
                    c.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::InvalidPoint(format!("`{}`: {e}", c.trim())))
                })
                .collect::<Result<Vec<_>>>()?;
            Point::new(coords)
        })
        .collect()
}

const KEYS: &[&str] = &[
    "dgp",
    "dgp.df",
    "dgp.theta",
    "dgp.beta",
    "dgp.s",
    "n",
    "reps",
    "seed",
    "k_grid",
    "eval_points",
    "estimators",
    "ratio.kbar",
    "ratio.a",
    "ratio.r",
    "ratio.fallback_threshold",
    "ratio.fallback_value",
    "ratio.eval_points",
    "beirlant.kbar",
    "beirlant.tau",
    "beirlant.tau_b",
    "beirlant.rho_tau",
    "goegebeur.tau",
    "goegebeur.xi1",
    "goegebeur.xi2",
    "dot.a",
    "dot.kset",
    "penalized.index_set",
    "penalized.k_rho",
    "penalized.k_lo",
    "penalized.k_hi",
    "penalized.eta",
    "penalized.grid",
    "penalized.eval_points",
];

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn parse_flat(text: &str, origin: &Path) -> Result<ExperimentConfig> {
    let e = Entries::read(text, origin)?;
    let mut c = ExperimentConfig::default();

    if let Some(name) = e.get::<String>("dgp")? {
        c.dgp = DgpSpec::by_name(&name)?;
    }
    match &mut c.dgp {
        DgpSpec::TCopula { df, theta } => {
            set(df, e.get("dgp.df")?);
            set(theta, e.get("dgp.theta")?);
        }
        DgpSpec::Bpii { beta } => set(beta, e.get("dgp.beta")?),
        DgpSpec::SymmetricLogistic { s } => set(s, e.get("dgp.s")?),
        DgpSpec::Archimax { .. } => {}
    }
    let family_keys: &[&str] = match c.dgp {
        DgpSpec::TCopula { .. } => &["dgp.df", "dgp.theta"],
        DgpSpec::Bpii { .. } => &["dgp.beta"],
        DgpSpec::SymmetricLogistic { .. } => &["dgp.s"],
        DgpSpec::Archimax { .. } => &[],
    };
    for key in ["dgp.df", "dgp.theta", "dgp.beta", "dgp.s"] {
        if let Some(&(line, _)) = e.map.get(key) {
            if !family_keys.contains(&key) {
                return Err(parse_err(origin, format!("line {line}: `{key}` does not apply to `{}`", c.dgp)));
            }
        }
    }

    set(&mut c.n, e.get("n")?);
    set(&mut c.reps, e.get("reps")?);
    set(&mut c.seed, e.get("seed")?);
    set(&mut c.k_grid, e.list("k_grid")?);
    set(&mut c.eval_points, e.points("eval_points")?);
    set(&mut c.estimators, e.list("estimators")?);

    let t = &mut c.tuning;
    set(&mut t.ratio.kbar, e.get("ratio.kbar")?);
    set(&mut t.ratio.a, e.get("ratio.a")?);
    set(&mut t.ratio.r, e.get("ratio.r")?);
    set(&mut t.ratio.fallback_threshold, e.get("ratio.fallback_threshold")?);
    set(&mut t.ratio.fallback_value, e.get("ratio.fallback_value")?);
    set(&mut t.ratio_eval_points, e.points("ratio.eval_points")?);
    set(&mut t.beirlant.kbar, e.get("beirlant.kbar")?);
    set(&mut t.beirlant.tau, e.get("beirlant.tau")?);
    set(&mut t.beirlant.tau_b, e.get("beirlant.tau_b")?);
    set(&mut t.beirlant_rho_tau, e.get("beirlant.rho_tau")?);
    set(&mut t.goegebeur.tau, e.get("goegebeur.tau")?);
    set(&mut t.goegebeur.xi1, e.get("goegebeur.xi1")?);
    set(&mut t.goegebeur.xi2, e.get("goegebeur.xi2")?);
    set(&mut t.dot_a, e.get("dot.a")?);
    set(&mut t.dot_kset, e.list("dot.kset")?);

    let p = &t.penalized;
    let mut index_set = p.index_set().to_vec();
    let mut k_rho = p.k_rho();
    if let Some(set) = e.list::<usize>("penalized.index_set")? {
        k_rho = set.last().copied().unwrap_or(0) as f64;
        index_set = set;
    }
    set(&mut k_rho, e.get("penalized.k_rho")?);
    let (mut k_lo, mut k_hi) = p.bounds();
    set(&mut k_lo, e.get("penalized.k_lo")?);
    set(&mut k_hi, e.get("penalized.k_hi")?);
    let mut eta = p.eta();
    set(&mut eta, e.get("penalized.eta")?);
    let mut grid = p.grid().to_vec();
    set(&mut grid, e.list("penalized.grid")?);
    let mut eval_points = p.eval_points().to_vec();
    set(&mut eval_points, e.points("penalized.eval_points")?);
    let weights = crate::rho::proportional_weights(&index_set);
    t.penalized = PenalizedRhoConfig::new(index_set, k_rho, weights, k_lo, k_hi, eta, grid, eval_points)?;

    Ok(c)
}
