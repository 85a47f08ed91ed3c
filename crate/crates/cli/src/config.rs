//! Flat `key = value` run configuration.
//!
//! ```text
//! # reference resolution
//! basis.n_theta = 32
//! basis.k_radial = 32
//! solver.dt = 1e-3
//! solver.t_end = 10
//! experiment.A = 0
//! experiment.B = 1
//! experiment.eps = 0.02, 0.04, 0.08
//! experiment.perturbation = mode21
//! ```

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use diskflow::euler_solver::ExpFilter;
use diskflow::{BasisSpec, Perturbation, SolverConfig};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub basis: BasisSpec,
    pub solver: SolverConfig,
    pub a: f64,
    pub b: f64,
    pub eps: Vec<f64>,
    pub perturbation: Perturbation,
    pub seed: u64,
    pub trials: usize,
    pub initial_snapshot: Option<PathBuf>,
    pub output_dir: Option<PathBuf>,
}

const KEYS: &[&str] = &[
    "basis.n_theta",
    "basis.k_radial",
    "basis.dealias_pad",
    "solver.dt",
    "solver.t_end",
    "solver.save_every",
    "solver.filter",
    "experiment.A",
    "experiment.B",
    "experiment.eps",
    "experiment.perturbation",
    "experiment.seed",
    "experiment.trials",
    "initial.snapshot",
    "output.dir",
];

struct Table(BTreeMap<String, (usize, String)>);

impl Table {
    fn get<T: FromStr>(&self, key: &str, default: T) -> Result<T, CliError> {
        match self.0.get(key) {
            None => Ok(default),
            Some((line, v)) => v
                .parse()
                .map_err(|_| CliError::Config(format!("line {line}: invalid value `{v}` for `{key}`"))),
        }
    }

    fn raw(&self, key: &str) -> Option<&(usize, String)> {
        self.0.get(key)
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut table = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let no = i + 1;
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {no}: expected `key = value`")))?;
            let (k, v) = (k.trim(), v.trim());
            if !KEYS.contains(&k) {
                return Err(CliError::Config(format!("line {no}: unknown key `{k}`")));
            }
            if table.insert(k.to_string(), (no, v.to_string())).is_some() {
                return Err(CliError::Config(format!("line {no}: duplicate key `{k}`")));
            }
        }
        let t = Table(table);

        let basis = BasisSpec::new(t.get("basis.n_theta", 32)?, t.get("basis.k_radial", 32)?)
            .with_pad(t.get("basis.dealias_pad", 1.5)?);
        basis.validate().map_err(|e| CliError::Config(e.to_string()))?;

        let mut solver = SolverConfig::new(
            t.get("solver.dt", 1e-3)?,
            t.get("solver.t_end", 1.0)?,
            t.get("solver.save_every", 10)?,
            basis.clone(),
        );
        if t.get("solver.filter", false)? {
            solver.filter = Some(ExpFilter::default());
        }
        solver.validate().map_err(|e| CliError::Config(e.to_string()))?;

        let eps = match t.raw("experiment.eps") {
            None => vec![0.0],
            Some((line, v)) => v
                .split(',')
                .map(|s| match s.trim().parse::<f64>() {
                    Ok(x) if x.is_finite() && x >= 0.0 => Ok(x),
                    _ => Err(CliError::Config(format!(
                        "line {line}: eps entries must be nonnegative numbers, got `{}`",
                        s.trim()
                    ))),
                })
                .collect::<Result<Vec<_>, _>>()?,
        };
        let perturbation = match t.raw("experiment.perturbation") {
            None => Perturbation::Mode21,
            Some((line, v)) => v
                .parse()
                .map_err(|e| CliError::Config(format!("line {line}: {e}")))?,
        };
        let seed = t.get("experiment.seed", 0u64)?;
        let perturbation = match perturbation {
            Perturbation::Random { seed: 0 } => Perturbation::Random { seed },
            p => p,
        };
        let trials = t.get("experiment.trials", 1usize)?;
        if trials == 0 {
            return Err(CliError::Config("experiment.trials must be at least 1".into()));
        }
        let b: f64 = t.get("experiment.B", 1.0)?;
        let a: f64 = t.get("experiment.A", 0.0)?;
        if !(a.is_finite() && b.is_finite() && b >= 0.0) {
            return Err(CliError::Config(format!(
                "experiment.A must be finite and experiment.B nonnegative (A = {a}, B = {b})"
            )));
        }
        Ok(Self {
            basis,
            solver,
            a,
            b,
            eps,
            perturbation,
            seed,
            trials,
            initial_snapshot: t.raw("initial.snapshot").map(|(_, v)| PathBuf::from(v)),
            output_dir: t.raw("output.dir").map(|(_, v)| PathBuf::from(v)),
        })
    }

    /// Perturbation used by trial `i`; random directions advance the seed.
    pub fn trial_perturbation(&self, trial: usize) -> Perturbation {
        match self.perturbation {
            Perturbation::Random { seed } => Perturbation::Random {
                seed: seed + trial as u64,
            },
            p => p,
        }
    }
}
