//! Experiment configuration: flat `key = value` text with per-experiment
//! defaults and command-line overrides.

use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{self, Graph};

/// Which rule fixes `delta_m` for the typical-function experiments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeltaRule {
    Explicit(f64),
    /// `m^(1/2 + 2/d^2 + eps)`.
    FixedDegree,
    /// `(2 sqrt(2e) / d) m^(1/2 + 4/(d+1) + eps)`.
    GrowingDegree,
}

impl DeltaRule {
    pub fn delta(self, m: usize, d: usize, eps: f64) -> f64 {
        let (m, d) = (m as f64, d as f64);
        match self {
            DeltaRule::Explicit(x) => x,
            DeltaRule::FixedDegree => m.powf(0.5 + 2.0 / (d * d) + eps),
            DeltaRule::GrowingDegree => {
                2.0 * (2.0 * std::f64::consts::E).sqrt() / d * m.powf(0.5 + 4.0 / (d + 1.0) + eps)
            }
        }
    }
}

impl FromStr for DeltaRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theorem2" | "fixed-degree" => Ok(DeltaRule::FixedDegree),
            "theorem3" | "growing-degree" => Ok(DeltaRule::GrowingDegree),
            other => other
                .parse::<f64>()
                .ok()
                .filter(|x| *x > 0.0)
                .map(DeltaRule::Explicit)
                .ok_or_else(|| Error::Config(format!("invalid delta rule {other:?}"))),
        }
    }
}

/// Deterministic map families for the fixed-function experiment.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// `v -> v mod m`.
    Balanced,
    /// The first `floor(rho n)` vertices go to image 0, the rest to the
    /// lowest-indexed vertex farthest from 0.
    TwoBlock(f64),
    /// `k` vertices go to the far image, everything else to image 0.
    NearConstant(usize),
    FromFile(PathBuf),
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("invalid map family {s:?}"));
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        match (head, arg) {
            ("balanced", None) => Ok(Family::Balanced),
            ("two_block", Some(a)) => {
                let rho: f64 = a.parse().map_err(|_| bad())?;
                if rho > 0.0 && rho < 1.0 {
                    Ok(Family::TwoBlock(rho))
                } else {
                    Err(bad())
                }
            }
            ("near_constant", Some(a)) => Ok(Family::NearConstant(a.parse().map_err(|_| bad())?)),
            ("file", Some(a)) => Ok(Family::FromFile(PathBuf::from(a))),
            _ => Err(bad()),
        }
    }
}

/// Source of the host graph `H`.
#[derive(Debug, Clone, PartialEq)]
pub enum HostSpec {
    /// A fresh sample from the simple `d`-regular graphs on `m` vertices.
    Random,
    Petersen,
    Complete(usize),
    Cycle(usize),
    File(PathBuf),
}

impl HostSpec {
    /// The fixed host, or `None` for random hosts.
    pub fn load(&self) -> Result<Option<Graph>> {
        Ok(match self {
            HostSpec::Random => None,
            HostSpec::Petersen => Some(graph::petersen()),
            HostSpec::Complete(m) => Some(graph::complete(*m)),
            HostSpec::Cycle(m) => Some(graph::cycle(*m)),
            HostSpec::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
                    path: path.display().to_string(),
                    msg: e.to_string(),
                })?;
                Some(graph::read_edge_list(&text)?)
            }
        })
    }
}

impl FromStr for HostSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("invalid host {s:?}"));
        match s.split_once(':') {
            None if s == "random" => Ok(HostSpec::Random),
            None if s == "petersen" => Ok(HostSpec::Petersen),
            Some(("complete", k)) => Ok(HostSpec::Complete(k.parse().map_err(|_| bad())?)),
            Some(("cycle", k)) => {
                let k: usize = k.parse().map_err(|_| bad())?;
                if k < 3 {
                    return Err(bad());
                }
                Ok(HostSpec::Cycle(k))
            }
            Some(("file", p)) => Ok(HostSpec::File(PathBuf::from(p))),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Typical,
    GrowingDegree,
    FixedFunction,
    FixedHost,
    Concentration,
    ErrorBound,
    Diameter,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 7] = [
        ExperimentKind::Typical,
        ExperimentKind::GrowingDegree,
        ExperimentKind::FixedFunction,
        ExperimentKind::FixedHost,
        ExperimentKind::Concentration,
        ExperimentKind::ErrorBound,
        ExperimentKind::Diameter,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Typical => "typical",
            ExperimentKind::GrowingDegree => "growing-d",
            ExperimentKind::FixedFunction => "fixed-function",
            ExperimentKind::FixedHost => "fixed-h",
            ExperimentKind::Concentration => "concentration",
            ExperimentKind::ErrorBound => "errorbound",
            ExperimentKind::Diameter => "diameter",
        }
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown experiment {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub n: Vec<usize>,
    pub m: Vec<usize>,
    pub d: Vec<usize>,
    pub epsilon: f64,
    pub alpha: f64,
    pub beta: f64,
    pub delta: DeltaRule,
    /// Constant `c` in the qualifying condition `s_i s_j >= c n^(2 - eps)`.
    pub c: f64,
    /// Surrogate constant in `lambda_1 >= 1 - C / sqrt(d)`.
    pub eigen_c: f64,
    /// Empirical envelope for gamma.
    pub gamma_envelope: f64,
    /// Allowed relative growth of the max gamma from smallest to largest n.
    pub growth_tolerance: f64,
    pub trials: usize,
    pub seed: u64,
    pub workers: usize,
    pub out: Option<PathBuf>,
    pub restarts: usize,
    pub samples: usize,
    pub max_moves: usize,
    pub max_attempts: usize,
    pub family: Family,
    pub host: HostSpec,
    /// Sizes of the two vertex sets in the concentration experiment.
    pub set_sizes: (usize, usize),
    pub lambda_grid: Vec<f64>,
    /// Lipschitz constant under switching used in the tail bound.
    pub switch_c: f64,
    pub switches: usize,
    /// Bourgain repetitions per scale; default `ceil(4 log2 m)`.
    pub repetitions: Option<usize>,
}

impl ExperimentConfig {
    /// Desk-scale defaults for each experiment.
    pub fn defaults(kind: ExperimentKind) -> Self {
        let base = ExperimentConfig {
            kind,
            n: vec![200, 400],
            m: vec![16],
            d: vec![3],
            epsilon: 0.1,
            alpha: 0.25,
            beta: 0.25,
            delta: DeltaRule::FixedDegree,
            c: 0.25,
            eigen_c: 3.0,
            gamma_envelope: 20.0,
            growth_tolerance: 0.1,
            trials: 10,
            seed: 1,
            workers: 1,
            out: None,
            restarts: 4,
            samples: 100,
            max_moves: 100_000,
            max_attempts: 10_000,
            family: Family::Balanced,
            host: HostSpec::Random,
            set_sizes: (500, 500),
            lambda_grid: (1..=12).map(|k| 25.0 * k as f64).collect(),
            switch_c: 2.0,
            switches: 10_000,
            repetitions: None,
        };
        match kind {
            ExperimentKind::Typical => base,
            ExperimentKind::GrowingDegree => ExperimentConfig {
                n: vec![512],
                m: vec![256],
                d: vec![8],
                epsilon: 0.05,
                delta: DeltaRule::GrowingDegree,
                trials: 2,
                max_attempts: 100_000_000,
                ..base
            },
            ExperimentKind::FixedFunction => ExperimentConfig {
                n: vec![500, 1000, 2000],
                m: vec![2],
                family: Family::TwoBlock(0.5),
                host: HostSpec::Complete(2),
                epsilon: 0.5,
                ..base
            },
            ExperimentKind::FixedHost => ExperimentConfig {
                n: vec![250, 500, 1000],
                m: vec![10],
                host: HostSpec::Petersen,
                ..base
            },
            ExperimentKind::Concentration => ExperimentConfig {
                n: vec![1000],
                trials: 10_000,
                ..base
            },
            ExperimentKind::ErrorBound => ExperimentConfig {
                n: vec![1000, 2000],
                m: vec![2, 10],
                epsilon: 0.5,
                c: 0.25,
                ..base
            },
            ExperimentKind::Diameter => ExperimentConfig {
                n: vec![100, 300, 1000],
                d: vec![3, 4, 5],
                trials: 5,
                ..base
            },
        }
    }

    /// Applies one `key = value` assignment.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: FromStr>(key: &str, v: &str) -> Result<T> {
            v.parse()
                .map_err(|_| Error::Config(format!("invalid value {v:?} for {key}")))
        }
        fn list<T: FromStr>(key: &str, v: &str) -> Result<Vec<T>> {
            v.split(',').map(|x| num(key, x.trim())).collect()
        }
        let value = value.trim();
        match key.trim() {
            "experiment" => self.kind = value.parse()?,
            "n" => self.n = list(key, value)?,
            "m" => self.m = list(key, value)?,
            "d" => self.d = list(key, value)?,
            "epsilon" => self.epsilon = num(key, value)?,
            "alpha" => self.alpha = num(key, value)?,
            "beta" => self.beta = num(key, value)?,
            "delta" => self.delta = value.parse()?,
            "c" => self.c = num(key, value)?,
            "eigen_c" => self.eigen_c = num(key, value)?,
            "gamma_envelope" => self.gamma_envelope = num(key, value)?,
            "growth_tolerance" => self.growth_tolerance = num(key, value)?,
            "trials" => self.trials = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            "workers" => self.workers = num(key, value)?,
            "out" => self.out = Some(PathBuf::from(value)),
            "restarts" => self.restarts = num(key, value)?,
            "samples" => self.samples = num(key, value)?,
            "max_moves" => self.max_moves = num(key, value)?,
            "max_attempts" => self.max_attempts = num(key, value)?,
            "family" => self.family = value.parse()?,
            "host" => self.host = value.parse()?,
            "set_sizes" => {
                let v: Vec<usize> = list(key, value)?;
                match v[..] {
                    [a, b] => self.set_sizes = (a, b),
                    _ => return Err(Error::Config("set_sizes needs two values".into())),
                }
            }
            "lambda_grid" => self.lambda_grid = list(key, value)?,
            "switch_c" => self.switch_c = num(key, value)?,
            "switches" => self.switches = num(key, value)?,
            "repetitions" => self.repetitions = Some(num(key, value)?),
            other => return Err(Error::Config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    /// Applies every `key = value` line of `text`; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: i + 1,
                msg: format!("expected key = value, got {line:?}"),
            })?;
            self.set(k, v).map_err(|e| match e {
                Error::Config(msg) => Error::Parse { line: i + 1, msg },
                other => other,
            })?;
        }
        Ok(())
    }

    /// Defaults for the experiment named in `text` (or `kind`), then `text`.
    pub fn from_text(kind: ExperimentKind, text: &str) -> Result<Self> {
        let mut cfg = Self::defaults(kind);
        cfg.apply_text(text)?;
        if cfg.kind != kind {
            let mut fresh = Self::defaults(cfg.kind);
            fresh.apply_text(text)?;
            cfg = fresh;
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return fail(format!("alpha must lie in (0, 1), got {}", self.alpha));
        }
        if !(self.beta > 0.0 && self.beta < 0.5) {
            return fail(format!("beta must lie in (0, 1/2), got {}", self.beta));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return fail(format!("epsilon must lie in (0, 1), got {}", self.epsilon));
        }
        if self.trials == 0 {
            return fail("trials must be at least 1".into());
        }
        if self.workers == 0 {
            return fail("workers must be at least 1".into());
        }
        if self.n.is_empty() || self.d.is_empty() || self.m.is_empty() {
            return fail("n, m and d lists must be nonempty".into());
        }
        if self.d.contains(&0) || self.n.iter().any(|&n| n < 2) || self.m.contains(&0) {
            return fail("n must be at least 2 and m, d at least 1".into());
        }
        Ok(())
    }
}
