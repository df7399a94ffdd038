//! Experiment configuration: `key=value` lines, overridden by command-line flags.

use crate::error::CliError;
use fracprop::OmegaChoice;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Problem {
    /// eigenmode data on the spectral backend
    HomEigen,
    /// rough data on the finite-difference backend
    HomFd,
    /// `f = sin πx + t sin 4πx`, zero initial data
    Inhom,
    /// polynomial exact solution with source and initial data
    Full,
    Inverse,
}

impl FromStr for Problem {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "hom-eigen" => Ok(Problem::HomEigen),
            "hom-fd" => Ok(Problem::HomFd),
            "inhom" => Ok(Problem::Inhom),
            "full" => Ok(Problem::Full),
            "inverse" => Ok(Problem::Inverse),
            other => Err(CliError::config(format!("unknown problem {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Backend {
    Diag(Vec<i64>),
    Fd(usize),
    /// the finite-difference Laplacian solved in its sine eigenbasis
    FdEigen(usize),
}

/// A κ entry; `delta` ties κ to the regularity parameter of the row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kappa {
    Value(f64),
    Delta,
}

impl Kappa {
    pub fn resolve(self, delta: f64) -> f64 {
        match self {
            Kappa::Value(k) => k,
            Kappa::Delta => delta,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub problem: Problem,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub n: Vec<usize>,
    pub varphi_s: f64,
    pub omega: OmegaChoice,
    pub a0: f64,
    pub kappa: Vec<Kappa>,
    pub chi: f64,
    pub t_final: f64,
    pub time_grid_size: usize,
    pub backend: Backend,
    pub delta: Vec<f64>,
    pub k0: u32,
    pub k1: u32,
    pub seed: u64,
    pub trials: usize,
    pub threshold: f64,
    pub n_max: usize,
    pub probe_x: f64,
    pub alpha0: f64,
    pub alpha_bounds: Option<(f64, f64)>,
    pub times: Vec<f64>,
    pub samples: usize,
    pub output: Option<PathBuf>,
    pub trace_dir: Option<PathBuf>,
}

/// Every key the file and the flags understand.
pub const KEYS: &[&str] = &[
    "problem",
    "alpha",
    "beta",
    "n",
    "varphi_s",
    "omega",
    "a0",
    "kappa",
    "chi",
    "t_final",
    "time_grid_size",
    "backend",
    "modes",
    "m",
    "delta",
    "k0",
    "k1",
    "seed",
    "trials",
    "threshold",
    "n_max",
    "probe_x",
    "alpha0",
    "alpha_bounds",
    "times",
    "samples",
    "output",
    "trace_dir",
];

/// Reads `key=value` lines; `#` starts a comment.
pub fn parse_file(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::config(format!("line {}: expected key=value", i + 1)))?;
        let key = normalize_key(k.trim());
        if !KEYS.contains(&key.as_str()) {
            return Err(CliError::config(format!("line {}: unknown key {:?}", i + 1, k.trim())));
        }
        map.insert(key, v.trim().to_string());
    }
    Ok(map)
}

pub fn read_file(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
    parse_file(&text)
}

/// `T` is accepted as an alias of `t_final`, dashes as underscores.
pub fn normalize_key(k: &str) -> String {
    if k == "T" {
        return "t_final".into();
    }
    k.to_ascii_lowercase().replace('-', "_")
}

/// A number, `pi`, `pi/K` or `K*pi`.
pub fn parse_real(s: &str) -> Result<f64, CliError> {
    let s = s.trim();
    let bad = || CliError::config(format!("not a number: {s:?}"));
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad());
    let v = if s == "pi" {
        PI
    } else if let Some(d) = s.strip_prefix("pi/") {
        PI / num(d)?
    } else if let Some(k) = s.strip_suffix("*pi") {
        num(k)? * PI
    } else {
        num(s)?
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

fn parse_list<T>(s: &str, item: impl Fn(&str) -> Result<T, CliError>) -> Result<Vec<T>, CliError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|t| item(t.trim())).collect()
}

fn parse_int<T: FromStr>(s: &str) -> Result<T, CliError> {
    s.trim().parse().map_err(|_| CliError::config(format!("not an integer: {s:?}")))
}

impl ExperimentConfig {
    pub fn from_map(map: &BTreeMap<String, String>) -> Result<Self, CliError> {
        let get = |k: &str| map.get(k).map(String::as_str);
        let problem: Problem = get("problem").unwrap_or("hom-eigen").parse()?;
        let real = |k: &str, d: f64| get(k).map(parse_real).unwrap_or(Ok(d));
        let reals = |k: &str, d: &[f64]| get(k).map(|s| parse_list(s, parse_real)).unwrap_or(Ok(d.to_vec()));
        let int = |k: &str, d: usize| get(k).map(parse_int::<usize>).unwrap_or(Ok(d));

        let (k0_default, k1_default, beta_default) = match problem {
            Problem::Inverse => (2, 4, 1.6),
            Problem::HomFd => (3, 4, 1.01),
            _ => (1, 4, 1.01),
        };
        let fd_default = matches!(problem, Problem::HomFd | Problem::Full);
        let m = int("m", 1000)?;
        let backend = match get("backend") {
            Some("fd") => Backend::Fd(m),
            Some("fd-eigen") => Backend::FdEigen(m),
            Some("diag") => Backend::Diag(match get("modes") {
                Some(s) => parse_list(s, parse_int::<i64>)?,
                None => vec![k0_default as i64, k1_default as i64],
            }),
            Some(other) => return Err(CliError::config(format!("unknown backend {other:?}"))),
            None if fd_default => Backend::Fd(m),
            None => Backend::Diag(vec![]),
        };
        let kappa = match get("kappa") {
            Some(s) => parse_list(s, |t| if t == "delta" { Ok(Kappa::Delta) } else { parse_real(t).map(Kappa::Value) })?,
            None => vec![Kappa::Value(1.0)],
        };
        let alpha_bounds = match get("alpha_bounds") {
            Some(s) => match parse_list(s, parse_real)?.as_slice() {
                [lo, hi] => Some((*lo, *hi)),
                _ => return Err(CliError::config("alpha_bounds needs two values lo,hi")),
            },
            None => None,
        };
        let cfg = Self {
            problem,
            alpha: reals("alpha", &[0.5])?,
            beta: reals("beta", &[beta_default])?,
            n: get("n").map(|s| parse_list(s, parse_int::<usize>)).unwrap_or(Ok(vec![16, 32, 64, 128, 256]))?,
            // the spectral backend's sector is exact for the inverse problem
            varphi_s: real("varphi_s", if problem == Problem::Inverse { 0.0 } else { PI / 60.0 })?,
            omega: get("omega").unwrap_or("star").parse().map_err(CliError::config)?,
            a0: real("a0", fracprop::DEFAULT_A0)?,
            kappa,
            chi: real("chi", 1.0)?,
            t_final: real("t_final", 1.0)?,
            time_grid_size: int("time_grid_size", 40)?,
            backend,
            delta: reals("delta", &[1.0])?,
            k0: get("k0").map(parse_int::<u32>).unwrap_or(Ok(k0_default))?,
            k1: get("k1").map(parse_int::<u32>).unwrap_or(Ok(k1_default))?,
            seed: get("seed").map(parse_int::<u64>).unwrap_or(Ok(0))?,
            trials: int("trials", 10)?,
            threshold: real("threshold", 1e-13)?,
            n_max: int("n_max", 600)?,
            probe_x: real("probe_x", PI / 10.0)?,
            alpha0: real("alpha0", 0.85)?,
            alpha_bounds,
            times: reals("times", &[0.0, 0.5, 1.0])?,
            samples: int("samples", 99)?,
            output: get("output").map(PathBuf::from),
            trace_dir: get("trace_dir").map(PathBuf::from),
        };
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> Result<(), CliError> {
        if self.alpha.is_empty() || self.beta.is_empty() || self.n.is_empty() || self.kappa.is_empty() {
            return Err(CliError::config("alpha, beta, n and kappa lists must be nonempty"));
        }
        if self.n.contains(&0) || self.n_max == 0 {
            return Err(CliError::config("N must be positive"));
        }
        if !(self.t_final > 0.0) || self.time_grid_size == 0 {
            return Err(CliError::config("t_final and time_grid_size must be positive"));
        }
        if !(self.varphi_s >= 0.0 && self.varphi_s < PI / 2.0) {
            return Err(CliError::config("varphi_s must lie in [0, pi/2)"));
        }
        if self.times.iter().any(|t| !(*t >= 0.0)) {
            return Err(CliError::config("times must be non-negative"));
        }
        match &self.backend {
            Backend::Fd(m) | Backend::FdEigen(m) if *m < 2 => {
                return Err(CliError::config("fd backends need m >= 2"))
            }
            _ => {}
        }
        Ok(())
    }

    /// Uniform grid with `time_grid_size + 1` points on `[0, T]`, both ends included.
    pub fn time_grid(&self) -> Vec<f64> {
        let k = self.time_grid_size;
        (0..=k).map(|i| if i == k { self.t_final } else { self.t_final * i as f64 / k as f64 }).collect()
    }

    /// `(α, β)` cells with `α ≤ β`, in sweep order.
    pub fn order_cells(&self) -> Result<Vec<(f64, f64)>, CliError> {
        let cells: Vec<(f64, f64)> = self
            .beta
            .iter()
            .flat_map(|&b| self.alpha.iter().filter(move |&&a| a <= b).map(move |&a| (a, b)))
            .collect();
        let skipped = self.alpha.len() * self.beta.len() - cells.len();
        if skipped > 0 {
            log::warn!("skipping {skipped} (alpha, beta) pairs with alpha > beta");
        }
        if cells.is_empty() {
            return Err(CliError::config("no (alpha, beta) pair satisfies alpha <= beta"));
        }
        Ok(cells)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_and_defaults() {
        let map = parse_file("# sweep\nalpha = 0.1, 0.5\nT=2\nvarphi-s = pi/6\nkappa=0.5,delta\n").unwrap();
        let cfg = ExperimentConfig::from_map(&map).unwrap();
        assert_eq!(cfg.alpha, vec![0.1, 0.5]);
        assert_eq!(cfg.t_final, 2.0);
        assert_eq!(cfg.varphi_s, PI / 6.0);
        assert_eq!(cfg.kappa, vec![Kappa::Value(0.5), Kappa::Delta]);
        assert_eq!(cfg.time_grid().len(), 41);
        assert_eq!(*cfg.time_grid().last().unwrap(), 2.0);
        assert_eq!(cfg.omega, OmegaChoice::Star);
    }

    #[test]
    fn bad_input_is_a_config_error() {
        assert!(parse_file("alpha 0.5").is_err());
        assert!(parse_file("colour=red").is_err());
        let map = parse_file("alpha=abc").unwrap();
        assert!(ExperimentConfig::from_map(&map).is_err());
        let map = parse_file("alpha=1.5\nbeta=1.01").unwrap();
        assert!(ExperimentConfig::from_map(&map).unwrap().order_cells().is_err());
    }

    #[test]
    fn real_forms() {
        assert_eq!(parse_real("pi/60").unwrap(), PI / 60.0);
        assert_eq!(parse_real("2*pi").unwrap(), 2.0 * PI);
        assert_eq!(parse_real("1e-3").unwrap(), 1e-3);
    }
}
