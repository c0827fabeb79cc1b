//! Flat `key = value` experiment configuration.
//!
//! Every key can come from three layers, applied in order: built-in
//! defaults, a config file, then command-line flags. The same spelling is
//! used in both places (`grid-m`, or `grid_m` in a file).

use std::fmt::Write as _;
use std::path::PathBuf;

use crate::cq::coupling_from_transition;
use crate::error::{Error, Result};
use crate::kernel::{KernelConfig, DEFAULT_EPS_TOL, DEFAULT_SBD_POINTS};
use crate::solver::{InitialData, ProblemSpec, SchemeKind};

/// Recognised keys with their help text.
pub const KEYS: &[(&str, &str)] = &[
    ("scheme", "schemes, comma separated: be, fastbe, sbd, fastsbd"),
    ("alpha", "order for weights and kernel-error"),
    ("alpha1", "order of the first component"),
    ("alpha2", "order of the second component"),
    ("pairs", "order pairs a1:a2, comma separated; overrides alpha1/alpha2"),
    ("a", "coupling constant"),
    ("m", "transition probability m; sets a = (1-m)/(2m-1)"),
    ("length", "domain length L"),
    ("grid-m", "interior grid points M, h = L/(M+1)"),
    ("tau", "step size for weights, kernel-error and solve"),
    ("taus", "study step sizes, halving, e.g. 1/100,1/200"),
    ("ref-tau", "reference step size"),
    ("ref-scheme", "scheme of the reference run (default: classical of each family)"),
    ("t-final", "final time"),
    ("n", "largest index for weights and kernel-error"),
    ("n-list", "step counts for bench"),
    ("at", "snapshot times for solve (default: final time)"),
    ("init", "initial data: poly_sin (a), indicator (b) or zero"),
    ("np", "BE kernel points (default: sized to the run)"),
    ("np1", "SBD family-1 points"),
    ("np2", "SBD family-2 points (default: sized to the run)"),
    ("head", "SBD head length N_s"),
    ("auto-head", "search the shortest SBD head meeting eps-tol"),
    ("eps-tol", "kernel error tolerance, relative to tau^-alpha"),
    ("out", "output directory (default: stdout)"),
];

/// Fully resolved settings for every subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub schemes: Vec<SchemeKind>,
    pub alpha: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    /// Empty means the single pair (alpha1, alpha2).
    pub pairs: Vec<(f64, f64)>,
    pub coupling_a: f64,
    pub length: f64,
    pub grid_m: usize,
    pub tau: f64,
    /// Strictly decreasing.
    pub taus: Vec<f64>,
    pub ref_tau: f64,
    pub ref_scheme: Option<SchemeKind>,
    pub t_final: f64,
    pub n: usize,
    pub n_list: Vec<usize>,
    pub at: Vec<f64>,
    pub initial: InitialData,
    pub np: Option<usize>,
    pub np1: Option<usize>,
    pub np2: Option<usize>,
    pub head: Option<usize>,
    pub auto_head: bool,
    pub eps_tol: f64,
    pub out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            schemes: vec![SchemeKind::Be, SchemeKind::FastBe],
            alpha: 0.5,
            alpha1: 0.3,
            alpha2: 0.6,
            pairs: Vec::new(),
            coupling_a: 2.0,
            length: 1.0,
            grid_m: 255,
            tau: 1.0 / 100.0,
            taus: [100.0, 200.0, 400.0, 800.0, 1600.0].iter().map(|d| 1.0 / d).collect(),
            ref_tau: 1.0 / 3200.0,
            ref_scheme: None,
            t_final: 1.0,
            n: 100,
            n_list: vec![100, 200, 400, 800, 1600],
            at: Vec::new(),
            initial: InitialData::PolySin,
            np: None,
            np1: None,
            np2: None,
            head: None,
            auto_head: false,
            eps_tol: DEFAULT_EPS_TOL,
            out: None,
        }
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}

/// Canonical key spelling: lower case, `_` read as `-`.
pub fn normalize_key(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('_', "-")
}

/// A real number or an exact fraction `p/q`.
pub fn parse_real(s: &str) -> Result<f64> {
    let s = s.trim();
    let bad = || usage(format!("`{s}` is not a number"));
    let v = match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|_| bad())?;
            let q: f64 = q.trim().parse().map_err(|_| bad())?;
            p / q
        }
        None => s.parse().map_err(|_| bad())?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

fn parse_count(s: &str) -> Result<usize> {
    s.trim()
        .parse()
        .map_err(|_| usage(format!("`{}` is not a non-negative integer", s.trim())))
}

fn parse_list<T>(s: &str, item: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(item)
        .collect()
}

fn parse_bool(s: &str) -> Result<bool> {
    match s.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        other => Err(usage(format!("`{other}` is not a boolean"))),
    }
}

fn parse_pair(s: &str) -> Result<(f64, f64)> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| usage(format!("order pair `{s}` must look like 0.3:0.6")))?;
    Ok((parse_real(a)?, parse_real(b)?))
}

fn list_text<T>(v: &[T], f: impl Fn(&T) -> String) -> String {
    v.iter().map(f).collect::<Vec<_>>().join(",")
}

/// Reads `key = value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<Vec<(String, String)>> {
    let mut entries = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("config line {}: expected `key = value`", lineno + 1)))?;
        let key = normalize_key(k);
        if !KEYS.iter().any(|(name, _)| *name == key) {
            return Err(usage(format!("config line {}: unknown key `{}`", lineno + 1, k.trim())));
        }
        entries.push((key, v.trim().to_string()));
    }
    Ok(entries)
}

impl ExperimentConfig {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = normalize_key(key);
        let ctx = |e: Error| match e {
            Error::Usage(m) | Error::InvalidParameter(m) => usage(format!("{key}: {m}")),
            other => other,
        };
        (|| -> Result<()> {
            match key.as_str() {
                "scheme" => {
                    let v = parse_list(value, |s| s.parse::<SchemeKind>())?;
                    if v.is_empty() {
                        return Err(usage("no scheme given"));
                    }
                    self.schemes = v;
                }
                "alpha" => self.alpha = parse_real(value)?,
                "alpha1" => self.alpha1 = parse_real(value)?,
                "alpha2" => self.alpha2 = parse_real(value)?,
                "pairs" => self.pairs = parse_list(value, parse_pair)?,
                "a" => self.coupling_a = parse_real(value)?,
                "m" => self.coupling_a = coupling_from_transition(parse_real(value)?)?,
                "length" => self.length = parse_real(value)?,
                "grid-m" => self.grid_m = parse_count(value)?,
                "tau" => self.tau = parse_real(value)?,
                "taus" => self.taus = parse_list(value, parse_real)?,
                "ref-tau" => self.ref_tau = parse_real(value)?,
                "ref-scheme" => {
                    self.ref_scheme = match value.trim() {
                        "" => None,
                        s => Some(s.parse()?),
                    }
                }
                "t-final" => self.t_final = parse_real(value)?,
                "n" => self.n = parse_count(value)?,
                "n-list" => self.n_list = parse_list(value, parse_count)?,
                "at" => self.at = parse_list(value, parse_real)?,
                "init" => self.initial = value.parse()?,
                "np" => self.np = Some(parse_count(value)?),
                "np1" => self.np1 = Some(parse_count(value)?),
                "np2" => self.np2 = Some(parse_count(value)?),
                "head" => self.head = Some(parse_count(value)?),
                "auto-head" => self.auto_head = parse_bool(value)?,
                "eps-tol" => self.eps_tol = parse_real(value)?,
                "out" => {
                    self.out = match value.trim() {
                        "" => None,
                        s => Some(PathBuf::from(s)),
                    }
                }
                _ => return Err(usage("unknown key")),
            }
            Ok(())
        })()
        .map_err(ctx)
    }

    /// Defaults, then `file`, then `cli`; later layers win.
    pub fn resolve(file: &[(String, String)], cli: &[(String, String)]) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        for (k, v) in file.iter().chain(cli) {
            cfg.set(k, v)?;
        }
        Ok(cfg)
    }

    /// Every setting as `key = value` lines; parses back to the same config.
    pub fn to_text(&self) -> String {
        let real = |v: &f64| format!("{v:?}");
        let mut kv: Vec<(&str, String)> = vec![
            ("scheme", list_text(&self.schemes, |s| s.to_string())),
            ("alpha", real(&self.alpha)),
            ("alpha1", real(&self.alpha1)),
            ("alpha2", real(&self.alpha2)),
            ("pairs", list_text(&self.pairs, |(a, b)| format!("{a:?}:{b:?}"))),
            ("a", real(&self.coupling_a)),
            ("length", real(&self.length)),
            ("grid-m", self.grid_m.to_string()),
            ("tau", real(&self.tau)),
            ("taus", list_text(&self.taus, real)),
            ("ref-tau", real(&self.ref_tau)),
            ("ref-scheme", self.ref_scheme.map(|s| s.to_string()).unwrap_or_default()),
            ("t-final", real(&self.t_final)),
            ("n", self.n.to_string()),
            ("n-list", list_text(&self.n_list, |n| n.to_string())),
            ("at", list_text(&self.at, real)),
            ("init", self.initial.tag().to_string()),
        ];
        for (key, v) in [("np", self.np), ("np1", self.np1), ("np2", self.np2), ("head", self.head)] {
            if let Some(v) = v {
                kv.push((key, v.to_string()));
            }
        }
        kv.push(("auto-head", self.auto_head.to_string()));
        kv.push(("eps-tol", real(&self.eps_tol)));
        if let Some(out) = &self.out {
            kv.push(("out", out.display().to_string()));
        }
        let mut s = String::new();
        for (k, v) in kv {
            let _ = writeln!(s, "{k} = {v}");
        }
        s
    }

    /// The order pairs a study runs over.
    pub fn alpha_pairs(&self) -> Vec<(f64, f64)> {
        if self.pairs.is_empty() {
            vec![(self.alpha1, self.alpha2)]
        } else {
            self.pairs.clone()
        }
    }

    pub fn kernels(&self) -> KernelConfig {
        let sbd_points = match (self.np1, self.np2) {
            (None, None) => None,
            (n1, n2) => Some((n1.unwrap_or(DEFAULT_SBD_POINTS.0), n2.unwrap_or(DEFAULT_SBD_POINTS.1))),
        };
        KernelConfig {
            be_points: self.np,
            sbd_points,
            n_head: self.head,
            auto_head: self.auto_head,
            eps_tol: self.eps_tol,
        }
    }

    /// Number of steps of size `tau` reaching the final time.
    pub fn steps_for(&self, tau: f64) -> Result<usize> {
        let n = (self.t_final / tau).round();
        if !(tau > 0.0) || n < 1.0 || (n * tau - self.t_final).abs() > 1e-9 * self.t_final {
            return Err(usage(format!(
                "step size {tau} does not divide the final time {}",
                self.t_final
            )));
        }
        Ok(n as usize)
    }

    pub fn problem(&self, alpha1: f64, alpha2: f64, n_steps: usize) -> ProblemSpec {
        ProblemSpec {
            alpha1,
            alpha2,
            coupling_a: self.coupling_a,
            length: self.length,
            grid_m: self.grid_m,
            t_final: self.t_final,
            n_steps,
            initial: self.initial.clone(),
        }
    }

    /// Checks the study grid: decreasing step sizes, all above the reference.
    pub fn validate_study(&self) -> Result<()> {
        if self.taus.is_empty() {
            return Err(usage("taus: empty list"));
        }
        if self.taus.windows(2).any(|w| w[1] >= w[0]) {
            return Err(usage("taus: must be sorted in decreasing order"));
        }
        let smallest = self.taus[self.taus.len() - 1];
        if self.ref_tau >= smallest {
            return Err(usage(format!(
                "ref-tau {} must be smaller than every study step ({smallest})",
                self.ref_tau
            )));
        }
        for &tau in self.taus.iter().chain([&self.ref_tau]) {
            self.steps_for(tau)?;
        }
        Ok(())
    }
}
