use std::fmt;
use std::str::FromStr;

use crate::cq::Scheme;
use crate::error::{invalid, Error, Result};

/// Initial data of the two-state system.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialData {
    /// G₁ = x(1-x), G₂ = sin x.
    PolySin,
    /// G₁ = (1-x)·χ(1/2, 1), G₂ = x·χ(0, 1/2); both vanish at x = 1/2.
    Indicator,
    Zero,
    /// Samples at the interior nodes.
    Custom { g1: Vec<f64>, g2: Vec<f64> },
}

impl InitialData {
    pub fn tag(&self) -> &'static str {
        match self {
            InitialData::PolySin => "poly_sin",
            InitialData::Indicator => "indicator",
            InitialData::Zero => "zero",
            InitialData::Custom { .. } => "custom",
        }
    }

    /// Values (G₁, G₂) at a point.
    pub fn eval(&self, x: f64) -> Option<(f64, f64)> {
        match self {
            InitialData::PolySin => Some((x * (1.0 - x), x.sin())),
            InitialData::Indicator => {
                let g1 = if x > 0.5 && x < 1.0 { 1.0 - x } else { 0.0 };
                let g2 = if x > 0.0 && x < 0.5 { x } else { 0.0 };
                Some((g1, g2))
            }
            InitialData::Zero => Some((0.0, 0.0)),
            InitialData::Custom { .. } => None,
        }
    }
}

impl FromStr for InitialData {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "poly_sin" | "a" => Ok(InitialData::PolySin),
            "indicator" | "b" => Ok(InitialData::Indicator),
            "zero" => Ok(InitialData::Zero),
            other => Err(invalid(format!(
                "unknown initial data `{other}` (expected poly_sin, indicator or zero)"
            ))),
        }
    }
}

/// Time stepper.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    Be,
    FastBe,
    Sbd,
    FastSbd,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 4] = [SchemeKind::Be, SchemeKind::FastBe, SchemeKind::Sbd, SchemeKind::FastSbd];

    pub fn family(self) -> Scheme {
        match self {
            SchemeKind::Be | SchemeKind::FastBe => Scheme::Be,
            SchemeKind::Sbd | SchemeKind::FastSbd => Scheme::Sbd,
        }
    }

    pub fn is_fast(self) -> bool {
        matches!(self, SchemeKind::FastBe | SchemeKind::FastSbd)
    }

    /// The classical stepper of the same family.
    pub fn classical(self) -> SchemeKind {
        match self.family() {
            Scheme::Be => SchemeKind::Be,
            Scheme::Sbd => SchemeKind::Sbd,
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SchemeKind::Be => "be",
            SchemeKind::FastBe => "fastbe",
            SchemeKind::Sbd => "sbd",
            SchemeKind::FastSbd => "fastsbd",
        })
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "be" => Ok(SchemeKind::Be),
            "fastbe" => Ok(SchemeKind::FastBe),
            "sbd" => Ok(SchemeKind::Sbd),
            "fastsbd" => Ok(SchemeKind::FastSbd),
            other => Err(invalid(format!(
                "unknown scheme `{other}` (expected be, fastbe, sbd or fastsbd)"
            ))),
        }
    }
}

/// The 1-D two-state problem on [0, L] with homogeneous Dirichlet data.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub alpha1: f64,
    pub alpha2: f64,
    pub coupling_a: f64,
    pub length: f64,
    /// Interior grid points M; h = L/(M+1).
    pub grid_m: usize,
    pub t_final: f64,
    pub n_steps: usize,
    pub initial: InitialData,
}

impl Default for ProblemSpec {
    fn default() -> Self {
        ProblemSpec {
            alpha1: 0.3,
            alpha2: 0.6,
            coupling_a: 2.0,
            length: 1.0,
            grid_m: 255,
            t_final: 1.0,
            n_steps: 100,
            initial: InitialData::PolySin,
        }
    }
}

impl ProblemSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("alpha1", self.alpha1), ("alpha2", self.alpha2)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(invalid(format!("{name} must lie in (0, 1), got {v}")));
            }
        }
        if !self.coupling_a.is_finite() {
            return Err(invalid("coupling constant must be finite"));
        }
        if !(self.length > 0.0 && self.length.is_finite()) {
            return Err(invalid(format!("domain length must be positive, got {}", self.length)));
        }
        if self.grid_m == 0 {
            return Err(invalid("grid needs at least one interior point"));
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return Err(invalid(format!("final time must be positive, got {}", self.t_final)));
        }
        if self.n_steps == 0 {
            return Err(invalid("need at least one time step"));
        }
        if let InitialData::Custom { g1, g2 } = &self.initial {
            if g1.len() != self.grid_m || g2.len() != self.grid_m {
                return Err(invalid(format!(
                    "custom initial data must have {} samples per component",
                    self.grid_m
                )));
            }
        }
        Ok(())
    }

    pub fn tau(&self) -> f64 {
        self.t_final / self.n_steps as f64
    }

    pub fn h(&self) -> f64 {
        self.length / (self.grid_m + 1) as f64
    }

    /// Interior nodes x_k = k·h, k = 1..=M.
    pub fn grid(&self) -> Vec<f64> {
        let h = self.h();
        (1..=self.grid_m).map(|k| k as f64 * h).collect()
    }
}

/// Grid values of (G₁, G₂) at time index n.
#[derive(Debug, Clone, PartialEq)]
pub struct StateField {
    pub g1: Vec<f64>,
    pub g2: Vec<f64>,
    pub n: usize,
}

impl StateField {
    pub fn zeros(m: usize) -> Self {
        StateField {
            g1: vec![0.0; m],
            g2: vec![0.0; m],
            n: 0,
        }
    }

    /// Discrete L² norms (‖G₁‖, ‖G₂‖) with spacing h.
    pub fn norms(&self, h: f64) -> (f64, f64) {
        (l2_norm(&self.g1, h), l2_norm(&self.g2, h))
    }

    /// Discrete L² norms of the componentwise difference.
    pub fn diff_norms(&self, other: &StateField, h: f64) -> (f64, f64) {
        let d = |a: &[f64], b: &[f64]| {
            (h * a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>()).sqrt()
        };
        (d(&self.g1, &other.g1), d(&self.g2, &other.g2))
    }

    pub fn is_finite(&self) -> bool {
        self.g1.iter().chain(&self.g2).all(|v| v.is_finite())
    }
}

/// sqrt(h·Σ v_k²).
pub fn l2_norm(v: &[f64], h: f64) -> f64 {
    (h * v.iter().map(|x| x * x).sum::<f64>()).sqrt()
}

/// Samples the initial data at the interior nodes.
pub fn initial_field(spec: &ProblemSpec) -> StateField {
    if let InitialData::Custom { g1, g2 } = &spec.initial {
        return StateField {
            g1: g1.clone(),
            g2: g2.clone(),
            n: 0,
        };
    }
    let (g1, g2) = spec
        .grid()
        .into_iter()
        .map(|x| spec.initial.eval(x).expect("analytic initial data"))
        .unzip();
    StateField { g1, g2, n: 0 }
}
