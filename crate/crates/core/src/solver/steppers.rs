use super::banded::BlockSystem;
use super::problem::{initial_field, ProblemSpec, SchemeKind, StateField};
use super::DiscreteLaplacian;
use crate::cq::{Scheme, WeightTable};
use crate::error::{Error, Result};
use crate::kernel::{FastKernel, HistoryState, HistoryVariant, KernelConfig, LinearSpace};

/// Memory term of a stepper: the CQ sums over past solution values.
#[derive(Debug, Clone)]
enum Memory {
    /// Full weight tables and every past field, O(n) work per step.
    Classical {
        w1: WeightTable,
        w2: WeightTable,
        /// past[k - 1] = G^k; G⁰ never enters the sums.
        past1: Vec<Vec<f64>>,
        past2: Vec<Vec<f64>>,
    },
    /// Exact heads plus geometric accumulators, O(N_p) work per step.
    Fast {
        k1: FastKernel,
        k2: FastKernel,
        h1: HistoryState<Vec<f64>>,
        h2: HistoryState<Vec<f64>>,
    },
}

impl Memory {
    fn weight(&self, i: usize) -> (f64, f64) {
        match self {
            Memory::Classical { w1, w2, .. } => (w1[i], w2[i]),
            Memory::Fast { k1, k2, .. } => (k1.weight(i), k2.weight(i)),
        }
    }

    /// Σ_{i=1}^{n-1} d_i G^{n-i} for both components at step n.
    fn history(&mut self, n: usize, m: usize) -> Result<(Vec<f64>, Vec<f64>)> {
        match self {
            Memory::Classical {
                w1,
                w2,
                past1,
                past2,
            } => {
                let mut u1 = vec![0.0; m];
                let mut u2 = vec![0.0; m];
                for i in 1..n {
                    u1.axpy(w1[i], &past1[n - i - 1]);
                    u2.axpy(w2[i], &past2[n - i - 1]);
                }
                Ok((u1, u2))
            }
            Memory::Fast { h1, h2, .. } => {
                h1.advance()?;
                h2.advance()?;
                Ok((h1.history_sum()?, h2.history_sum()?))
            }
        }
    }

    fn record(&mut self, f: &StateField) -> Result<()> {
        match self {
            Memory::Classical { past1, past2, .. } => {
                past1.push(f.g1.clone());
                past2.push(f.g2.clone());
                Ok(())
            }
            Memory::Fast { h1, h2, .. } => {
                h1.record(&f.g1)?;
                h2.record(&f.g2)
            }
        }
    }
}

/// One of the four time steppers, advanced one step at a time.
///
/// The CQ operators act at exponents 1-α₁ and 1-α₂. Step n solves
///
///   δ_τ G₁ⁿ + (a+A)·Σ d¹_i G₁^{n-i} - a·Σ d²_i G₂^{n-i} = 0
///
/// and its mirror for G₂, where δ_τ is the BE difference or BDF2 and the
/// sums run over i = 0..n-1. SBD uses the 2/3–1/3 split at n = 1 and adds
/// ½·d_{n-1}·G⁰ to each sum for n ≥ 2.
#[derive(Debug, Clone)]
pub struct Stepper {
    kind: SchemeKind,
    tau: f64,
    a: f64,
    lap: DiscreteLaplacian,
    n_steps: usize,
    initial: StateField,
    prev: StateField,
    prev2: Option<StateField>,
    memory: Memory,
    first: Option<BlockSystem>,
    rest: BlockSystem,
}

impl Stepper {
    pub fn new(spec: &ProblemSpec, kind: SchemeKind, kernels: &KernelConfig) -> Result<Self> {
        spec.validate()?;
        let tau = spec.tau();
        let n = spec.n_steps;
        let (b1, b2) = (1.0 - spec.alpha1, 1.0 - spec.alpha2);
        let family = kind.family();
        let initial = initial_field(spec);
        let memory = if kind.is_fast() {
            let k1 = kernels.build(family, b1, tau, n)?;
            let k2 = kernels.build(family, b2, tau, n)?;
            let mut h1 = HistoryState::new(&k1, HistoryVariant::Scheme);
            let mut h2 = HistoryState::new(&k2, HistoryVariant::Scheme);
            h1.push(&initial.g1)?;
            h2.push(&initial.g2)?;
            Memory::Fast { k1, k2, h1, h2 }
        } else {
            Memory::Classical {
                w1: WeightTable::new(family, b1, tau, n)?,
                w2: WeightTable::new(family, b2, tau, n)?,
                past1: Vec::with_capacity(n),
                past2: Vec::with_capacity(n),
            }
        };
        let (d1, d2) = memory.weight(0);
        let lap = DiscreteLaplacian::new(spec.grid_m, spec.length);
        let a = spec.coupling_a;
        let (first, rest) = match family {
            Scheme::Be => (None, BlockSystem::new(d1, d2, a, tau, lap, 1.0)?),
            Scheme::Sbd => (
                Some(BlockSystem::new(2.0 / 3.0 * d1, 2.0 / 3.0 * d2, a, tau, lap, 1.0)?),
                BlockSystem::new(d1, d2, a, tau, lap, 1.5)?,
            ),
        };
        Ok(Stepper {
            kind,
            tau,
            a,
            lap,
            n_steps: n,
            prev: initial.clone(),
            initial,
            prev2: None,
            memory,
            first,
            rest,
        })
    }

    pub fn kind(&self) -> SchemeKind {
        self.kind
    }

    pub fn current(&self) -> &StateField {
        &self.prev
    }

    pub fn is_done(&self) -> bool {
        self.prev.n >= self.n_steps
    }

    pub fn laplacian(&self) -> &DiscreteLaplacian {
        &self.lap
    }

    /// Advances to the next time level and returns it.
    pub fn step(&mut self) -> Result<&StateField> {
        if self.is_done() {
            return Err(Error::Sequencing(format!(
                "all {} steps already taken",
                self.n_steps
            )));
        }
        let n = self.prev.n + 1;
        let m = self.lap.grid_m;
        let (tau, a) = (self.tau, self.a);
        let (mut u1, mut u2) = self.memory.history(n, m)?;

        let (explicit1, explicit2, system) = match (self.kind.family(), n) {
            (Scheme::Be, _) => (
                scaled(&self.prev.g1, 1.0 / tau),
                scaled(&self.prev.g2, 1.0 / tau),
                &self.rest,
            ),
            (Scheme::Sbd, 1) => {
                // (G¹-G⁰)/τ + d₀(a+A)(⅔G¹ + ⅓G⁰) - a·d₀(⅔G₂¹ + ⅓G₂⁰) = 0
                let (d1, d2) = self.memory.weight(0);
                u1.axpy(d1 / 3.0, &self.initial.g1);
                u2.axpy(d2 / 3.0, &self.initial.g2);
                (
                    scaled(&self.initial.g1, 1.0 / tau),
                    scaled(&self.initial.g2, 1.0 / tau),
                    self.first.as_ref().expect("SBD keeps a first-step system"),
                )
            }
            (Scheme::Sbd, _) => {
                let (c1, c2) = self.memory.weight(n - 1);
                u1.axpy(0.5 * c1, &self.initial.g1);
                u2.axpy(0.5 * c2, &self.initial.g2);
                let p2 = self.prev2.as_ref().unwrap_or(&self.initial);
                let bdf = |g: &[f64], h: &[f64]| -> Vec<f64> {
                    g.iter().zip(h).map(|(x, y)| (2.0 * x - 0.5 * y) / tau).collect()
                };
                (bdf(&self.prev.g1, &p2.g1), bdf(&self.prev.g2, &p2.g2), &self.rest)
            }
        };

        // rhs = explicit - (a+A)·U_own + a·U_other
        let mut rhs1 = vec![0.0; m];
        let mut rhs2 = vec![0.0; m];
        self.lap.apply_shifted_into(a, &u1, &mut rhs1);
        self.lap.apply_shifted_into(a, &u2, &mut rhs2);
        for k in 0..m {
            rhs1[k] = explicit1[k] - rhs1[k] + a * u2[k];
            rhs2[k] = explicit2[k] - rhs2[k] + a * u1[k];
        }
        let (g1, g2) = system.solve(&rhs1, &rhs2);
        let next = StateField { g1, g2, n };
        if !next.is_finite() {
            return Err(Error::SingularSystem(format!("non-finite solution at step {n}")));
        }
        self.memory.record(&next)?;
        self.prev2 = Some(std::mem::replace(&mut self.prev, next));
        Ok(&self.prev)
    }
}

fn scaled(v: &[f64], s: f64) -> Vec<f64> {
    v.iter().map(|x| x * s).collect()
}
