//! Compressed CQ kernels and the O(1)-per-step history recursion.

mod be;
mod history;
mod report;
mod sbd;

pub use be::{build_be_kernel, FastKernelBE};
pub use history::{HistoryState, HistoryVariant};
pub use report::{kernel_error_report, KernelErrorReport};
pub use sbd::{build_sbd_kernel, build_sbd_kernel_auto, FastKernelSBD, NodeFamily, MAX_AUTO_HEAD};

use crate::cq::Scheme;
use crate::error::Result;

pub const DEFAULT_BE_POINTS: usize = 64;
/// Default (family 1, family 2) point counts. Family 1 converges with very
/// few nodes; the far tail is governed by family 2.
pub const DEFAULT_SBD_POINTS: (usize, usize) = (10, 72);
pub const DEFAULT_EPS_TOL: f64 = 1e-12;

/// Default SBD head length for a kernel of order `alpha`.
pub fn default_head(alpha: f64) -> usize {
    if alpha <= 0.5 {
        15
    } else {
        17
    }
}

/// Values a history can be kept for: scalars or grid vectors.
pub trait LinearSpace: Clone {
    /// A zero of the same shape.
    fn zeroed(&self) -> Self;
    /// self ← a·x + self
    fn axpy(&mut self, a: f64, x: &Self);
    /// self ← r·self + f·x
    fn scale_add(&mut self, r: f64, f: f64, x: &Self);
}

impl LinearSpace for f64 {
    fn zeroed(&self) -> Self {
        0.0
    }

    fn axpy(&mut self, a: f64, x: &Self) {
        *self += a * x;
    }

    fn scale_add(&mut self, r: f64, f: f64, x: &Self) {
        *self = r * *self + f * x;
    }
}

impl LinearSpace for Vec<f64> {
    fn zeroed(&self) -> Self {
        vec![0.0; self.len()]
    }

    fn axpy(&mut self, a: f64, x: &Self) {
        debug_assert_eq!(self.len(), x.len());
        for (s, v) in self.iter_mut().zip(x) {
            *s += a * v;
        }
    }

    fn scale_add(&mut self, r: f64, f: f64, x: &Self) {
        debug_assert_eq!(self.len(), x.len());
        for (s, v) in self.iter_mut().zip(x) {
            *s = r * *s + f * v;
        }
    }
}

/// Either compressed kernel.
#[derive(Debug, Clone, PartialEq)]
pub enum FastKernel {
    Be(FastKernelBE),
    Sbd(FastKernelSBD),
}

impl FastKernel {
    pub fn scheme(&self) -> Scheme {
        match self {
            FastKernel::Be(_) => Scheme::Be,
            FastKernel::Sbd(_) => Scheme::Sbd,
        }
    }

    pub fn alpha(&self) -> f64 {
        match self {
            FastKernel::Be(k) => k.alpha,
            FastKernel::Sbd(k) => k.alpha,
        }
    }

    pub fn tau(&self) -> f64 {
        match self {
            FastKernel::Be(k) => k.tau,
            FastKernel::Sbd(k) => k.tau,
        }
    }

    /// Exact leading weights.
    pub fn head(&self) -> &[f64] {
        match self {
            FastKernel::Be(k) => &k.head,
            FastKernel::Sbd(k) => &k.head,
        }
    }

    /// The weight the fast scheme uses at index i.
    pub fn weight(&self, i: usize) -> f64 {
        match self {
            FastKernel::Be(k) => k.weight(i),
            FastKernel::Sbd(k) => k.weight(i),
        }
    }

    /// Total number of geometric nodes.
    pub fn n_nodes(&self) -> usize {
        match self {
            FastKernel::Be(k) => k.n_points(),
            FastKernel::Sbd(k) => k.family1.len() + k.family2.len(),
        }
    }

    /// (ratios, feed coefficients, family-1 length) for the history
    /// recursion 𝒢_j ← r_j 𝒢_j + f_j G(t_{n-L}).
    pub(crate) fn tail_nodes(&self) -> (Vec<f64>, Vec<f64>, usize) {
        match self {
            FastKernel::Be(k) => (k.ratios.clone(), k.node_weights.clone(), k.ratios.len()),
            FastKernel::Sbd(k) => {
                let shift = (k.n_head - 3) as i32;
                let fam = [&k.family1, &k.family2];
                let ratios = fam.iter().flat_map(|f| f.ratios.iter().copied()).collect();
                let feeds = fam
                    .iter()
                    .flat_map(|f| f.multipliers.iter().zip(&f.ratios).map(|(m, r)| m * r.powi(shift)))
                    .collect();
                (ratios, feeds, k.family1.len())
            }
        }
    }
}

impl From<FastKernelBE> for FastKernel {
    fn from(k: FastKernelBE) -> Self {
        FastKernel::Be(k)
    }
}

impl From<FastKernelSBD> for FastKernel {
    fn from(k: FastKernelSBD) -> Self {
        FastKernel::Sbd(k)
    }
}

/// Point counts tried, in order, when a count is left to the run length.
/// The compression is accurate up to index i ≈ N_p²/4; past that the
/// geometric sum loses the algebraic i^{-1-α} tail of the weights.
pub const POINT_LADDER: [usize; 7] = [64, 96, 128, 160, 192, 224, 256];

/// How to build the compressed kernels of a fast run.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelConfig {
    /// BE node count; `None` sizes it to the run (see [`KernelConfig::build`]).
    pub be_points: Option<usize>,
    /// SBD (family 1, family 2) node counts; `None` sizes family 2 to the run.
    pub sbd_points: Option<(usize, usize)>,
    /// Fixed SBD head. `None` takes the shortest head meeting `eps_tol`,
    /// but at least [`default_head`].
    pub n_head: Option<usize>,
    /// Drop the [`default_head`] floor when `n_head` is `None`. With fixed
    /// point counts an unreachable `eps_tol` is then an error.
    pub auto_head: bool,
    pub eps_tol: f64,
}

impl Default for KernelConfig {
    fn default() -> Self {
        KernelConfig {
            be_points: None,
            sbd_points: None,
            n_head: None,
            auto_head: false,
            eps_tol: DEFAULT_EPS_TOL,
        }
    }
}

impl KernelConfig {
    /// Fixed point counts, no sizing.
    pub fn fixed(be_points: usize, sbd_points: (usize, usize)) -> Self {
        KernelConfig {
            be_points: Some(be_points),
            sbd_points: Some(sbd_points),
            ..Default::default()
        }
    }

    /// Builds the kernel for order `alpha` and a run of `n_max` steps.
    ///
    /// A count left unset starts at the default ([`DEFAULT_BE_POINTS`], or
    /// family 2 of [`DEFAULT_SBD_POINTS`]) and climbs [`POINT_LADDER`] until
    /// max ε_i ≤ eps_tol·τ^{-α} over the compressed indices up to `n_max`.
    /// For SBD with a pinned head the climb also stops once the error left
    /// sits near the head and another rung fails to halve it. When the tolerance is missed the kernel returned is the best
    /// one found; its [`kernel_error_report`] tells by how much.
    pub fn build(&self, scheme: Scheme, alpha: f64, tau: f64, n_max: usize) -> Result<FastKernel> {
        let tol = self.eps_tol * tau.powf(-alpha);
        match scheme {
            Scheme::Be => {
                if let Some(np) = self.be_points {
                    return Ok(build_be_kernel(alpha, tau, np)?.into());
                }
                let exact = crate::cq::be_weights(alpha, tau, n_max.max(2))?;
                let mut kernel = None;
                for np in POINT_LADDER.iter().copied().filter(|&p| p >= DEFAULT_BE_POINTS) {
                    let k = build_be_kernel(alpha, tau, np)?;
                    // exact through 2N_p + 1, so only longer runs need checking
                    let ok = (2 * np + 2..=exact.n_max())
                        .all(|i| (k.reconstruct(i) - exact[i]).abs() <= tol);
                    kernel = Some(k);
                    if ok {
                        break;
                    }
                }
                Ok(kernel.expect("ladder is non-empty").into())
            }
            Scheme::Sbd => {
                let exact = crate::cq::sbd_weights(alpha, tau, n_max.max(3))?;
                let floor = match (self.n_head, self.auto_head) {
                    (Some(h), _) => h,
                    (None, true) => 3,
                    (None, false) => default_head(alpha),
                };
                // (best error a head can reach, the shortest head reaching it,
                // whether the far tail already meets tol)
                let assess = |base: &FastKernelSBD| {
                    let tail = sbd::TailErrors::new(base, &exact);
                    let far = tail.max_from(MAX_AUTO_HEAD);
                    match self.n_head {
                        Some(h) => (tail.max_from(h), h, far <= tol),
                        None => {
                            let best = far.max(tol);
                            let h = tail.shortest_head(best).unwrap_or(MAX_AUTO_HEAD);
                            (best, h.max(floor).min(MAX_AUTO_HEAD.max(floor)), far <= tol)
                        }
                    }
                };
                if let Some((n1, n2)) = self.sbd_points {
                    if self.auto_head && self.n_head.is_none() {
                        return Ok(build_sbd_kernel_auto(alpha, tau, n1, n2, self.eps_tol, n_max)?.into());
                    }
                    let base = build_sbd_kernel(alpha, tau, n1, n2, 3)?;
                    let (_, head, _) = assess(&base);
                    return Ok(base.with_head(head)?.into());
                }
                let (n1, n2_min) = DEFAULT_SBD_POINTS;
                let ladder = std::iter::once(n2_min)
                    .chain(POINT_LADDER.iter().copied().filter(|&p| p > n2_min));
                let mut last: Option<(FastKernelSBD, f64, usize)> = None;
                for n2 in ladder {
                    let base = build_sbd_kernel(alpha, tau, n1, n2, 3)?;
                    let (err, head, far_ok) = assess(&base);
                    if err <= tol {
                        return Ok(base.with_head(head)?.into());
                    }
                    if let Some((prev, prev_err, prev_head)) = last.take() {
                        // a pinned head saturates near N_s; more nodes no longer buy accuracy
                        if far_ok && err > 0.5 * prev_err {
                            return Ok(prev.with_head(prev_head)?.into());
                        }
                    }
                    last = Some((base, err, head));
                }
                let (base, _, head) = last.expect("ladder is non-empty");
                Ok(base.with_head(head)?.into())
            }
        }
    }
}
