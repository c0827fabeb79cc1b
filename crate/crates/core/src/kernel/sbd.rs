use num_complex::Complex64;
use std::f64::consts::PI;

use crate::cq::sbd_weights;
use crate::error::{invalid, Error, Result};
use crate::jacobi::gauss_jacobi;
use crate::special::reflection_factor;

/// Largest head the automatic N_s search will accept.
pub const MAX_AUTO_HEAD: usize = 64;

/// One geometric family of a compressed SBD kernel: the weight contribution
/// at index i ≥ 3 is Σ_j multipliers_j · ratios_j^{i-3}.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeFamily {
    pub multipliers: Vec<f64>,
    pub ratios: Vec<f64>,
}

impl NodeFamily {
    pub fn len(&self) -> usize {
        self.ratios.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ratios.is_empty()
    }

    fn eval(&self, e: i32) -> f64 {
        self.multipliers
            .iter()
            .zip(&self.ratios)
            .map(|(m, r)| m * r.powi(e))
            .sum()
    }
}

/// Compressed second-order backward-difference kernel with an exact head of
/// `n_head` leading weights.
///
/// Family 1 comes from the branch point at ζ = 3 (ratios (s+1)/(s+5) < 1/3),
/// family 2 from ζ = 1 (ratios (s+1)/2). Both use the Jacobi weight
/// (1-s)^α (1+s)^{2-2α}; the complex factors are folded at build time and
/// only their real parts are kept.
#[derive(Debug, Clone, PartialEq)]
pub struct FastKernelSBD {
    pub alpha: f64,
    pub tau: f64,
    pub n_head: usize,
    pub head: Vec<f64>,
    pub family1: NodeFamily,
    pub family2: NodeFamily,
}

impl FastKernelSBD {
    pub fn new(
        alpha: f64,
        tau: f64,
        n_points_1: usize,
        n_points_2: usize,
        n_head: usize,
    ) -> Result<Self> {
        build_sbd_kernel(alpha, tau, n_points_1, n_points_2, n_head)
    }

    /// Compressed value of d_i for i ≥ 3, ignoring the head.
    pub fn reconstruct(&self, i: usize) -> f64 {
        debug_assert!(i >= 3);
        let e = (i - 3) as i32;
        self.family1.eval(e) + self.family2.eval(e)
    }

    pub fn weight(&self, i: usize) -> f64 {
        if i < self.n_head {
            self.head[i]
        } else {
            self.reconstruct(i)
        }
    }

    pub fn n_points(&self) -> (usize, usize) {
        (self.family1.len(), self.family2.len())
    }

    /// Same nodes with a different head length.
    pub fn with_head(&self, n_head: usize) -> Result<Self> {
        if n_head < 3 {
            return Err(invalid(format!("SBD head length must be at least 3, got {n_head}")));
        }
        let head = sbd_weights(self.alpha, self.tau, n_head - 1)?.weights;
        Ok(FastKernelSBD {
            n_head,
            head,
            ..self.clone()
        })
    }
}

pub fn build_sbd_kernel(
    alpha: f64,
    tau: f64,
    n_points_1: usize,
    n_points_2: usize,
    n_head: usize,
) -> Result<FastKernelSBD> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(invalid(format!("kernel order must lie in (0, 1), got {alpha}")));
    }
    if n_head < 3 {
        return Err(invalid(format!("SBD head length must be at least 3, got {n_head}")));
    }
    let head = sbd_weights(alpha, tau, n_head - 1)?.weights;
    let (a, b) = (alpha, 2.0 - 2.0 * alpha);
    let rule1 = gauss_jacobi(a, b, n_points_1)?;
    let rule2 = gauss_jacobi(a, b, n_points_2)?;

    let g = reflection_factor(alpha) / tau.powf(alpha);
    let pre1 = Complex64::from_polar(-(2f64.powf(2.0 + 2.0 * alpha)) * g, -PI * alpha);
    let pre2 = -(2f64.powf(-alpha - 3.0)) * g;

    let family1 = NodeFamily {
        multipliers: rule1
            .iter()
            .map(|(s, w)| (pre1 * (w / (s + 5.0).powi(4))).re)
            .collect(),
        ratios: rule1.nodes.iter().map(|s| (s + 1.0) / (s + 5.0)).collect(),
    };
    let family2 = NodeFamily {
        multipliers: rule2
            .iter()
            .map(|(s, w)| {
                // principal branch; 1+3s < 0 for s < -1/3 lands on arg = +π
                let z = Complex64::new(1.0 + 3.0 * s, 0.0).powf(alpha);
                (z * (pre2 * w)).re
            })
            .collect(),
        ratios: rule2.nodes.iter().map(|s| (s + 1.0) / 2.0).collect(),
    };

    Ok(FastKernelSBD {
        alpha,
        tau,
        n_head,
        head,
        family1,
        family2,
    })
}

/// Builds the kernel with the smallest head N_s ≥ 3 such that
/// max_{N_s ≤ i ≤ n_max} ε_i ≤ eps_tol·τ^{-α}.
///
/// Lengthening the head only removes errors near the start; if the bound is
/// missed further out, or needs a head longer than [`MAX_AUTO_HEAD`], more
/// quadrature points are needed and an error is returned.
pub fn build_sbd_kernel_auto(
    alpha: f64,
    tau: f64,
    n_points_1: usize,
    n_points_2: usize,
    eps_tol: f64,
    n_max: usize,
) -> Result<FastKernelSBD> {
    let base = build_sbd_kernel(alpha, tau, n_points_1, n_points_2, 3)?;
    let exact = sbd_weights(alpha, tau, n_max.max(3))?;
    let tol = eps_tol * tau.powf(-alpha);
    let tail = TailErrors::new(&base, &exact);
    match tail.shortest_head(tol) {
        Some(n_head) if n_head <= MAX_AUTO_HEAD => base.with_head(n_head),
        _ => {
            let (i, e) = tail.worst_from(MAX_AUTO_HEAD);
            Err(Error::Unreachable(format!(
                "eps_tol {eps_tol:e} needs more quadrature points than ({n_points_1}, {n_points_2}): \
                 error {e:.3e} at i = {i} exceeds {tol:.3e} beyond any head up to {MAX_AUTO_HEAD}"
            )))
        }
    }
}

/// ε_i for i ≥ 3 of a kernel against the classical table, with suffix maxima.
pub(crate) struct TailErrors {
    eps: Vec<f64>,
    suffix_max: Vec<f64>,
}

impl TailErrors {
    pub(crate) fn new(kernel: &FastKernelSBD, exact: &crate::cq::WeightTable) -> Self {
        let eps: Vec<f64> = (3..=exact.n_max())
            .map(|i| (kernel.reconstruct(i) - exact[i]).abs())
            .collect();
        let mut suffix_max = vec![0.0; eps.len() + 1];
        for k in (0..eps.len()).rev() {
            suffix_max[k] = eps[k].max(suffix_max[k + 1]);
        }
        TailErrors { eps, suffix_max }
    }

    /// max_{i ≥ head} ε_i.
    pub(crate) fn max_from(&self, head: usize) -> f64 {
        self.suffix_max[(head.max(3) - 3).min(self.eps.len())]
    }

    pub(crate) fn shortest_head(&self, tol: f64) -> Option<usize> {
        (0..self.suffix_max.len())
            .find(|&k| self.suffix_max[k] <= tol)
            .map(|k| k + 3)
    }

    fn worst_from(&self, head: usize) -> (usize, f64) {
        self.eps
            .iter()
            .enumerate()
            .skip(head - 3)
            .fold((head, 0.0), |acc, (k, &e)| if e > acc.1 { (k + 3, e) } else { acc })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reconstruction_matches_classical_weights() {
        for &(alpha, n1, n2) in &[(0.3, 10, 72), (0.5, 10, 72), (0.8, 10, 72), (0.5, 41, 41)] {
            let k = build_sbd_kernel(alpha, 1.0, n1, n2, 17).unwrap();
            let w = sbd_weights(alpha, 1.0, 200).unwrap();
            for i in 17..=200 {
                let rel = ((k.reconstruct(i) - w[i]) / w[i]).abs();
                assert!(rel < 1e-9, "alpha {alpha} ({n1},{n2}) i {i}: {rel:e}");
            }
        }
    }

    #[test]
    fn ratios_in_range() {
        for &alpha in &[0.05, 0.5, 0.95] {
            let k = build_sbd_kernel(alpha, 0.01, 20, 40, 15).unwrap();
            assert!(k.family1.ratios.iter().all(|&r| r > 0.0 && r < 1.0 / 3.0));
            assert!(k.family2.ratios.iter().all(|&r| r > 0.0 && r < 1.0));
            assert!(k
                .family1
                .multipliers
                .iter()
                .chain(&k.family2.multipliers)
                .all(|m| m.is_finite()));
        }
    }

    #[test]
    fn head_is_bitwise_classical() {
        let k = build_sbd_kernel(0.3, 1e-3, 31, 31, 15).unwrap();
        let w = sbd_weights(0.3, 1e-3, 14).unwrap();
        for i in 0..15 {
            assert_eq!(k.weight(i).to_bits(), w[i].to_bits());
        }
    }

    #[test]
    fn short_head_rejected() {
        assert!(build_sbd_kernel(0.3, 1.0, 10, 10, 2).is_err());
    }

    #[test]
    fn auto_head_meets_tolerance() {
        let tau = 1e-3;
        let k = build_sbd_kernel_auto(0.5, tau, 10, 72, 1e-10, 400).unwrap();
        let w = sbd_weights(0.5, tau, 400).unwrap();
        let tol = 1e-10 * tau.powf(-0.5);
        for i in k.n_head..=400 {
            assert!((k.reconstruct(i) - w[i]).abs() <= tol);
        }
        // one shorter would violate it somewhere
        let shorter = k.n_head - 1;
        if shorter >= 3 {
            let worst = (shorter..=400)
                .map(|i| (k.reconstruct(i) - w[i]).abs())
                .fold(0.0, f64::max);
            assert!(worst > tol);
        }
    }

    #[test]
    fn auto_head_reports_unreachable_tolerance() {
        let err = build_sbd_kernel_auto(0.3, 1e-3, 2, 6, 1e-14, 1000).unwrap_err();
        assert!(matches!(err, Error::Unreachable(_)), "{err}");
    }
}
