use crate::cq::be_weights;
use crate::error::{invalid, Result};
use crate::jacobi::gauss_jacobi;
use crate::special::reflection_factor;

/// Compressed backward-Euler kernel.
///
/// For i ≥ 2 the weight is d_i = Σ_j ŵ_j r_j^{i-2}, exact for
/// 2 ≤ i ≤ 2N_p + 1 because the integrand is then a polynomial of degree at
/// most 2N_p - 1 against the Jacobi weight (1-s)^α (1+s)^{1-α}.
#[derive(Debug, Clone, PartialEq)]
pub struct FastKernelBE {
    pub alpha: f64,
    pub tau: f64,
    pub head: [f64; 2],
    pub node_weights: Vec<f64>,
    pub ratios: Vec<f64>,
}

impl FastKernelBE {
    pub fn new(alpha: f64, tau: f64, n_points: usize) -> Result<Self> {
        build_be_kernel(alpha, tau, n_points)
    }

    pub fn n_points(&self) -> usize {
        self.ratios.len()
    }

    /// Compressed value of d_i for i ≥ 2.
    pub fn reconstruct(&self, i: usize) -> f64 {
        debug_assert!(i >= 2);
        let e = (i - 2) as i32;
        self.node_weights
            .iter()
            .zip(&self.ratios)
            .map(|(w, r)| w * r.powi(e))
            .sum()
    }

    /// d_i as the fast scheme sees it: exact head, compressed tail.
    pub fn weight(&self, i: usize) -> f64 {
        if i < 2 {
            self.head[i]
        } else {
            self.reconstruct(i)
        }
    }
}

pub fn build_be_kernel(alpha: f64, tau: f64, n_points: usize) -> Result<FastKernelBE> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(invalid(format!("kernel order must lie in (0, 1), got {alpha}")));
    }
    if n_points < 2 {
        return Err(invalid("BE kernel needs at least two quadrature points"));
    }
    let rule = gauss_jacobi(alpha, 1.0 - alpha, n_points)?;
    let exact = be_weights(alpha, tau, 1)?;
    let pre = -reflection_factor(alpha) / (4.0 * tau.powf(alpha));
    let node_weights = rule.weights.iter().map(|w| pre * w).collect();
    let ratios = rule.nodes.iter().map(|s| (s + 1.0) / 2.0).collect();
    Ok(FastKernelBE {
        alpha,
        tau,
        head: [exact[0], exact[1]],
        node_weights,
        ratios,
    })
}
