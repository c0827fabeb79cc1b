//! Gauss–Jacobi quadrature on [-1, 1] for the weight (1-s)^a (1+s)^b.
//!
//! Nodes come from the eigenvalues of the symmetric Jacobi matrix built from
//! the three-term recurrence (Golub–Welsch). Each node then gets one Newton
//! step on the orthonormal polynomial of degree n, and the weight is taken
//! from the Christoffel function 1 / Σ_k q_k(s)^2, which is better
//! conditioned near the endpoints than squaring eigenvector components.

use crate::error::{invalid, Result};
use crate::special::beta;

/// Largest rule `gauss_jacobi` will build.
pub const MAX_POINTS: usize = 256;

/// A Gauss–Jacobi rule: `nodes` strictly increasing in (-1, 1) and positive
/// `weights`, exact for polynomials of degree up to `2 * len() - 1` against
/// (1-s)^`exponent_a` (1+s)^`exponent_b`.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiRule {
    pub exponent_a: f64,
    pub exponent_b: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl JacobiRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Σ_j w_j f(s_j).
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&s, &w)| w * f(s))
            .sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }
}

fn check_exponents(a: f64, b: f64) -> Result<()> {
    if !(a > -1.0 && a.is_finite()) || !(b > -1.0 && b.is_finite()) {
        return Err(invalid(format!(
            "Jacobi exponents must exceed -1, got a = {a}, b = {b}"
        )));
    }
    Ok(())
}

/// Recurrence coefficients of the monic Jacobi polynomials: diagonal
/// `alpha_k` (k = 0..n) and squared off-diagonal `beta_k` (k = 1..n, index 0
/// unused).
fn recurrence(a: f64, b: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let ab = a + b;
    let mut diag = Vec::with_capacity(n + 1);
    let mut off2 = vec![0.0; n + 1];
    for k in 0..=n {
        let kf = k as f64;
        let d = if k == 0 {
            (b - a) / (ab + 2.0)
        } else {
            let t = 2.0 * kf + ab;
            (b * b - a * a) / (t * (t + 2.0))
        };
        diag.push(d);
    }
    for k in 1..=n {
        let kf = k as f64;
        off2[k] = if k == 1 {
            4.0 * (1.0 + a) * (1.0 + b) / ((ab + 2.0).powi(2) * (ab + 3.0))
        } else {
            let t = 2.0 * kf + ab;
            4.0 * kf * (kf + a) * (kf + b) * (kf + ab) / (t * t * (t + 1.0) * (t - 1.0))
        };
    }
    (diag, off2)
}

/// ∫_{-1}^{1} (1-s)^a (1+s)^b s^k ds.
///
/// Integration by parts against (1-s²)w'(s) = [(b-a) - (a+b)s] w(s) gives
/// (a+b+k+2) m_{k+1} = (b-a) m_k + k m_{k-1}, seeded with the Beta integral.
pub fn jacobi_moment(exponent_a: f64, exponent_b: f64, k: usize) -> Result<f64> {
    check_exponents(exponent_a, exponent_b)?;
    let (a, b) = (exponent_a, exponent_b);
    let m0 = 2f64.powf(a + b + 1.0) * beta(a + 1.0, b + 1.0);
    if k == 0 {
        return Ok(m0);
    }
    let mut prev = m0;
    let mut cur = (b - a) / (a + b + 2.0) * m0;
    for j in 1..k {
        let jf = j as f64;
        let next = ((b - a) * cur + jf * prev) / (a + b + jf + 2.0);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Orthonormal polynomial values q_0..q_{n-1} summed in square, plus q_n and
/// its derivative, at `x`.
struct Evaluation {
    sum_sq: f64,
    q_n: f64,
    dq_n: f64,
}

fn evaluate(x: f64, diag: &[f64], off2: &[f64], mu0: f64, n: usize) -> Evaluation {
    let mut q_prev = 0.0;
    let mut q = 1.0 / mu0.sqrt();
    let mut dq_prev = 0.0;
    let mut dq = 0.0;
    let mut sum_sq = 0.0;
    for k in 0..n {
        sum_sq += q * q;
        let b_next = off2[k + 1].sqrt();
        let b_k = if k == 0 { 0.0 } else { off2[k].sqrt() };
        let q_next = ((x - diag[k]) * q - b_k * q_prev) / b_next;
        let dq_next = (q + (x - diag[k]) * dq - b_k * dq_prev) / b_next;
        q_prev = q;
        q = q_next;
        dq_prev = dq;
        dq = dq_next;
    }
    Evaluation {
        sum_sq,
        q_n: q,
        dq_n: dq,
    }
}

/// Eigenvalues of the symmetric tridiagonal matrix (`diag`, `off`) by the
/// implicit QL method. `off[i]` couples rows i and i+1.
fn tridiagonal_eigenvalues(mut diag: Vec<f64>, off: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(off);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(invalid("tridiagonal eigenvalue iteration did not converge"));
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            diag[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(diag)
}

/// Builds the `n_points`-point Gauss–Jacobi rule for (1-s)^a (1+s)^b.
pub fn gauss_jacobi(exponent_a: f64, exponent_b: f64, n_points: usize) -> Result<JacobiRule> {
    check_exponents(exponent_a, exponent_b)?;
    if n_points == 0 {
        return Err(invalid("Gauss–Jacobi rule needs at least one point"));
    }
    if n_points > MAX_POINTS {
        return Err(invalid(format!(
            "Gauss–Jacobi rule limited to {MAX_POINTS} points, got {n_points}"
        )));
    }
    let (a, b) = (exponent_a, exponent_b);
    let n = n_points;
    let mu0 = jacobi_moment(a, b, 0)?;
    let (diag, off2) = recurrence(a, b, n);
    let off: Vec<f64> = off2[1..n].iter().map(|v| v.sqrt()).collect();

    let mut eig = tridiagonal_eigenvalues(diag[..n].to_vec(), &off)?;
    eig.sort_by(f64::total_cmp);

    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for x0 in eig {
        let ev = evaluate(x0, &diag, &off2, mu0, n);
        let mut x = x0;
        if ev.dq_n != 0.0 {
            let step = ev.q_n / ev.dq_n;
            // Keep the polish inside the interval; a wild step means the
            // eigenvalue was already at working precision.
            if (x - step).abs() < 1.0 && step.abs() < 1e-6 {
                x -= step;
            }
        }
        let ev = evaluate(x, &diag, &off2, mu0, n);
        nodes.push(x);
        weights.push(1.0 / ev.sum_sq);
    }

    Ok(JacobiRule {
        exponent_a,
        exponent_b,
        nodes,
        weights,
    })
}
