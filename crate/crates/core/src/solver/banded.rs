//! Banded LU for the implicit two-state system.
//!
//! With unknowns interleaved as (G₁_1, G₂_1, G₁_2, G₂_2, …) the block
//! operator is pentadiagonal (two sub- and two super-diagonals). Partial
//! pivoting can add two more super-diagonals of fill.

use super::DiscreteLaplacian;
use crate::error::{Error, Result};

const KL: usize = 2;
const KU: usize = 2;
const WIDTH: usize = 2 * KL + KU + 1;

/// LU factors with row interchanges of a matrix with bandwidth (2, 2).
#[derive(Debug, Clone)]
pub struct BandedLu {
    n: usize,
    /// Row r holds columns r-2 ..= r+4 at offsets 0..7.
    rows: Vec<[f64; WIDTH]>,
    lower: Vec<[f64; KL]>,
    pivots: Vec<usize>,
}

impl BandedLu {
    /// Factors the matrix whose entry (r, c), |r - c| ≤ 2, is `entry(r, c)`.
    pub fn factor<F: Fn(usize, usize) -> f64>(n: usize, entry: F) -> Result<Self> {
        let mut rows = vec![[0.0; WIDTH]; n];
        for (r, row) in rows.iter_mut().enumerate() {
            for c in r.saturating_sub(KL)..=(r + KU).min(n.saturating_sub(1)) {
                row[c + KL - r] = entry(r, c);
            }
        }
        let at = |r: usize, c: usize| c + KL - r;
        let mut lower = vec![[0.0; KL]; n];
        let mut pivots = vec![0; n];
        for k in 0..n {
            let last = (k + KL).min(n - 1);
            let mut p = k;
            for r in k + 1..=last {
                if rows[r][at(r, k)].abs() > rows[p][at(p, k)].abs() {
                    p = r;
                }
            }
            let piv = rows[p][at(p, k)];
            if piv == 0.0 || !piv.is_finite() {
                return Err(Error::SingularSystem(format!("zero pivot in column {k}")));
            }
            pivots[k] = p;
            let top = (k + KL + KU).min(n - 1);
            if p != k {
                for c in k..=top {
                    let (ik, ip) = (at(k, c), at(p, c));
                    let tmp = rows[k][ik];
                    rows[k][ik] = rows[p][ip];
                    rows[p][ip] = tmp;
                }
            }
            let pivot_row = rows[k];
            for r in k + 1..=last {
                let l = rows[r][at(r, k)] / piv;
                lower[k][r - k - 1] = l;
                rows[r][at(r, k)] = 0.0;
                if l != 0.0 {
                    for c in k + 1..=top {
                        rows[r][at(r, c)] -= l * pivot_row[at(k, c)];
                    }
                }
            }
        }
        Ok(BandedLu {
            n,
            rows,
            lower,
            pivots,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Solves in place.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.n;
        debug_assert_eq!(b.len(), n);
        for k in 0..n {
            let p = self.pivots[k];
            if p != k {
                b.swap(k, p);
            }
            let bk = b[k];
            for r in k + 1..=(k + KL).min(n - 1) {
                b[r] -= self.lower[k][r - k - 1] * bk;
            }
        }
        for k in (0..n).rev() {
            let row = &self.rows[k];
            let mut acc = b[k];
            for c in k + 1..=(k + KL + KU).min(n - 1) {
                acc -= row[c + KL - k] * b[c];
            }
            b[k] = acc / row[KL];
        }
    }
}

/// The implicit operator of one step,
///
/// [ lead/τ + d₁(a+A)   -a·d₂          ] [G₁]
/// [ -a·d₁              lead/τ + d₂(a+A)] [G₂],
///
/// factored once and reused for every step that shares it.
#[derive(Debug, Clone)]
pub struct BlockSystem {
    pub d01: f64,
    pub d02: f64,
    pub coupling_a: f64,
    pub diag_shift: f64,
    pub lap: DiscreteLaplacian,
    lu: BandedLu,
}

impl BlockSystem {
    pub fn new(
        d01: f64,
        d02: f64,
        coupling_a: f64,
        tau: f64,
        lap: DiscreteLaplacian,
        bdf_lead: f64,
    ) -> Result<Self> {
        let diag_shift = bdf_lead / tau;
        let lu = BandedLu::factor(2 * lap.grid_m, |r, c| {
            block_entry(d01, d02, coupling_a, diag_shift, &lap, r, c)
        })?;
        Ok(BlockSystem {
            d01,
            d02,
            coupling_a,
            diag_shift,
            lap,
            lu,
        })
    }

    fn entry(&self, r: usize, c: usize) -> f64 {
        block_entry(self.d01, self.d02, self.coupling_a, self.diag_shift, &self.lap, r, c)
    }

    pub fn solve(&self, rhs1: &[f64], rhs2: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let m = self.lap.grid_m;
        let mut b: Vec<f64> = rhs1.iter().zip(rhs2).flat_map(|(x, y)| [*x, *y]).collect();
        self.lu.solve_in_place(&mut b);
        #[cfg(debug_assertions)]
        self.check_residual(rhs1, rhs2, &b);
        let mut g1 = Vec::with_capacity(m);
        let mut g2 = Vec::with_capacity(m);
        for pair in b.chunks_exact(2) {
            g1.push(pair[0]);
            g2.push(pair[1]);
        }
        (g1, g2)
    }

    /// Matrix-vector product on interleaved vectors.
    pub fn multiply(&self, x: &[f64]) -> Vec<f64> {
        let n = x.len();
        (0..n)
            .map(|r| {
                (r.saturating_sub(KL)..=(r + KU).min(n - 1))
                    .map(|c| self.entry(r, c) * x[c])
                    .sum()
            })
            .collect()
    }

    #[cfg(debug_assertions)]
    fn check_residual(&self, rhs1: &[f64], rhs2: &[f64], x: &[f64]) {
        let ax = self.multiply(x);
        let b: Vec<f64> = rhs1.iter().zip(rhs2).flat_map(|(p, q)| [*p, *q]).collect();
        let norm = |v: &[f64]| v.iter().map(|t| t * t).sum::<f64>().sqrt();
        let res: Vec<f64> = ax.iter().zip(&b).map(|(p, q)| p - q).collect();
        // backward-stable scale: ‖b‖ plus ‖A‖∞‖x‖ for the terms that cancel
        let d = self.d01.abs().max(self.d02.abs());
        let a_norm = self.diag_shift.abs()
            + d * (2.0 * self.coupling_a.abs() + 4.0 / (self.lap.h * self.lap.h));
        let scale = norm(&b) + a_norm * norm(x);
        debug_assert!(
            norm(&res) <= 1e-12 * scale,
            "banded solve residual {} vs scale {}",
            norm(&res),
            scale
        );
    }
}

fn block_entry(
    d1: f64,
    d2: f64,
    a: f64,
    shift: f64,
    lap: &DiscreteLaplacian,
    r: usize,
    c: usize,
) -> f64 {
    let inv_h2 = 1.0 / (lap.h * lap.h);
    let (kr, cr) = (r / 2, r % 2);
    let (kc, cc) = (c / 2, c % 2);
    let d = if cr == 0 { d1 } else { d2 };
    if kr == kc {
        if cr == cc {
            shift + d * (a + 2.0 * inv_h2)
        } else {
            // the G₁ row meets G₂ through the weight of G₂'s order
            -a * if cr == 0 { d2 } else { d1 }
        }
    } else if cr == cc && kr.abs_diff(kc) == 1 {
        -d * inv_h2
    } else {
        0.0
    }
}

/// One-shot version of [`BlockSystem`]: builds, factors and solves.
#[allow(clippy::too_many_arguments)]
pub fn solve_block_system(
    d01: f64,
    d02: f64,
    coupling_a: f64,
    tau: f64,
    lap: &DiscreteLaplacian,
    rhs1: &[f64],
    rhs2: &[f64],
    bdf_lead: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    Ok(BlockSystem::new(d01, d02, coupling_a, tau, *lap, bdf_lead)?.solve(rhs1, rhs2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
        let n = b.len();
        for k in 0..n {
            let p = (k..n).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs())).unwrap();
            a.swap(k, p);
            b.swap(k, p);
            for r in k + 1..n {
                let l = a[r][k] / a[k][k];
                for c in k..n {
                    a[r][c] -= l * a[k][c];
                }
                b[r] -= l * b[k];
            }
        }
        let mut x = vec![0.0; n];
        for k in (0..n).rev() {
            let s: f64 = (k + 1..n).map(|c| a[k][c] * x[c]).sum();
            x[k] = (b[k] - s) / a[k][k];
        }
        x
    }

    #[test]
    fn banded_matches_dense_on_random_matrices() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for n in [1, 2, 3, 5, 12, 40] {
            let mut a = vec![vec![0.0; n]; n];
            for r in 0..n {
                for c in r.saturating_sub(2)..=(r + 2).min(n - 1) {
                    a[r][c] = rng.gen_range(-1.0..1.0);
                }
            }
            let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let lu = BandedLu::factor(n, |r, c| a[r][c]).unwrap();
            let mut x = b.clone();
            lu.solve_in_place(&mut x);
            let want = dense_solve(a.clone(), b);
            for (p, q) in x.iter().zip(&want) {
                assert!((p - q).abs() < 1e-9 * q.abs().max(1.0), "n = {n}");
            }
        }
    }

    #[test]
    fn singular_matrix_is_reported() {
        let err = BandedLu::factor(4, |r, c| if r == 2 || c == 2 { 0.0 } else { 1.0 }).unwrap_err();
        assert!(matches!(err, Error::SingularSystem(_)));
    }

    #[test]
    fn uncoupled_system_is_two_tridiagonal_solves() {
        let lap = DiscreteLaplacian::new(9, 1.0);
        let rhs1: Vec<f64> = (0..9).map(|k| (k as f64).sin()).collect();
        let rhs2: Vec<f64> = (0..9).map(|k| 1.0 / (1.0 + k as f64)).collect();
        let (g1, g2) = solve_block_system(0.7, 1.3, 0.0, 0.01, &lap, &rhs1, &rhs2, 1.0).unwrap();
        for (g, d, rhs) in [(&g1, 0.7, &rhs1), (&g2, 1.3, &rhs2)] {
            let mut back = vec![0.0; 9];
            lap.apply_shifted_into(0.0, g, &mut back);
            for k in 0..9 {
                let lhs = g[k] / 0.01 + d * back[k];
                assert!((lhs - rhs[k]).abs() < 1e-12 * rhs[k].abs().max(1.0));
            }
        }
    }

    #[test]
    fn roundtrip_multiply_then_solve() {
        let lap = DiscreteLaplacian::new(31, 1.0);
        for &(a, lead, tau) in &[(2.0, 1.0, 0.01), (-1.0, 1.5, 0.05), (-1.0, 1.0, 1.0)] {
            let sys = BlockSystem::new(1.7, 0.4, a, tau, lap, lead).unwrap();
            let x: Vec<f64> = (0..62).map(|k| ((k * 7 % 11) as f64 - 5.0) / 3.0).collect();
            let b = sys.multiply(&x);
            let (r1, r2): (Vec<f64>, Vec<f64>) = b.chunks_exact(2).map(|p| (p[0], p[1])).unzip();
            let (g1, g2) = sys.solve(&r1, &r2);
            for k in 0..31 {
                assert!((g1[k] - x[2 * k]).abs() < 1e-12 * 5.0);
                assert!((g2[k] - x[2 * k + 1]).abs() < 1e-12 * 5.0);
            }
        }
    }

    #[test]
    fn eigenmode_matches_scalar_solve() {
        let lap = DiscreteLaplacian::new(15, 1.0);
        let (d1, d2, a, tau) = (2.1, 0.8, -1.0, 0.02);
        for k in [1, 4, 15] {
            let v = lap.eigenvector(k);
            let lam = lap.eigenvalue(k);
            let (c1, c2) = (1.5, -0.5);
            let r1: Vec<f64> = v.iter().map(|x| c1 * x).collect();
            let r2: Vec<f64> = v.iter().map(|x| c2 * x).collect();
            let (g1, g2) = solve_block_system(d1, d2, a, tau, &lap, &r1, &r2, 1.0).unwrap();
            let (a11, a12) = (1.0 / tau + d1 * (a + lam), -a * d2);
            let (a21, a22) = (-a * d1, 1.0 / tau + d2 * (a + lam));
            let det = a11 * a22 - a12 * a21;
            let y1 = (a22 * c1 - a12 * c2) / det;
            let y2 = (a11 * c2 - a21 * c1) / det;
            for j in 0..15 {
                assert!((g1[j] - y1 * v[j]).abs() < 1e-12);
                assert!((g2[j] - y2 * v[j]).abs() < 1e-12);
            }
        }
    }
}
