//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use fraq::{initial_field, ProblemSpec, Scheme, SchemeKind, StateField};
use twofloat::TwoFloat;

/// Coefficients of p(ζ)^α for a polynomial p with p(0) ≠ 0 (Miller's
/// recurrence, double-double).
pub fn power_series(p: &[f64], alpha: f64, n: usize) -> Vec<f64> {
    let a = TwoFloat::from(alpha);
    let p0 = TwoFloat::from(p[0]);
    let mut h = vec![p0.powf(a)];
    for k in 1..=n {
        let mut acc = TwoFloat::from(0.0);
        for j in 1..=k.min(p.len() - 1) {
            let c = a * j as f64 - (k - j) as f64;
            acc += c * p[j] * h[k - j];
        }
        h.push(acc / (p0 * k as f64));
    }
    h.into_iter().map(|v| v.hi() + v.lo()).collect()
}

/// Generating polynomial τ·δ(ζ) of a scheme.
pub fn generating_polynomial(scheme: Scheme) -> &'static [f64] {
    match scheme {
        Scheme::Be => &[1.0, -1.0],
        Scheme::Sbd => &[1.5, -2.0, 0.5],
    }
}

/// CQ weights d_0..=d_n of δ(ζ)^α from the power series.
pub fn oracle_weights(scheme: Scheme, alpha: f64, tau: f64, n: usize) -> Vec<f64> {
    let s = tau.powf(-alpha);
    power_series(generating_polynomial(scheme), alpha, n)
        .into_iter()
        .map(|c| c * s)
        .collect()
}

/// Relative distance ‖x - y‖/‖y‖ over both components.
pub fn rel_diff(x: &StateField, y: &StateField) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for (a, b) in x.g1.iter().chain(&x.g2).zip(y.g1.iter().chain(&y.g2)) {
        num += (a - b) * (a - b);
        den += b * b;
    }
    (num / den).sqrt()
}

/// Solves the scheme mode by mode in the sine basis of the grid Laplacian,
/// returning every time level. The scalar recursion for mode k reads
///
///   lead·g₁ⁿ/τ - explicit + (a+λ_k)·(Σ d¹_i g₁^{n-i} + c¹ₙ g₁⁰) - a·(Σ d²_i g₂^{n-i} + c²ₙ g₂⁰) = 0
///
/// with the sums over i = 0..n-1, and its mirror for g₂.
pub fn mode_space_trajectory(spec: &ProblemSpec, kind: SchemeKind) -> Vec<StateField> {
    let m = spec.grid_m;
    let tau = spec.tau();
    let n = spec.n_steps;
    let h = spec.length / (m + 1) as f64;
    let family = kind.family();
    let w1 = oracle_weights(family, 1.0 - spec.alpha1, tau, n);
    let w2 = oracle_weights(family, 1.0 - spec.alpha2, tau, n);
    let a = spec.coupling_a;

    let sines: Vec<Vec<f64>> = (1..=m)
        .map(|k| (1..=m).map(|j| (k as f64 * PI * j as f64 / (m + 1) as f64).sin()).collect())
        .collect();
    let project = |v: &[f64]| -> Vec<f64> {
        sines
            .iter()
            .map(|s| 2.0 / (m + 1) as f64 * s.iter().zip(v).map(|(x, y)| x * y).sum::<f64>())
            .collect()
    };
    let g0 = initial_field(spec);
    let c0 = (project(&g0.g1), project(&g0.g2));

    // coefficient histories per mode: hist[k][level] = (g1, g2)
    let mut hist: Vec<Vec<(f64, f64)>> = (0..m).map(|k| vec![(c0.0[k], c0.1[k])]).collect();
    for k in 0..m {
        let lam = 4.0 / (h * h) * ((k + 1) as f64 * PI / (2 * (m + 1)) as f64).sin().powi(2);
        for step in 1..=n {
            let past = &hist[k];
            let (x0, y0) = past[0];
            // memory from levels 1..step-1
            let mut s1 = 0.0;
            let mut s2 = 0.0;
            for i in 1..step {
                s1 += w1[i] * past[step - i].0;
                s2 += w2[i] * past[step - i].1;
            }
            let (lead, e1, e2, d1, d2) = match (family, step) {
                (Scheme::Be, _) => (1.0, past[step - 1].0, past[step - 1].1, w1[0], w2[0]),
                (Scheme::Sbd, 1) => {
                    s1 += w1[0] / 3.0 * x0;
                    s2 += w2[0] / 3.0 * y0;
                    (1.0, x0, y0, 2.0 / 3.0 * w1[0], 2.0 / 3.0 * w2[0])
                }
                (Scheme::Sbd, _) => {
                    s1 += 0.5 * w1[step - 1] * x0;
                    s2 += 0.5 * w2[step - 1] * y0;
                    let (p1, q1) = past[step - 1];
                    let (p2, q2) = past[step - 2];
                    (1.5, 2.0 * p1 - 0.5 * p2, 2.0 * q1 - 0.5 * q2, w1[0], w2[0])
                }
            };
            // [lead/τ + (a+λ)d1, -a d2; -a d1, lead/τ + (a+λ)d2] (g1, g2) = rhs
            let r1 = e1 / tau - (a + lam) * s1 + a * s2;
            let r2 = e2 / tau - (a + lam) * s2 + a * s1;
            let (m11, m12) = (lead / tau + (a + lam) * d1, -a * d2);
            let (m21, m22) = (-a * d1, lead / tau + (a + lam) * d2);
            let det = m11 * m22 - m12 * m21;
            let g1 = (r1 * m22 - m12 * r2) / det;
            let g2 = (m11 * r2 - m21 * r1) / det;
            hist[k].push((g1, g2));
        }
    }

    (0..=n)
        .map(|level| {
            let mut f = StateField::zeros(m);
            f.n = level;
            for k in 0..m {
                let (c1, c2) = hist[k][level];
                for j in 0..m {
                    f.g1[j] += c1 * sines[k][j];
                    f.g2[j] += c2 * sines[k][j];
                }
            }
            f
        })
        .collect()
}

/// Least-squares fit y ≈ c·x^p through the origin; returns (c, R²).
pub fn fit_power(xs: &[f64], ys: &[f64], p: i32) -> (f64, f64) {
    let basis: Vec<f64> = xs.iter().map(|x| x.powi(p)).collect();
    let c = basis.iter().zip(ys).map(|(b, y)| b * y).sum::<f64>() / basis.iter().map(|b| b * b).sum::<f64>();
    let mean = ys.iter().sum::<f64>() / ys.len() as f64;
    let ss_res: f64 = basis.iter().zip(ys).map(|(b, y)| (y - c * b).powi(2)).sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - mean).powi(2)).sum();
    (c, 1.0 - ss_res / ss_tot)
}

/// Every time level of a library run.
pub fn trajectory(spec: &ProblemSpec, kind: SchemeKind, kernels: &fraq::KernelConfig) -> Vec<StateField> {
    let mut levels = Vec::with_capacity(spec.n_steps + 1);
    fraq::solver::run_with(spec, kind, kernels, |f| levels.push(f.clone())).unwrap();
    levels
}
