//! Classical convolution-quadrature weights.
//!
//! The weights d_i are the power-series coefficients of δ(ζ)^α with
//! δ(ζ) = (1-ζ)/τ (backward Euler) or ((1-ζ) + (1-ζ)²/2)/τ (second-order
//! backward difference). They are the slow baseline of the solver and the
//! oracle every compressed kernel is checked against.

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};

/// Linear multistep generating function behind a weight table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Be,
    Sbd,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Be => "be",
            Scheme::Sbd => "sbd",
        })
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "be" => Ok(Scheme::Be),
            "sbd" => Ok(Scheme::Sbd),
            other => Err(invalid(format!("unknown weight scheme `{other}` (expected be or sbd)"))),
        }
    }
}

/// Weights d_0..=d_{n_max} for one (scheme, α, τ).
#[derive(Debug, Clone, PartialEq)]
pub struct WeightTable {
    pub scheme: Scheme,
    pub alpha: f64,
    pub tau: f64,
    pub weights: Vec<f64>,
}

impl WeightTable {
    pub fn new(scheme: Scheme, alpha: f64, tau: f64, n_max: usize) -> Result<Self> {
        match scheme {
            Scheme::Be => be_weights(alpha, tau, n_max),
            Scheme::Sbd => sbd_weights(alpha, tau, n_max),
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn n_max(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn get(&self, i: usize) -> Option<f64> {
        self.weights.get(i).copied()
    }
}

impl std::ops::Index<usize> for WeightTable {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.weights[i]
    }
}

fn check(alpha: f64, tau: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(invalid(format!("order must lie in (0, 1], got {alpha}")));
    }
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(invalid(format!("time step must be positive, got {tau}")));
    }
    Ok(())
}

/// Coefficients of (1 - ζ/q)^α, i.e. c_i = c_{i-1}·(i-1-α)/(i·q).
fn binomial_series(alpha: f64, q: f64, n_max: usize) -> Vec<f64> {
    let mut c = Vec::with_capacity(n_max + 1);
    c.push(1.0);
    for i in 1..=n_max {
        let fi = i as f64;
        c.push(c[i - 1] * (fi - 1.0 - alpha) / (fi * q));
    }
    c
}

/// Backward-Euler weights: coefficients of ((1-ζ)/τ)^α.
pub fn be_weights(alpha: f64, tau: f64, n_max: usize) -> Result<WeightTable> {
    check(alpha, tau)?;
    let scale = tau.powf(-alpha);
    let weights = binomial_series(alpha, 1.0, n_max)
        .into_iter()
        .map(|c| c * scale)
        .collect();
    Ok(WeightTable {
        scheme: Scheme::Be,
        alpha,
        tau,
        weights,
    })
}

/// Second-order backward-difference weights, from
/// (1-ζ) + (1-ζ)²/2 = (3/2)(1-ζ)(1-ζ/3).
pub fn sbd_weights(alpha: f64, tau: f64, n_max: usize) -> Result<WeightTable> {
    check(alpha, tau)?;
    let a = binomial_series(alpha, 1.0, n_max);
    let mut b = binomial_series(alpha, 3.0, n_max);
    // b_j decays like 3^{-j}; terms past the underflow point add nothing.
    if let Some(cut) = b.iter().position(|v| v.abs() < f64::MIN_POSITIVE) {
        b.truncate(cut);
    }
    let scale = (1.5 / tau).powf(alpha);
    let weights = (0..=n_max)
        .map(|i| {
            let top = i.min(b.len() - 1);
            let mut acc = 0.0;
            for j in (0..=top).rev() {
                acc += b[j] * a[i - j];
            }
            acc * scale
        })
        .collect();
    Ok(WeightTable {
        scheme: Scheme::Sbd,
        alpha,
        tau,
        weights,
    })
}

/// Coupling constant a = (1-m)/(2m-1) of the two-state system for the
/// Markov transition parameter m. m = 1 (no switching) gives a = 0.
pub fn coupling_from_transition(m: f64) -> Result<f64> {
    if !(m > 0.0 && m <= 1.0) {
        return Err(invalid(format!("transition parameter must lie in (0, 1], got {m}")));
    }
    if m == 0.5 {
        return Err(invalid("transition parameter 1/2 makes the coupling singular"));
    }
    Ok((1.0 - m) / (2.0 * m - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use twofloat::TwoFloat;

    /// Coefficients of g(ζ)^α for a polynomial g with g(0) ≠ 0, by the
    /// J.C.P. Miller recurrence in double-double arithmetic. Independent of
    /// the binomial route above, and accurate through the cancellation near
    /// sign changes of the SBD weights.
    fn power_series(g: &[f64], alpha: f64, n: usize) -> Vec<f64> {
        let a = TwoFloat::from(alpha);
        let g0 = TwoFloat::from(g[0]);
        let mut h = vec![g0.powf(a)];
        for k in 1..=n {
            let mut acc = TwoFloat::from(0.0);
            for j in 1..=k.min(g.len() - 1) {
                let c = a * j as f64 - (k - j) as f64;
                acc += c * g[j] * h[k - j];
            }
            h.push(acc / (g0 * k as f64));
        }
        h.into_iter().map(|v| v.hi() + v.lo()).collect()
    }

    fn convolve(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| (0..=i).map(|j| a[j] * b[i - j]).sum())
            .collect()
    }

    #[test]
    fn be_examples() {
        assert_eq!(be_weights(1.0, 0.5, 3).unwrap().weights, vec![2.0, -2.0, 0.0, 0.0]);
        assert_eq!(
            be_weights(0.5, 1.0, 3).unwrap().weights,
            vec![1.0, -0.5, -0.125, -0.0625]
        );
        let w = be_weights(0.3, 0.01, 0).unwrap();
        assert!((w[0] - 10f64.powf(0.6)).abs() < 1e-14 * w[0]);
    }

    #[test]
    fn sbd_examples() {
        let w = sbd_weights(1.0, 1.0, 4).unwrap().weights;
        let want = [1.5, -2.0, 0.5, 0.0, 0.0];
        for (g, e) in w.iter().zip(want) {
            assert!((g - e).abs() < 1e-15, "{w:?}");
        }
        let w = sbd_weights(0.5, 1.0, 0).unwrap();
        assert!((w[0] - 1.5f64.sqrt()).abs() < 1e-15);

        let got = sbd_weights(0.4, 1.0, 6).unwrap().weights;
        let want = power_series(&[1.5, -2.0, 0.5], 0.4, 6);
        for (g, e) in got.iter().zip(&want) {
            assert!((g - e).abs() < 1e-14 * e.abs(), "{g} vs {e}");
        }
    }

    #[test]
    fn leading_weights() {
        for &(a, t) in &[(0.3, 0.01), (0.77, 3.0), (1.0, 0.2)] {
            let be = be_weights(a, t, 2).unwrap();
            assert!((be[0] / t.powf(-a) - 1.0).abs() < 1e-14);
            let sbd = sbd_weights(a, t, 2).unwrap();
            assert!((sbd[0] / (1.5f64.powf(a) * t.powf(-a)) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(be_weights(0.0, 1.0, 3).is_err());
        assert!(be_weights(1.2, 1.0, 3).is_err());
        assert!(sbd_weights(0.5, 0.0, 3).is_err());
        assert!(sbd_weights(0.5, f64::NAN, 3).is_err());
    }

    #[test]
    fn coupling_examples() {
        assert_eq!(coupling_from_transition(1.0).unwrap(), 0.0);
        assert_eq!(coupling_from_transition(0.75).unwrap(), 0.5);
        assert!((coupling_from_transition(0.4).unwrap() + 3.0).abs() < 1e-15);
        assert!(coupling_from_transition(0.5).is_err());
        assert!(coupling_from_transition(0.0).is_err());
    }

    #[test]
    fn be_partial_sums_decay() {
        for &a in &[0.2, 0.5, 0.8] {
            let w = be_weights(a, 1.0, 10_000).unwrap();
            let mut s = w[0];
            let mut prev = f64::INFINITY;
            for i in 1..=10_000 {
                s += w[i];
                assert!(s.abs() < prev, "alpha {a}, N {i}");
                prev = s.abs();
            }
            assert!(prev < 0.2);
        }
    }

    #[test]
    fn scheme_parses() {
        assert_eq!("BE".parse::<Scheme>().unwrap(), Scheme::Be);
        assert_eq!("sbd".parse::<Scheme>().unwrap(), Scheme::Sbd);
        assert!("bdf3".parse::<Scheme>().is_err());
    }

    proptest! {
        #[test]
        fn product_of_complementary_orders(a in 0.01f64..0.99, tau in 1e-3f64..2.0) {
            let n = 50;
            for scheme in [Scheme::Be, Scheme::Sbd] {
                let p = WeightTable::new(scheme, a, tau, n).unwrap();
                let q = WeightTable::new(scheme, 1.0 - a, tau, n).unwrap();
                let one = WeightTable::new(scheme, 1.0, tau, n).unwrap();
                let c = convolve(&p.weights, &q.weights, n);
                for i in 0..n {
                    prop_assert!((c[i] - one[i]).abs() < 1e-12 / tau, "{scheme} i={i}");
                }
            }
        }

        #[test]
        fn scaling_law(a in 0.01f64..1.0, tau in 1e-4f64..10.0) {
            for scheme in [Scheme::Be, Scheme::Sbd] {
                let unit = WeightTable::new(scheme, a, 1.0, 300).unwrap();
                let t = WeightTable::new(scheme, a, tau, 300).unwrap();
                let s = tau.powf(-a);
                for i in 0..=300 {
                    let want = s * unit[i];
                    if want != 0.0 {
                        prop_assert!(((t[i] - want) / want).abs() < 1e-13);
                    }
                }
            }
        }

        #[test]
        fn be_sign_pattern(a in 0.001f64..0.999, tau in 1e-3f64..5.0) {
            let w = be_weights(a, tau, 400).unwrap();
            prop_assert!(w[0] > 0.0);
            prop_assert!(w.weights[1..].iter().all(|&d| d < 0.0));
        }

        #[test]
        fn matches_power_series(a in 0.01f64..1.0) {
            let be = be_weights(a, 1.0, 200).unwrap();
            let sbd = sbd_weights(a, 1.0, 200).unwrap();
            let pb = power_series(&[1.0, -1.0], a, 200);
            let ps = power_series(&[1.5, -2.0, 0.5], a, 200);
            for i in 0..=200 {
                if pb[i] != 0.0 {
                    prop_assert!(((be[i] - pb[i]) / pb[i]).abs() < 1e-12);
                }
                if ps[i] != 0.0 {
                    prop_assert!(((sbd[i] - ps[i]) / ps[i]).abs() < 1e-12);
                }
            }
        }
    }
}
