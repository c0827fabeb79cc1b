use std::f64::consts::PI;

/// A = -Δ_h on the interior nodes: the stencil (-1, 2, -1)/h² with
/// homogeneous Dirichlet data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscreteLaplacian {
    pub grid_m: usize,
    pub h: f64,
}

impl DiscreteLaplacian {
    pub fn new(grid_m: usize, length: f64) -> Self {
        DiscreteLaplacian {
            grid_m,
            h: length / (grid_m + 1) as f64,
        }
    }

    pub fn length(&self) -> f64 {
        self.h * (self.grid_m + 1) as f64
    }

    /// out ← (shift + A)·u
    pub fn apply_shifted_into(&self, shift: f64, u: &[f64], out: &mut [f64]) {
        let m = self.grid_m;
        let c = 1.0 / (self.h * self.h);
        for k in 0..m {
            let left = if k > 0 { u[k - 1] } else { 0.0 };
            let right = if k + 1 < m { u[k + 1] } else { 0.0 };
            out[k] = shift * u[k] + c * (2.0 * u[k] - left - right);
        }
    }

    pub fn apply(&self, u: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; u.len()];
        self.apply_shifted_into(0.0, u, &mut out);
        out
    }

    /// λ_k = (4/h²) sin²(kπh/(2L)), k = 1..=M.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        let s = (k as f64 * PI * self.h / (2.0 * self.length())).sin();
        4.0 / (self.h * self.h) * s * s
    }

    /// v_k(x_j) = sin(kπ x_j / L), unnormalized.
    pub fn eigenvector(&self, k: usize) -> Vec<f64> {
        let l = self.length();
        (1..=self.grid_m)
            .map(|j| (k as f64 * PI * j as f64 * self.h / l).sin())
            .collect()
    }
}
