use std::io::Write;

use super::FastKernel;
use crate::cq::{Scheme, WeightTable};
use crate::error::{invalid, Result};
use crate::output::sci;

/// Absolute reconstruction errors ε_i = |compressed d_i - classical d_i|,
/// i = 0..=n_max. Head entries are zero by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelErrorReport {
    pub scheme: Scheme,
    pub alpha: f64,
    pub tau: f64,
    /// (N_p, 0) for BE, (N_{p,1}, N_{p,2}) for SBD.
    pub n_points: (usize, usize),
    pub n_head: usize,
    pub n_max: usize,
    pub errors: Vec<f64>,
}

impl KernelErrorReport {
    /// max ε_i over from ≤ i ≤ n_max, with its index.
    pub fn max_from(&self, from: usize) -> (usize, f64) {
        self.errors
            .iter()
            .enumerate()
            .skip(from)
            .fold((from, 0.0), |best, (i, &e)| if e > best.1 { (i, e) } else { best })
    }

    /// max ε_i over the compressed range.
    pub fn max_error(&self) -> f64 {
        self.max_from(self.n_head).1
    }

    /// CSV with columns `i,eps_abs`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["i", "eps_abs"])?;
        for (i, e) in self.errors.iter().enumerate() {
            w.write_record([i.to_string(), sci(*e)])?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn kernel_error_report(kernel: &FastKernel, n_max: usize) -> Result<KernelErrorReport> {
    let n_head = kernel.head().len();
    if n_max < n_head {
        return Err(invalid(format!(
            "n_max = {n_max} must reach past the head of length {n_head}"
        )));
    }
    let exact = WeightTable::new(kernel.scheme(), kernel.alpha(), kernel.tau(), n_max)?;
    let errors = (0..=n_max)
        .map(|i| {
            if i < n_head {
                0.0
            } else {
                (kernel.weight(i) - exact[i]).abs()
            }
        })
        .collect();
    let n_points = match kernel {
        FastKernel::Be(k) => (k.n_points(), 0),
        FastKernel::Sbd(k) => k.n_points(),
    };
    Ok(KernelErrorReport {
        scheme: kernel.scheme(),
        alpha: kernel.alpha(),
        tau: kernel.tau(),
        n_points,
        n_head,
        n_max,
        errors,
    })
}
