use std::io::Write;
use std::time::Instant;

use super::problem::{ProblemSpec, SchemeKind, StateField};
use super::steppers::Stepper;
use crate::error::Result;
use crate::kernel::KernelConfig;
use crate::output::sci;

/// Final field of a run with its timings.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub field: StateField,
    /// Kernel or weight construction plus factorization.
    pub seconds_setup: f64,
    /// The time loop alone.
    pub seconds_loop: f64,
}

/// Runs a scheme to the final time.
pub fn run(spec: &ProblemSpec, kind: SchemeKind, kernels: &KernelConfig) -> Result<RunOutput> {
    run_with(spec, kind, kernels, |_| {})
}

/// Like [`run`], calling `observe` with the initial field and after every step.
pub fn run_with<F: FnMut(&StateField)>(
    spec: &ProblemSpec,
    kind: SchemeKind,
    kernels: &KernelConfig,
    mut observe: F,
) -> Result<RunOutput> {
    let t0 = Instant::now();
    let mut stepper = Stepper::new(spec, kind, kernels)?;
    let seconds_setup = t0.elapsed().as_secs_f64();
    observe(stepper.current());
    let t1 = Instant::now();
    while !stepper.is_done() {
        observe(stepper.step()?);
    }
    let seconds_loop = t1.elapsed().as_secs_f64();
    Ok(RunOutput {
        field: stepper.current().clone(),
        seconds_setup,
        seconds_loop,
    })
}

/// Writes `x,g1,g2` rows for the interior nodes.
pub fn write_snapshot<W: Write>(spec: &ProblemSpec, field: &StateField, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", "g1", "g2"])?;
    for ((x, g1), g2) in spec.grid().iter().zip(&field.g1).zip(&field.g2) {
        w.write_record([sci(*x), sci(*g1), sci(*g2)])?;
    }
    w.flush()?;
    Ok(())
}
