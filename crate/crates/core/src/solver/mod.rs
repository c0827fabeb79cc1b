//! Time steppers for the two-state fractional Fokker–Planck system
//!
//!   ∂G₁/∂t + a·D^{1-α₁}G₁ - a·D^{1-α₂}G₂ = Δ D^{1-α₁}G₁,
//!   ∂G₂/∂t + a·D^{1-α₂}G₂ - a·D^{1-α₁}G₁ = Δ D^{1-α₂}G₂,
//!
//! in one space dimension with homogeneous Dirichlet data, discretized by
//! central finite differences in space and CQ in time.

mod banded;
mod laplacian;
mod problem;
mod run;
mod steppers;

pub use banded::{solve_block_system, BandedLu, BlockSystem};
pub use laplacian::DiscreteLaplacian;
pub use problem::{initial_field, l2_norm, InitialData, ProblemSpec, SchemeKind, StateField};
pub use run::{run, run_with, write_snapshot, RunOutput};
pub use steppers::Stepper;
