//! Fast convolution quadrature for Riemann–Liouville fractional derivatives.
//!
//! The classical CQ weights of the backward-Euler and second-order
//! backward-difference generating functions are compressed into short sums
//! of geometric sequences with Gauss–Jacobi quadrature, so the memory term of
//! a time-fractional equation costs O(N_p) per step instead of O(n).
//! [`solver`] applies this to the two-state fractional Fokker–Planck system.

pub mod bench;
mod error;
pub mod cq;
pub mod jacobi;
pub mod kernel;
pub mod output;
pub mod solver;
pub mod special;

pub use cq::{be_weights, coupling_from_transition, sbd_weights, Scheme, WeightTable};
pub use error::{Error, Result};
pub use jacobi::{gauss_jacobi, jacobi_moment, JacobiRule};
pub use kernel::{
    build_be_kernel, build_sbd_kernel, kernel_error_report, FastKernel, FastKernelBE,
    FastKernelSBD, HistoryState, HistoryVariant, KernelConfig, KernelErrorReport, LinearSpace,
};
pub use solver::{
    initial_field, run, InitialData, ProblemSpec, RunOutput, SchemeKind, StateField, Stepper,
};
