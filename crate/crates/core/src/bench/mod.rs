//! Experiment harness behind the `fraq` binary: configuration, convergence
//! studies, timing sweeps and their CSV reports.

pub mod config;
mod cli;
mod report;
mod study;

pub use cli::{cli_main, load_config};
pub use config::{parse_config_text, parse_real, ExperimentConfig};
pub use report::{
    compute_rates, read_bench_csv, tau_label, write_bench_csv, BenchRow, ConvergenceReport,
    ConvergenceRow,
};
pub use study::{convergence_study, parallel_map, thread_limit, timing_sweep};
