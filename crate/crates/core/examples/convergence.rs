//! Temporal convergence study: error against a fine reference run, with
//! observed rates.
use fraq::bench::{convergence_study, ExperimentConfig};
use fraq::{InitialData, SchemeKind};

fn main() -> fraq::Result<()> {
    let cfg = ExperimentConfig {
        schemes: vec![SchemeKind::Sbd, SchemeKind::FastSbd],
        alpha1: 0.2,
        alpha2: 0.4,
        coupling_a: -1.0,
        grid_m: 255,
        taus: vec![1.0 / 20.0, 1.0 / 40.0, 1.0 / 80.0, 1.0 / 160.0],
        ref_tau: 1.0 / 640.0,
        initial: InitialData::Indicator,
        ..Default::default()
    };
    for report in convergence_study(&cfg)? {
        println!("{}", report.to_table());
    }
    Ok(())
}
