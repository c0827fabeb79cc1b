//! One run of every stepper on the two-state system, with the final field
//! written as CSV.
use fraq::solver::write_snapshot;
use fraq::{run, InitialData, KernelConfig, ProblemSpec, SchemeKind};

fn main() -> fraq::Result<()> {
    let spec = ProblemSpec {
        alpha1: 0.3,
        alpha2: 0.6,
        coupling_a: 2.0,
        grid_m: 127,
        n_steps: 400,
        initial: InitialData::Indicator,
        ..Default::default()
    };
    let kernels = KernelConfig::default();
    for kind in SchemeKind::ALL {
        let out = run(&spec, kind, &kernels)?;
        let (n1, n2) = out.field.norms(spec.h());
        println!(
            "{kind:>8}: |G1| = {n1:.10e}, |G2| = {n2:.10e}  ({:.3}s loop)",
            out.seconds_loop
        );
    }
    let out = run(&spec, SchemeKind::FastSbd, &kernels)?;
    let path = std::env::temp_dir().join("fraq_snapshot.csv");
    write_snapshot(&spec, &out.field, std::fs::File::create(&path)?)?;
    println!("snapshot at t = 1 written to {}", path.display());
    Ok(())
}
