//! Loop time of classical and fast steppers as N doubles.
use fraq::bench::{timing_sweep, ExperimentConfig};
use fraq::SchemeKind;

fn main() -> fraq::Result<()> {
    let cfg = ExperimentConfig {
        schemes: SchemeKind::ALL.to_vec(),
        grid_m: 255,
        n_list: vec![200, 400, 800, 1600],
        ..Default::default()
    };
    let rows = timing_sweep(&cfg)?;
    println!("{:>8} {:>6} {:>10} {:>10}", "scheme", "N", "loop (s)", "setup (s)");
    for r in &rows {
        println!("{:>8} {:>6} {:>10.4} {:>10.4}", r.scheme.to_string(), r.n, r.seconds_loop, r.seconds_setup);
    }
    Ok(())
}
