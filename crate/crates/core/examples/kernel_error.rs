//! How well the compressed kernels reproduce the exact weights, and what
//! the run-length-aware default picks.
use fraq::kernel::KernelConfig;
use fraq::{build_sbd_kernel, kernel_error_report, FastKernel, Scheme};

fn main() -> fraq::Result<()> {
    let tau = 1e-3;
    for (alpha, split, head) in [(0.3, (2, 60), 15), (0.8, (8, 74), 17)] {
        let k: FastKernel = build_sbd_kernel(alpha, tau, split.0, split.1, head)?.into();
        let r = kernel_error_report(&k, 1000)?;
        let (i, e) = r.max_from(head);
        println!("SBD alpha {alpha}, nodes {split:?}, head {head}: max eps {e:.3e} at i = {i}");
    }

    println!();
    let cfg = KernelConfig::default();
    for n in [100, 1_000, 10_000] {
        let tau = 1.0 / n as f64;
        for scheme in [Scheme::Be, Scheme::Sbd] {
            let k = cfg.build(scheme, 0.5, tau, n)?;
            let r = kernel_error_report(&k, n)?;
            println!(
                "{scheme} N = {n:>5}: {:>3} nodes, head {:>2}, max eps·tau^alpha {:.2e}",
                k.n_nodes(),
                k.head().len(),
                r.max_error() * tau.powf(0.5)
            );
        }
    }
    Ok(())
}
