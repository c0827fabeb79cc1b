//! Discrete fractional derivative of a sampled function, by the direct CQ
//! sum and by the compressed history recursion.
use fraq::kernel::KernelConfig;
use fraq::{HistoryState, HistoryVariant, Scheme, WeightTable};

fn main() -> fraq::Result<()> {
    let (alpha, n) = (0.6, 2000);
    let tau = 1.0 / n as f64;
    let g: Vec<f64> = (0..=n).map(|k| (k as f64 * tau).powf(1.5)).collect();

    for scheme in [Scheme::Be, Scheme::Sbd] {
        let w = WeightTable::new(scheme, alpha, tau, n)?;
        let kernel = KernelConfig::default().build(scheme, alpha, tau, n)?;
        let mut hist = HistoryState::new(&kernel, HistoryVariant::Standalone);
        let mut worst = 0.0f64;
        for k in 0..=n {
            hist.push(&g[k])?;
            let fast = hist.derivative()?;
            let direct: f64 = (0..=k).map(|i| w[i] * g[k - i]).sum();
            worst = worst.max((fast - direct).abs());
        }
        // D^0.6 t^1.5 = Γ(2.5)/Γ(1.9) t^0.9
        let exact = 1.329_340_388_179_137 / 0.961_765_831_907_387;
        println!(
            "{scheme}: D^{alpha} t^1.5 at t = 1 ~ {:.6} (exact {exact:.6}), fast vs direct {worst:.1e}, {} nodes",
            hist.derivative()?,
            kernel.n_nodes()
        );
    }
    Ok(())
}
