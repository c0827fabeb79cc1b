//! CQ weights of both generating functions, and the Gauss–Jacobi rule
//! behind their compression.
use fraq::{be_weights, gauss_jacobi, sbd_weights};

fn main() -> fraq::Result<()> {
    let (alpha, tau) = (0.4, 0.01);
    let be = be_weights(alpha, tau, 8)?;
    let sbd = sbd_weights(alpha, tau, 8)?;
    println!("alpha = {alpha}, tau = {tau}");
    println!("{:>3} {:>14} {:>14}", "i", "BE", "SBD");
    for i in 0..=8 {
        println!("{i:>3} {:>14.6e} {:>14.6e}", be[i], sbd[i]);
    }

    // the BE kernel integrates against (1-s)^α (1+s)^(1-α)
    let rule = gauss_jacobi(alpha, 1.0 - alpha, 6)?;
    println!("\n6-point rule, exponents ({alpha}, {}):", 1.0 - alpha);
    for (s, w) in rule.iter() {
        println!("  node {s:+.12}  weight {w:.12}");
    }
    Ok(())
}
