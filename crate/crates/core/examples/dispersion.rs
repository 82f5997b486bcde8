//! Derived constants, the symbol `g~` near the origin and the scan showing
//! `g` has no nonzero roots above `beta*`.
//!
//! `cargo run --example dispersion -- 0.8`

use kpwave::dispersion::*;

fn main() -> kpwave::Result<()> {
    let alpha: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0.8);
    let d = derived_constants(alpha)?;
    println!("alpha = {alpha}");
    println!("  c0 = {:.12}  beta0 = {:.12}  beta* = {:.12}  d_alpha = {:.12}", d.c0, d.beta0, d.beta_star, d.d_alpha);

    let p = PhysicalParams::new(alpha, d.beta_star + 0.1, 0.0, 0.5)?;
    println!("  unit identity = {:.15}", unit_identity(&p));
    for (k1, m) in [(0.1, 0.0), (0.0, 0.1), (0.1, 0.1)] {
        let model = (p.beta - p.beta0) * k1 * k1 + p.sec2_half() * m * m;
        println!("  g~({k1}, {m}) = {:.6e}  quadratic model {:.6e}", g_tilde(k1, m, &p), model);
    }

    let scan = verify_no_nonzero_roots(&p, 1e-6, 100.0, 10_000)?;
    println!("  scan at beta = beta* + 0.1: max (c - kappa_min) = {:.3e} at mu = {:.3e}, passed = {}", scan.max_gap, scan.argmax_mu, scan.passed());

    let below = PhysicalParams::new(alpha, d.beta0 - 0.05, 0.0, 0.5)?;
    let scan = verify_no_nonzero_roots(&below, 1e-6, 100.0, 10_000)?;
    println!("  scan at beta = beta0 - 0.05: passed = {} (roots expected)", scan.passed());
    Ok(())
}
