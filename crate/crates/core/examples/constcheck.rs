//! Constant-limit reports: deviations of the band-restricted multipliers from
//! their limit constants, fitted against the band parameter.

use kpwave::constcheck::*;
use kpwave::dispersion::{derived_constants, PhysicalParams};

fn main() -> kpwave::Result<()> {
    let alpha = 0.8;
    let d = derived_constants(alpha)?;
    let p = PhysicalParams::new(alpha, d.beta_star + 0.1, 0.0, 0.5)?;
    let opts = ConstCheckOptions { n: 128, ..ConstCheckOptions::default() };
    let r = multiplier_const_checks(&p, &DEFAULT_BAND, &opts)?;
    println!("alpha = {alpha}, delta = {}, band {:?}", r.delta, r.band);
    println!("unit constant = {:.15}", r.unit_constant);
    for it in &r.items {
        let fit = it.fit.map(|f| format!("{:.3}", f.exponent)).unwrap_or_else(|| "-".into());
        let b0 = it.b_at_zero.map(|b| format!("{b:.1e}")).unwrap_or_else(|| "-".into());
        println!(
            "{:<5} constant {:>10.6}  order {fit} (expected {})  |B(0)| {b0}  {}",
            it.item.label(),
            it.constant,
            it.item.expected_order(),
            if it.passed { "PASS" } else { "FAIL" }
        );
    }
    println!("all passed: {}", r.passed());
    Ok(())
}
