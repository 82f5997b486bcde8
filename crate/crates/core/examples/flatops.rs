//! Flat-state operators: `H(0)`, `L`, `M_0`, `M_1`, `T_1`, `T_2`, `J_2` and the
//! bilinear form `m`, checked against the identities that tie them together.

use std::f64::consts::PI;

use kpwave::dispersion::PhysicalParams;
use kpwave::flatops::*;
use kpwave::{make_grid, RealField2D};

fn main() -> kpwave::Result<()> {
    let g = make_grid(64, 64, PI, PI)?;
    let eta = RealField2D::from_fn(&g, |x, y| x.cos() + 0.4 * (x + 2.0 * y).sin() - 0.3 * (2.0 * x - y).cos());
    let p = PhysicalParams::new(0.7, 1.0, 0.1, 0.5)?;

    let h = h0_apply(&eta, p.alpha);
    let back = h0_inverse_apply(&h, p.alpha);
    println!("H(0)^-1 H(0) eta - eta: {:.2e}", back.sub(&eta).max_abs());

    let l = l_apply(&eta, p.alpha);
    println!("|i L eta|_max = ({:.4}, {:.4})", l.u1.max_abs(), l.u2.max_abs());

    for (name, d) in identity_defects(&eta, &p)? {
        println!("{name:<34} defect {d:.2e}");
    }

    let j = j2_apply(&eta, &p);
    println!("max |J_2(eta)| = {:.6}", j.max_abs());
    println!("m symbol at p = (0.2, 0.01), q = (0.1, -0.02): {:.6}", m_symbol([0.2, 0.01], [0.1, -0.02], &p));
    Ok(())
}
