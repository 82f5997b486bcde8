//! The physical surface `eta = eps^2 zeta(eps x, eps^2 y)` from a reduced
//! solution, and the trivial flow beneath it.

use kpwave::dispersion::PhysicalParams;
use kpwave::lumps::{lump_grid, mapped_lump, normalization_map};
use kpwave::reconstruct::{covering_grid, reconstruct_eta, trivial_flow};
use kpwave::solver::{solve, SolverConfig};

fn main() -> kpwave::Result<()> {
    let p = PhysicalParams::new(0.5, 1.0, 0.2, 0.5)?;
    let g = lump_grid(128, 30.0, &normalization_map(&p)?)?;
    let zeta = solve(&mapped_lump(&g, 1, &p)?, &p, &SolverConfig::default(), None)?.zeta;
    let phys = covering_grid(&g, p.eps, 128, 128)?;
    let r = reconstruct_eta(&zeta, p.eps, &phys)?;
    println!("physical cell [{:.1}, {:.1}) x [{:.1}, {:.1})", -phys.lx(), phys.lx(), -phys.ly(), phys.ly());
    println!("max |eta| / eps^2 = {:.6}, max |zeta| = {:.6}", r.amplitude_ratio, zeta.max_abs());
    println!("eta(0, 0) = {:.6e}, eps^2 zeta(0, 0) = {:.6e}", r.eta.at(64, 64), p.eps * p.eps * zeta.at(64, 64));
    if let Some(b) = r.eta2_bound {
        println!("size of the omitted correction: {b:.3e}");
    }
    let c = p.c_vec();
    for z in [0.0, -0.5, -1.0] {
        let u = trivial_flow(p.alpha, c, z);
        println!("u*({z}) = ({:.6}, {:.6}, {})", u[0], u[1], u[2]);
    }
    Ok(())
}
