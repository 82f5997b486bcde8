//! One solve of the reduced equation at a fixed `eps` from the mapped lump.

use kpwave::dispersion::PhysicalParams;
use kpwave::lumps::{lump_grid, mapped_lump, normalization_map};
use kpwave::problem::QuadraticProblem;
use kpwave::solver::{solve, SolverConfig};

fn main() -> kpwave::Result<()> {
    let p = PhysicalParams::new(0.0, 1.0, 0.1, 0.5)?;
    let g = lump_grid(256, 40.0, &normalization_map(&p)?)?;
    let lump = mapped_lump(&g, 1, &p)?;
    let reference = QuadraticProblem::reduced(&g, &p)?.project(&lump);
    let r = solve(&lump, &p, &SolverConfig::default(), Some(&reference))?;
    println!("eps = {}: converged {} in {} iterations, residual {:.3e}", p.eps, r.converged, r.iterations, r.residual_norm);
    println!("residual history:");
    for (i, h) in r.history.iter().enumerate() {
        println!("  {i:>2} {h:.3e}");
    }
    println!("MINRES iterations per Newton step: {:?}", r.krylov_iterations);
    if let Some(d) = r.distance_to_lump {
        println!("distance to the band-limited lump: Y1 {:.4e}, Y1+theta {:.4e}", d.y1, d.y1_theta);
    }
    Ok(())
}
