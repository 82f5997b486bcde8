//! Continuation in `eps` from the mapped lump, with the distances to the
//! `eps = 0` solution and their fitted rate.

use kpwave::dispersion::PhysicalParams;
use kpwave::lumps::{lump_grid, normalization_map};
use kpwave::solver::{continuation_in_eps, SolverConfig};

fn main() -> kpwave::Result<()> {
    let p = PhysicalParams::new(0.0, 1.0, 0.0, 0.5)?;
    let g = lump_grid(256, 40.0, &normalization_map(&p)?)?;
    let c = continuation_in_eps(1, &[0.2, 0.1, 0.05], &p, &SolverConfig::default(), &g)?;
    println!("reference eps = 0: residual {:.3e}", c.reference.residual_norm);
    println!("{:>6} {:>5} {:>11} {:>11} {:>11}", "eps", "iters", "residual", "Y1", "Y1+theta");
    for ((e, r), d) in c.eps_values.iter().zip(&c.results).zip(&c.distances) {
        println!("{e:>6} {:>5} {:>11.3e} {:>11.4e} {:>11.4e}", r.iterations, r.residual_norm, d.y1, d.y1_theta);
    }
    if let Some(f) = c.fit_y1 {
        println!("Y1 distance ~ eps^{:.3}", f.exponent);
    }
    println!("all converged {}, monotone {}", c.all_converged(), c.monotone());
    Ok(())
}
