//! Warm-started `eps` continuation from the mapped lump.

use crate::dispersion::PhysicalParams;
use crate::error::{invalid, Result};
use crate::fit::{fit_power_law, PowerFit};
use crate::grid::{Grid, RealField2D};
use crate::lumps::mapped_lump;

use super::{check_band_feasible, distance, solve, Distance, SolveResult, SolverConfig};

/// Outcome of a continuation run.
#[derive(Clone, Debug)]
pub struct ContinuationResult {
    pub eps_values: Vec<f64>,
    /// One entry per completed solve, in the order of `eps_values`.
    pub results: Vec<SolveResult>,
    /// Distances of each solution to the `eps = 0` discrete solution.
    pub distances: Vec<Distance>,
    /// Discrete `eps = 0` solution refined from the mapped lump.
    pub reference: SolveResult,
    /// Fit of the `Y_1` distance against `eps`.
    pub fit_y1: Option<PowerFit>,
    /// Fit of the `Y_{1+theta}` distance against `eps`.
    pub fit_y1_theta: Option<PowerFit>,
    /// A member solve failed or did not converge; later values were skipped.
    pub partial: bool,
    pub failure: Option<String>,
}

impl ContinuationResult {
    pub fn all_converged(&self) -> bool {
        !self.partial && self.results.iter().all(|r| r.converged)
    }

    /// `Y_1` distances strictly decrease along the list.
    pub fn monotone(&self) -> bool {
        self.distances.windows(2).all(|w| w[1].y1 < w[0].y1)
    }
}

/// Solve for each `eps` in the strictly decreasing `eps_list`, starting from
/// the mapped lump `zeta_k` and warm-starting each solve from the previous one.
///
/// The reference for the distances is the `eps = 0` problem solved on the same
/// grid, so that grid truncation does not enter the comparison.
pub fn continuation_in_eps(
    k: u8,
    eps_list: &[f64],
    base: &PhysicalParams,
    cfg: &SolverConfig,
    grid: &Grid,
) -> Result<ContinuationResult> {
    if eps_list.is_empty() {
        return invalid("empty eps list");
    }
    if eps_list.iter().any(|e| !(*e > 0.0)) || eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return invalid("eps list must be positive and strictly decreasing");
    }
    let params: Vec<PhysicalParams> = eps_list.iter().map(|&e| base.with_eps(e)).collect::<Result<_>>()?;
    for p in &params {
        check_band_feasible(grid, p)?;
    }
    let lump = mapped_lump(grid, k, base)?;
    let reference = solve(&lump, &base.with_eps(0.0)?, cfg, None)?;

    let mut results = Vec::new();
    let mut distances = Vec::new();
    let mut partial = false;
    let mut failure = None;
    let mut start: RealField2D = lump;
    for p in &params {
        match solve(&start, p, cfg, Some(&reference.zeta)) {
            Ok(r) => {
                let d = distance(&r.zeta, &reference.zeta, cfg.theta)?;
                distances.push(d);
                let ok = r.converged;
                start = r.zeta.clone();
                results.push(r);
                if !ok {
                    partial = true;
                    failure = Some(format!("no convergence at eps = {}", p.eps));
                    break;
                }
            }
            Err(e) => {
                partial = true;
                failure = Some(format!("eps = {}: {e}", p.eps));
                break;
            }
        }
    }
    let done = &eps_list[..distances.len()];
    let y1: Vec<f64> = distances.iter().map(|d| d.y1).collect();
    let yt: Vec<f64> = distances.iter().map(|d| d.y1_theta).collect();
    Ok(ContinuationResult {
        eps_values: eps_list.to_vec(),
        fit_y1: fit_power_law(done, &y1),
        fit_y1_theta: fit_power_law(done, &yt),
        results,
        distances,
        reference,
        partial,
        failure,
    })
}
