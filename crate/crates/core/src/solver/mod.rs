//! Solver for the truncated reduced equation
//! `eps^-2 g_eps(D) z + 2 z + d_alpha chi_eps(D) z^2 = 0`
//! by Petviashvili and Newton-MINRES iteration, with `eps` continuation.
//!
//! Only the explicit terms are kept; the remainder operators of the full
//! reduction are not modelled. At `eps = 0` the equation is the physical
//! stationary KP-I equation.

mod continuation;
mod replace;

pub use continuation::{continuation_in_eps, ContinuationResult};
pub use replace::{replace_g_with_l_check, symbol_difference, ReplaceReport};

use ndarray::Array2;
use num_complex::Complex64;

use crate::dispersion::PhysicalParams;
use crate::error::{invalid, Error, Result};
use crate::grid::{Grid, RealField2D, SpectralField2D};
use crate::krylov::minres;
use crate::norms::norm_ys_spectral;
use crate::problem::{spectral_inner, spectral_norm, symmetrize_spec, QuadraticProblem};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Petviashvili,
    NewtonKrylov,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymmetryMode {
    /// Iterates are kept invariant under `(x, y) -> (-x, -y)`.
    Even,
    Full,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub method: Method,
    pub max_iter: usize,
    /// Bound on the `L2` norm of the residual.
    pub tol_residual: f64,
    /// Relative tolerance of each inner MINRES solve.
    pub krylov_tol: f64,
    pub krylov_max_iter: usize,
    pub petviashvili_gamma: f64,
    /// Petviashvili steps run before Newton when `method` is `NewtonKrylov`.
    pub warmup_steps: usize,
    /// Exponent of the `Y_{1+theta}` distance reported alongside `Y_1`.
    pub theta: f64,
    pub symmetry: SymmetryMode,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            method: Method::NewtonKrylov,
            max_iter: 30,
            tol_residual: 1e-9,
            krylov_tol: 1e-8,
            krylov_max_iter: 400,
            petviashvili_gamma: 2.0,
            warmup_steps: 20,
            theta: 0.75,
            symmetry: SymmetryMode::Even,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol_residual > 0.0 && self.krylov_tol > 0.0) {
            return invalid("tolerances must be positive");
        }
        if !(self.petviashvili_gamma > 1.0) {
            return invalid("Petviashvili exponent must exceed 1");
        }
        if !(self.theta > 0.0 && self.theta < 1.0) {
            return invalid("theta must lie in (0, 1)");
        }
        Ok(())
    }
}

/// Discrete distances to a reference solution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Distance {
    pub y1: f64,
    pub y1_theta: f64,
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub zeta: RealField2D,
    pub residual_norm: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Residual norm after each iteration, starting with the initial guess.
    pub history: Vec<f64>,
    /// Inner MINRES iterations of each Newton step.
    pub krylov_iterations: Vec<usize>,
    pub distance_to_lump: Option<Distance>,
}

/// `(z(x, y) + z(-x, -y)) / 2` by index reflection with periodic wrap.
pub fn symmetrize(z: &RealField2D) -> RealField2D {
    let (nx, ny) = z.grid().shape();
    let v = z.values();
    let out = Array2::from_shape_fn((nx, ny), |(i, j)| 0.5 * (v[[i, j]] + v[[(nx - i) % nx, (ny - j) % ny]]));
    RealField2D::new(z.grid(), out).expect("shape")
}

/// Residual of the truncated reduced equation, after projecting `z` onto the
/// admissible band.
pub fn residual_reduced(z: &RealField2D, p: &PhysicalParams) -> Result<RealField2D> {
    Ok(QuadraticProblem::reduced(z.grid(), p)?.residual(z))
}

/// `-(eps^-2 g_eps + 2)^-1 d_alpha chi_eps(D) z^2` on the band.
pub fn fixed_point_map(z: &RealField2D, p: &PhysicalParams) -> Result<RealField2D> {
    Ok(QuadraticProblem::reduced(z.grid(), p)?.fixed_point_map(z))
}

/// Refuse grids that cannot resolve the `chi_eps` band: `delta/eps` must not
/// exceed 0.8 of the x Nyquist wavenumber.
pub fn check_band_feasible(grid: &Grid, p: &PhysicalParams) -> Result<()> {
    if p.eps == 0.0 {
        return Ok(());
    }
    let need = p.delta / p.eps;
    let have = 0.8 * grid.nyquist_x();
    if need > have {
        let nx = (grid.nx() as f64 * need / have).ceil() as usize;
        return invalid(format!(
            "band edge delta/eps = {need:.3} exceeds 0.8 x Nyquist = {have:.3}; use nx >= {}",
            nx.next_power_of_two()
        ));
    }
    Ok(())
}

/// Discrete `Y_1` and `Y_{1+theta}` distances between two fields.
pub fn distance(a: &RealField2D, b: &RealField2D, theta: f64) -> Result<Distance> {
    let d = a.sub(b).transform();
    Ok(Distance { y1: norm_ys_spectral(&d, 1.0)?, y1_theta: norm_ys_spectral(&d, 1.0 + theta)? })
}

fn restrict(prob: &QuadraticProblem, f: &SpectralField2D, sym: SymmetryMode) -> SpectralField2D {
    let f = prob.project_spec(f);
    match sym {
        SymmetryMode::Even => symmetrize_spec(&f),
        SymmetryMode::Full => f,
    }
}

/// Iteration driver shared by [`solve`] and the lump refinement.
pub fn solve_problem(
    prob: &QuadraticProblem,
    zeta0: &RealField2D,
    cfg: &SolverConfig,
) -> Result<SolveResult> {
    cfg.validate()?;
    prob.grid().check_same(zeta0.grid())?;
    let mut z = restrict(prob, &zeta0.transform(), cfg.symmetry);
    let mut r = prob.residual_spec(&z);
    let mut rn = spectral_norm(&r);
    let mut history = vec![rn];
    let mut krylov_iterations = Vec::new();
    let mut iterations = 0;
    let mut growth = 0;

    let warmup = match cfg.method {
        Method::Petviashvili => cfg.max_iter,
        Method::NewtonKrylov => cfg.warmup_steps,
    };
    for _ in 0..warmup {
        if rn <= cfg.tol_residual {
            break;
        }
        z = restrict(prob, &petviashvili_step(prob, &z, cfg.petviashvili_gamma)?, cfg.symmetry);
        r = prob.residual_spec(&z);
        let next = spectral_norm(&r);
        growth = if next > rn { growth + 1 } else { 0 };
        rn = next;
        history.push(rn);
        iterations += 1;
        check_growth(growth, &history)?;
    }

    if cfg.method == Method::NewtonKrylov {
        for _ in 0..cfg.max_iter {
            if rn <= cfg.tol_residual {
                break;
            }
            let jac = prob.jacobian_at(&z);
            let rhs = prob.scale_by(&r, |s, m| if m != 0.0 { -1.0 / s.sqrt() } else { 0.0 });
            let sol = minres(
                |v| Ok(restrict(prob, &jac.apply_normalized(v)?, cfg.symmetry)),
                &restrict(prob, &rhs, cfg.symmetry),
                cfg.krylov_tol,
                cfg.krylov_max_iter,
            )?;
            krylov_iterations.push(sol.iterations);
            let dz = prob.scale_by(&sol.x, |s, m| if m != 0.0 { 1.0 / s.sqrt() } else { 0.0 });
            let (znew, rnew, nnew) = line_search(prob, &z, &dz, rn, cfg.symmetry);
            z = znew;
            r = rnew;
            growth = if nnew > rn { growth + 1 } else { 0 };
            rn = nnew;
            history.push(rn);
            iterations += 1;
            check_growth(growth, &history)?;
        }
    }

    let zeta = z.inverse();
    let residual_norm = prob.residual(&zeta).norm_l2();
    Ok(SolveResult {
        converged: residual_norm <= cfg.tol_residual,
        zeta,
        residual_norm,
        iterations,
        history,
        krylov_iterations,
        distance_to_lump: None,
    })
}

fn check_growth(growth: usize, history: &[f64]) -> Result<()> {
    if growth >= 10 {
        return Err(Error::Numerical(format!(
            "residual grew over 10 successive iterations: {:.3e} -> {:.3e}",
            history[history.len() - 11],
            history[history.len() - 1]
        )));
    }
    if history.last().is_some_and(|r| !r.is_finite()) {
        return Err(Error::Numerical("residual became non-finite".into()));
    }
    Ok(())
}

/// Full Newton step, halved up to four times while the residual increases.
fn line_search(
    prob: &QuadraticProblem,
    z: &SpectralField2D,
    dz: &SpectralField2D,
    rn: f64,
    sym: SymmetryMode,
) -> (SpectralField2D, SpectralField2D, f64) {
    let mut t = 1.0;
    let mut best = None;
    for _ in 0..5 {
        let zt = restrict(prob, &z.add(&dz.scale(Complex64::new(t, 0.0))), sym);
        let rt = prob.residual_spec(&zt);
        let nt = spectral_norm(&rt);
        let better = best.as_ref().is_none_or(|(_, _, b): &(_, _, f64)| nt < *b);
        if better {
            best = Some((zt, rt, nt));
        }
        if nt < rn {
            break;
        }
        t *= 0.5;
    }
    best.expect("at least one trial")
}

/// One Petviashvili step `|M|^gamma S^-1 N(z)` with `N(z) = -nl P(z^2)` and
/// `M = <S z, z> / <N(z), z>`.
pub fn petviashvili_step(
    prob: &QuadraticProblem,
    z: &SpectralField2D,
    gamma: f64,
) -> Result<SpectralField2D> {
    let sz = prob.scale_by(z, |s, m| s * m);
    let fp = prob.fixed_point_map_spec(z);
    let n = prob.scale_by(&fp, |s, m| s * m);
    let den = spectral_inner(&n, z);
    if den == 0.0 || !den.is_finite() {
        return Err(Error::Numerical("Petviashvili quotient is undefined (zero iterate?)".into()));
    }
    let mq = spectral_inner(&sz, z) / den;
    Ok(fp.scale(Complex64::new(mq.abs().powf(gamma), 0.0)))
}

/// Solve the reduced equation from `zeta0`. With `reference` given, the
/// result records its `Y_1` and `Y_{1+theta}` distances to it.
pub fn solve(
    zeta0: &RealField2D,
    p: &PhysicalParams,
    cfg: &SolverConfig,
    reference: Option<&RealField2D>,
) -> Result<SolveResult> {
    check_band_feasible(zeta0.grid(), p)?;
    let prob = QuadraticProblem::reduced(zeta0.grid(), p)?;
    let mut res = solve_problem(&prob, zeta0, cfg)?;
    if let Some(r) = reference {
        res.distance_to_lump = Some(distance(&res.zeta, r, cfg.theta)?);
    }
    Ok(res)
}
