//! Nondegeneracy of the linearization at a lump, by Lanczos on the
//! symmetrically preconditioned operator `I + 2 nl S^-1/2 (z .) S^-1/2`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::grid::{Grid, RealField2D, SpectralField2D};
use crate::kp::KpModel;
use crate::krylov::{lanczos_smallest_magnitude, LanczosOptions};
use crate::problem::{spectral_norm, symmetrize_spec, QuadraticProblem};
use crate::solver::{solve_problem, Method, SolverConfig};

use super::{lump_field, NormalizationMap};

/// Values below this count as kernel directions.
pub const KERNEL_TOL: f64 = 1e-4;
/// Required separation of the first non-kernel value from zero.
pub const GAP_MIN: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symmetry {
    Full,
    /// Fields with `v(x, y) = v(-x, -y)`.
    Even,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Kernel is exactly the translations (Full) or trivial (Even).
    Nondegenerate,
    Degenerate,
    /// The eigensolver did not converge.
    Inconclusive,
}

#[derive(Clone, Copy, Debug)]
pub struct NondegenOptions {
    /// Number of smallest-magnitude values to resolve.
    pub wanted: usize,
    pub tol: f64,
    pub min_iter: usize,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for NondegenOptions {
    fn default() -> Self {
        Self { wanted: 3, tol: 1e-6, min_iter: 60, max_iter: 400, seed: 7 }
    }
}

#[derive(Clone, Debug)]
pub struct NondegeneracyReport {
    pub symmetry: Symmetry,
    /// Smallest singular values, ascending.
    pub singular_values: Vec<f64>,
    /// Ritz residuals matching `singular_values`.
    pub residuals: Vec<f64>,
    /// Count of values below [`KERNEL_TOL`].
    pub kernel_dimension: usize,
    /// First value above the kernel, or `NaN` if none was resolved.
    pub gap: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Residual norm of the base state after refinement.
    pub base_residual: f64,
    /// `||K v|| / ||v||` for the preconditioned translation modes, when the
    /// base is nonzero and the space contains them.
    pub translation_residual: Option<f64>,
}

impl NondegeneracyReport {
    pub fn verdict(&self) -> Verdict {
        if !self.converged {
            return Verdict::Inconclusive;
        }
        let expected = match self.symmetry {
            Symmetry::Full => 2,
            Symmetry::Even => 0,
        };
        if self.kernel_dimension == expected && self.gap > GAP_MIN {
            Verdict::Nondegenerate
        } else {
            Verdict::Degenerate
        }
    }
}

/// Refine the normalized lump `u_k` into a discrete solution on `grid`
/// (kept even) and analyse the linearization there.
pub fn nondegeneracy_report(
    k: u8,
    grid: &Grid,
    symmetry: Symmetry,
    opts: &NondegenOptions,
) -> Result<NondegeneracyReport> {
    let model = KpModel::NORMALIZED;
    let prob = QuadraticProblem::from_kp(grid, &model);
    let u = lump_field(grid, k, &NormalizationMap::IDENTITY)?;
    let cfg = SolverConfig {
        method: Method::NewtonKrylov,
        warmup_steps: 0,
        max_iter: 8,
        tol_residual: 1e-11,
        krylov_tol: 1e-10,
        krylov_max_iter: 1000,
        ..SolverConfig::default()
    };
    let base = solve_problem(&prob, &u, &cfg)?;
    let mut rep = operator_report(&prob, &base.zeta, symmetry, opts)?;
    rep.base_residual = base.residual_norm;
    Ok(rep)
}

/// Analyse the linearization of `prob` at an arbitrary base state.
pub fn operator_report(
    prob: &QuadraticProblem,
    base: &RealField2D,
    symmetry: Symmetry,
    opts: &NondegenOptions,
) -> Result<NondegeneracyReport> {
    let grid = prob.grid();
    let z = prob.project_spec(&base.transform());
    let jac = prob.jacobian_at(&z);
    let restrict = |f: &SpectralField2D| {
        let f = prob.project_spec(&f.inverse().transform());
        match symmetry {
            Symmetry::Even => symmetrize_spec(&f),
            Symmetry::Full => f,
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let start = RealField2D::from_fn(grid, |_, _| rng.random_range(-1.0..1.0)).transform();
    let out = lanczos_smallest_magnitude(
        |v| jac.apply_normalized(v),
        restrict,
        &start,
        LanczosOptions { wanted: opts.wanted, tol: opts.tol, min_iter: opts.min_iter, max_iter: opts.max_iter },
    )?;
    let ritz: Vec<_> = out.ritz.iter().take(opts.wanted).collect();
    let singular_values: Vec<f64> = ritz.iter().map(|r| r.value.abs()).collect();
    let residuals = ritz.iter().map(|r| r.residual).collect();
    let kernel_dimension = singular_values.iter().filter(|&&s| s < KERNEL_TOL).count();
    let gap = singular_values.get(kernel_dimension).copied().unwrap_or(f64::NAN);

    let translation_residual = (symmetry == Symmetry::Full && spectral_norm(&z) > 0.0).then(|| {
        let sqrt_s = |f: &SpectralField2D| prob.scale_by(f, |s, m| if m != 0.0 { s.sqrt() } else { 0.0 });
        let mut worst: f64 = 0.0;
        for axis in 0..2 {
            let mut d = z.clone();
            let ks = if axis == 0 { grid.k1().to_vec() } else { grid.k2().to_vec() };
            for ((i, j), c) in d.coeffs_mut().indexed_iter_mut() {
                let kk = if axis == 0 { ks[i] } else { ks[j] };
                *c *= num_complex::Complex64::new(0.0, kk);
            }
            let v = sqrt_s(&d);
            let nv = spectral_norm(&v);
            if nv > 0.0 {
                let kv = jac.apply_normalized(&v).map(|w| spectral_norm(&w) / nv).unwrap_or(f64::NAN);
                worst = worst.max(kv);
            }
        }
        worst
    });

    Ok(NondegeneracyReport {
        symmetry,
        singular_values,
        residuals,
        kernel_dimension,
        gap,
        iterations: out.iterations,
        converged: out.converged,
        base_residual: 0.0,
        translation_residual,
    })
}
