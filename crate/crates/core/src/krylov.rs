//! Matrix-free symmetric Krylov methods: MINRES for linear solves and Lanczos
//! with full reorthogonalization for eigenvalues near zero.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::SpectralField2D;
use crate::problem::spectral_inner;

fn axpy(y: &mut SpectralField2D, a: f64, x: &SpectralField2D) {
    let s = Complex64::new(a, 0.0);
    y.coeffs_mut().zip_mut_with(x.coeffs(), |u, &v| *u += s * v);
}

fn scaled(x: &SpectralField2D, a: f64) -> SpectralField2D {
    x.scale(Complex64::new(a, 0.0))
}

/// Outcome of a MINRES solve.
#[derive(Clone, Debug)]
pub struct MinresOutcome {
    pub x: SpectralField2D,
    pub iterations: usize,
    /// Estimated `||b - A x|| / ||b||`.
    pub rel_residual: f64,
    pub converged: bool,
}

/// Solve `A x = b` for symmetric `A` (possibly indefinite), starting from zero.
pub fn minres(
    mut op: impl FnMut(&SpectralField2D) -> Result<SpectralField2D>,
    b: &SpectralField2D,
    rtol: f64,
    max_iter: usize,
) -> Result<MinresOutcome> {
    let mut x = SpectralField2D::zeros(b.grid());
    let beta1 = spectral_inner(b, b).sqrt();
    if beta1 == 0.0 {
        return Ok(MinresOutcome { x, iterations: 0, rel_residual: 0.0, converged: true });
    }
    let mut r1 = b.clone();
    let mut r2 = b.clone();
    let mut y = b.clone();
    let (mut oldb, mut beta) = (0.0, beta1);
    let (mut dbar, mut epsln, mut phibar) = (0.0, 0.0, beta1);
    let (mut cs, mut sn) = (-1.0_f64, 0.0_f64);
    let mut w = SpectralField2D::zeros(b.grid());
    let mut w2 = SpectralField2D::zeros(b.grid());
    let mut iterations = 0;
    while iterations < max_iter {
        iterations += 1;
        let v = scaled(&y, 1.0 / beta);
        y = op(&v)?;
        if iterations >= 2 {
            axpy(&mut y, -beta / oldb, &r1);
        }
        let alfa = spectral_inner(&v, &y);
        axpy(&mut y, -alfa / beta, &r2);
        r1 = std::mem::replace(&mut r2, y.clone());
        oldb = beta;
        beta = spectral_inner(&r2, &r2).sqrt();
        let oldeps = epsln;
        let delta = cs * dbar + sn * alfa;
        let gbar = sn * dbar - cs * alfa;
        epsln = sn * beta;
        dbar = -cs * beta;
        let gamma = gbar.hypot(beta).max(f64::EPSILON);
        cs = gbar / gamma;
        sn = beta / gamma;
        let phi = cs * phibar;
        phibar *= sn;
        let w1 = std::mem::replace(&mut w2, w.clone());
        let mut wn = v;
        axpy(&mut wn, -oldeps, &w1);
        axpy(&mut wn, -delta, &w2);
        w = scaled(&wn, 1.0 / gamma);
        axpy(&mut x, phi, &w);
        if phibar <= rtol * beta1 || beta == 0.0 {
            return Ok(MinresOutcome { x, iterations, rel_residual: phibar / beta1, converged: true });
        }
    }
    Ok(MinresOutcome { x, iterations, rel_residual: phibar / beta1, converged: false })
}

/// A Ritz pair estimate from Lanczos.
#[derive(Clone, Debug)]
pub struct RitzValue {
    pub value: f64,
    /// `||A y - value y||` for the unit Ritz vector `y`.
    pub residual: f64,
    /// The unit Ritz vector, for the `wanted` smallest values only.
    pub vector: Option<SpectralField2D>,
}

/// Outcome of a Lanczos run.
#[derive(Clone, Debug)]
pub struct LanczosOutcome {
    /// Ritz values sorted by absolute value.
    pub ritz: Vec<RitzValue>,
    pub iterations: usize,
    /// The `wanted` smallest-magnitude values all met the residual tolerance.
    pub converged: bool,
}

/// Stopping rules for [`lanczos_smallest_magnitude`].
#[derive(Clone, Copy, Debug)]
pub struct LanczosOptions {
    /// Number of smallest-magnitude Ritz values that must converge.
    pub wanted: usize,
    /// Residual tolerance for those values.
    pub tol: f64,
    /// Steps taken before convergence is first tested, so that interior
    /// eigenvalues have a chance to appear.
    pub min_iter: usize,
    pub max_iter: usize,
}

/// Lanczos with full reorthogonalization. `project` maps a vector into the
/// invariant subspace of interest.
pub fn lanczos_smallest_magnitude(
    mut op: impl FnMut(&SpectralField2D) -> Result<SpectralField2D>,
    project: impl Fn(&SpectralField2D) -> SpectralField2D,
    start: &SpectralField2D,
    opts: LanczosOptions,
) -> Result<LanczosOutcome> {
    let LanczosOptions { wanted, tol, min_iter, max_iter } = opts;
    let s0 = project(start);
    let n0 = spectral_inner(&s0, &s0).sqrt();
    if n0 == 0.0 {
        return Err(Error::Invalid("start vector vanishes in the subspace".into()));
    }
    let mut q: Vec<SpectralField2D> = vec![scaled(&s0, 1.0 / n0)];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut last = None;
    for j in 0..max_iter {
        let mut w = project(&op(&q[j])?);
        let a = spectral_inner(&q[j], &w);
        axpy(&mut w, -a, &q[j]);
        if j > 0 {
            axpy(&mut w, -betas[j - 1], &q[j - 1]);
        }
        // Rounding leaves components outside the subspace that the recurrence
        // would amplify, so project between the two orthogonalization passes.
        for pass in 0..2 {
            if pass == 1 {
                w = project(&w);
            }
            for qi in &q {
                let h = spectral_inner(qi, &w);
                axpy(&mut w, -h, qi);
            }
        }
        alphas.push(a);
        let b = spectral_inner(&w, &w).sqrt();
        let m = alphas.len();
        let exhausted = b <= 1e-14 * a.abs().max(1.0);
        if m >= wanted.max(min_iter) && (m.is_multiple_of(10) || exhausted || j + 1 == max_iter) {
            let (out, _) = ritz(&alphas, &betas, b);
            let ok = out.iter().take(wanted).all(|r| r.residual <= tol);
            last = Some(LanczosOutcome { ritz: out, iterations: m, converged: ok });
            if ok || exhausted {
                break;
            }
        } else if exhausted {
            let (out, _) = ritz(&alphas, &betas, b);
            let ok = out.iter().take(wanted).all(|r| r.residual <= tol);
            last = Some(LanczosOutcome { ritz: out, iterations: m, converged: ok });
            break;
        }
        betas.push(b);
        q.push(scaled(&w, 1.0 / b));
    }
    let mut last = last.ok_or_else(|| Error::Numerical("Lanczos produced no Ritz values".into()))?;
    let (_, evecs) = ritz(&alphas, &betas, 0.0);
    for r in last.ritz.iter_mut().take(wanted) {
        let col = evecs.iter().find(|(v, _)| *v == r.value).map(|(_, c)| c);
        if let Some(c) = col {
            let mut y = SpectralField2D::zeros(start.grid());
            for (qi, &ci) in q.iter().zip(c) {
                axpy(&mut y, ci, qi);
            }
            r.vector = Some(y);
        }
    }
    Ok(last)
}

/// Ritz values sorted by magnitude, with the eigenpairs of the tridiagonal
/// matrix as `(value, coordinates)`.
fn ritz(alphas: &[f64], betas: &[f64], b_next: f64) -> (Vec<RitzValue>, Vec<(f64, Vec<f64>)>) {
    let m = alphas.len();
    let mut t = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alphas[i];
        if i + 1 < m {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    let e = SymmetricEigen::new(t);
    let mut out: Vec<RitzValue> = (0..m)
        .map(|i| RitzValue {
            value: e.eigenvalues[i],
            residual: (b_next * e.eigenvectors[(m - 1, i)]).abs(),
            vector: None,
        })
        .collect();
    out.sort_by(|a, b| a.value.abs().total_cmp(&b.value.abs()));
    let vecs = (0..m).map(|i| (e.eigenvalues[i], e.eigenvectors.column(i).iter().copied().collect())).collect();
    (out, vecs)
}
