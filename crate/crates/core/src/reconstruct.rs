//! Physical surface `eta = eps^2 zeta(eps x, eps^2 y)` from a reduced
//! solution, and the trivial flow `u*(z)`.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::grid::{Grid, RealField2D};
use crate::norms::norm_ys;

/// Reconstructed surface with its diagnostics.
#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub eta: RealField2D,
    /// `max |eta| / eps^2`; zero when `eps = 0`.
    pub amplitude_ratio: f64,
    /// Size of the omitted correction, `eps |||eta|||^2 = eps^2 ||zeta||_{Y_1}^2`,
    /// using `|||eta|||^2 = eps ||zeta||_{Y_1}^2` for the rescaled field.
    /// `None` when `zeta` has infinite `Y_1` norm or `eps = 0`.
    pub eta2_bound: Option<f64>,
}

/// Check that `[-Lx, Lx) x [-Ly, Ly)` of `phys` maps inside the periodic cell of `zeta`.
fn check_cover(zeta: &Grid, phys: &Grid, eps: f64) -> Result<()> {
    let (cx, cy) = (eps * phys.lx(), eps * eps * phys.ly());
    let tol = 1e-12;
    if cx > zeta.lx() * (1.0 + tol) || cy > zeta.ly() * (1.0 + tol) {
        return invalid(format!(
            "physical half-widths ({}, {}) rescale to ({cx}, {cy}), outside the cell ({}, {})",
            phys.lx(),
            phys.ly(),
            zeta.lx(),
            zeta.ly()
        ));
    }
    Ok(())
}

/// `e^{i k (x + L)}` for every target point `x` and every lattice wavenumber `k`.
fn phase_matrix(points: impl Iterator<Item = f64>, ks: &[f64], l: f64) -> Array2<Complex64> {
    let pts: Vec<f64> = points.collect();
    Array2::from_shape_fn((pts.len(), ks.len()), |(p, a)| Complex64::from_polar(1.0, ks[a] * (pts[p] + l)))
}

/// Sample `eta(x, y) = eps^2 zeta(eps x, eps^2 y)` on `phys` by trigonometric
/// interpolation of `zeta`. Exactly odd in `zeta`.
pub fn reconstruct_eta(zeta: &RealField2D, eps: f64, phys: &Grid) -> Result<Reconstruction> {
    if !(eps >= 0.0 && eps.is_finite()) {
        return invalid(format!("eps must be non-negative, got {eps}"));
    }
    if eps == 0.0 {
        return Ok(Reconstruction { eta: RealField2D::zeros(phys), amplitude_ratio: 0.0, eta2_bound: None });
    }
    let zg = zeta.grid();
    check_cover(zg, phys, eps)?;
    let coeffs = zeta.transform().coeffs().clone();
    let ex = phase_matrix((0..phys.nx()).map(|i| eps * phys.x(i)), zg.k1(), zg.lx());
    let ey = phase_matrix((0..phys.ny()).map(|j| eps * eps * phys.y(j)), zg.k2(), zg.ly());
    let s = Complex64::new(eps * eps / zg.len() as f64, 0.0);
    let vals = ex.dot(&coeffs).dot(&ey.t()).mapv(|z| (z * s).re);
    let eta = RealField2D::new(phys, vals)?;
    let amplitude_ratio = eta.max_abs() / (eps * eps);
    let eta2_bound = norm_ys(zeta, 1.0).ok().map(|n| eps * eps * n * n);
    Ok(Reconstruction { eta, amplitude_ratio, eta2_bound })
}

/// Physical grid covering exactly the rescaled cell of `zeta`.
pub fn covering_grid(zeta: &Grid, eps: f64, nx: usize, ny: usize) -> Result<Grid> {
    if !(eps > 0.0) {
        return invalid(format!("covering grid needs eps > 0, got {eps}"));
    }
    crate::grid::make_grid(nx, ny, zeta.lx() / eps, zeta.ly() / (eps * eps))
}

/// The trivial flow `u*(z) = c1 (cos az, -sin az, 0) + c2 (sin az, cos az, 0)`.
pub fn trivial_flow(alpha: f64, c: [f64; 2], z: f64) -> [f64; 3] {
    let (s, co) = (alpha * z).sin_cos();
    [c[0] * co + c[1] * s, -c[0] * s + c[1] * co, 0.0]
}
