//! Discrete versions of the `L2`, `H^s`, `Y_s` and scaled norms.
//!
//! Lattice sums of `|f^(k)|^2` times the wavenumber cell area, with
//! `f^ = (1/2pi) int f e^{-ik.x}` approximated by the DFT. Periodization
//! error is not corrected.

use crate::error::{Error, Result};
use crate::grid::{RealField2D, SpectralField2D};

/// Relative energy on the `k1 = 0, k2 != 0` line above which `Y_s` norms are
/// reported as infinite.
pub const K1_ZERO_LINE_TOL: f64 = 1e-24;

/// Per-mode quadrature weight turning `|F|^2` into `|f^|^2 dk`.
fn mode_weight(f: &SpectralField2D) -> f64 {
    f.grid().cell_area() / f.grid().len() as f64
}

/// Sum of `w(k1, k2) |f^(k)|^2 dk` over the lattice.
pub fn weighted_sum(f: &SpectralField2D, w: impl Fn(f64, f64) -> f64) -> f64 {
    let g = f.grid();
    let (k1, k2) = (g.k1(), g.k2());
    let c = f.coeffs();
    let mut s = 0.0;
    for (i, &a) in k1.iter().enumerate() {
        for (j, &b) in k2.iter().enumerate() {
            let e = c[[i, j]].norm_sqr();
            if e != 0.0 {
                s += w(a, b) * e;
            }
        }
    }
    s * mode_weight(f)
}

fn check_k1_line(f: &SpectralField2D) -> Result<()> {
    let c = f.coeffs();
    let total = f.energy();
    let line: f64 = (1..f.grid().ny()).map(|j| c[[0, j]].norm_sqr()).sum();
    if total > 0.0 && line > K1_ZERO_LINE_TOL * total {
        return Err(Error::InfiniteNorm(format!(
            "field has relative energy {:.3e} on k1 = 0, k2 != 0",
            line / total
        )));
    }
    Ok(())
}

fn ratio_sq(k1: f64, k2: f64) -> f64 {
    if k1 == 0.0 {
        0.0
    } else {
        (k2 / k1).powi(2)
    }
}

/// `||f||_0`.
pub fn norm_l2(f: &RealField2D) -> f64 {
    f.norm_l2()
}

/// `||f||_{H^s}` with weight `(1 + |k|^2)^s`.
pub fn sobolev_hs(f: &RealField2D, s: f64) -> f64 {
    weighted_sum(&f.transform(), |a, b| (1.0 + a * a + b * b).powf(s)).sqrt()
}

/// `||f||_{Y_s}` with weight `(1 + k1^2 + k2^2/k1^2)^s`.
pub fn norm_ys(f: &RealField2D, s: f64) -> Result<f64> {
    norm_ys_spectral(&f.transform(), s)
}

pub fn norm_ys_spectral(f: &SpectralField2D, s: f64) -> Result<f64> {
    check_k1_line(f)?;
    Ok(weighted_sum(f, |a, b| (1.0 + a * a + ratio_sq(a, b)).powf(s)).sqrt())
}

/// The scaled norm with weight `1 + eps^-2 k1^2 + eps^-2 k2^2/k1^2`.
pub fn norm_scaled(f: &RealField2D, eps: f64) -> Result<f64> {
    norm_scaled_spectral(&f.transform(), eps)
}

pub fn norm_scaled_spectral(f: &SpectralField2D, eps: f64) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::Invalid(format!("scaled norm needs eps > 0, got {eps}")));
    }
    check_k1_line(f)?;
    let e2 = 1.0 / (eps * eps);
    Ok(weighted_sum(f, |a, b| 1.0 + e2 * (a * a + ratio_sq(a, b))).sqrt())
}

/// `||f^||_{L1}`, the lattice sum of `|f^(k)| dk`.
pub fn fourier_l1(f: &RealField2D) -> f64 {
    let s = f.transform();
    let g = s.grid();
    let scale = g.cell_area() / (2.0 * std::f64::consts::PI) * g.dk_area();
    s.coeffs().iter().map(|c| c.norm()).sum::<f64>() * scale
}

/// Discrete `L^p` norm with cell-area quadrature.
pub fn lp_norm(f: &RealField2D, p: f64) -> f64 {
    let s: f64 = f.values().iter().map(|v| v.abs().powf(p)).sum();
    (s * f.grid().cell_area()).powf(1.0 / p)
}
