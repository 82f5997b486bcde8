//! Sharp long-wave cutoffs `chi(D)` and `chi_eps(D)`.

use crate::error::{invalid, Result};
use crate::grid::{Grid, RealField2D};
use crate::multiplier::{MultiplierSpec, SingularPolicy};

const SLACK: f64 = 1e-12;

/// Whether `(k1, k2)` lies in `{|k1| <= d, |k2| <= d |k1|}`; on `k1 = 0`
/// only the origin is kept.
pub fn in_band(k1: f64, k2: f64, d: f64) -> bool {
    if k1 == 0.0 {
        return k2 == 0.0;
    }
    k1.abs() <= d * (1.0 + SLACK) && k2.abs() <= d * k1.abs() * (1.0 + SLACK)
}

/// Whether `(k1, k2)` lies in the support of `chi_eps`, i.e.
/// `|eps k1| <= delta` and `|eps k2 / k1| <= delta`. For `eps = 0` every mode is kept.
pub fn in_band_eps(k1: f64, k2: f64, delta: f64, eps: f64) -> bool {
    if eps == 0.0 {
        return true;
    }
    in_band(k1, k2, delta / eps)
}

/// Indicator of the band `|k1| <= delta`, `|k2/k1| <= delta`.
pub fn cutoff_chi(grid: &Grid, delta: f64) -> Result<MultiplierSpec> {
    if !(delta > 0.0) {
        return invalid(format!("cutoff half-width must be positive, got {delta}"));
    }
    Ok(MultiplierSpec::from_real_symbol(grid, SingularPolicy::ZeroOut, |k1, k2| {
        Some(if in_band(k1, k2, delta) { 1.0 } else { 0.0 })
    }))
}

/// Indicator of `chi(eps k1, eps^2 k2)`; identity for `eps = 0`.
pub fn cutoff_chi_eps(grid: &Grid, delta: f64, eps: f64) -> Result<MultiplierSpec> {
    if !(delta > 0.0) {
        return invalid(format!("cutoff half-width must be positive, got {delta}"));
    }
    if !(eps >= 0.0) {
        return invalid(format!("eps must be non-negative, got {eps}"));
    }
    Ok(MultiplierSpec::from_real_symbol(grid, SingularPolicy::ZeroOut, |k1, k2| {
        Some(if in_band_eps(k1, k2, delta, eps) { 1.0 } else { 0.0 })
    }))
}

/// The space the reduced solver works in: the `chi_eps` support with the whole
/// `k1 = 0` line removed. Those modes carry infinite `Y_s` weight off the
/// origin, and the mean mode has no well-defined limit symbol.
pub fn admissible_band(grid: &Grid, delta: f64, eps: f64) -> Result<MultiplierSpec> {
    cutoff_chi_eps(grid, delta, eps)?;
    Ok(MultiplierSpec::from_real_symbol(grid, SingularPolicy::ZeroOut, |k1, k2| {
        Some(if k1 != 0.0 && in_band_eps(k1, k2, delta, eps) { 1.0 } else { 0.0 })
    }))
}

/// Project a real field onto a 0/1 mask.
pub fn project(mask: &MultiplierSpec, f: &RealField2D) -> Result<RealField2D> {
    mask.apply_real(f)
}
