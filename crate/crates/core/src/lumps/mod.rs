//! Exact KP-I lumps `u_k = -2 d_x^2 log tau_k` for `k = 1, 2`, the map to the
//! physical KP equation, and exact residual oracles.

mod nondegen;
mod poly;

use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

pub use nondegen::{
    nondegeneracy_report, operator_report, NondegenOptions, NondegeneracyReport, Symmetry, Verdict,
    GAP_MIN, KERNEL_TOL,
};
pub use poly::{Poly2, PolyF64, RatFn};

use crate::dispersion::PhysicalParams;
use crate::error::{invalid, Error, Result};
use crate::grid::{make_grid, Grid, RealField2D};
use crate::kp::KpModel;

const MAX_DX: usize = 4;
const MAX_DY: usize = 2;

struct LumpTable {
    tau: Poly2,
    tau_f: PolyF64,
    /// `d^(i+j) u / dx^i dy^j` for `i <= 4`, `j <= 2`.
    derivs: Vec<Vec<RatFn>>,
    derivs_f: Vec<Vec<(PolyF64, i32)>>,
}

fn tau_poly(k: u8) -> Poly2 {
    match k {
        1 => Poly2::from_terms(&[(1, 2, 0), (1, 0, 2), (3, 0, 0)]),
        _ => Poly2::from_terms(&[
            (1, 6, 0),
            (3, 4, 2),
            (3, 2, 4),
            (1, 0, 6),
            (25, 4, 0),
            (90, 2, 2),
            (17, 0, 4),
            (-125, 2, 0),
            (475, 0, 2),
            (1875, 0, 0),
        ]),
    }
}

fn build(k: u8) -> LumpTable {
    let tau = tau_poly(k);
    let tx = tau.dx();
    let ty = tau.dy();
    let txx = tx.dx();
    let u = RatFn { num: tau.mul(&txx).sub(&tx.mul(&tx)).scale(-2), pow: 2 };
    let mut derivs: Vec<Vec<RatFn>> = Vec::new();
    let mut col = u;
    for _ in 0..=MAX_DX {
        let mut row = vec![col.clone()];
        for j in 1..=MAX_DY {
            let next = row[j - 1].dy(&tau, &ty);
            row.push(next);
        }
        derivs.push(row);
        col = col.dx(&tau, &tx);
    }
    let derivs_f = derivs
        .iter()
        .map(|row| row.iter().map(|r| (r.num.to_f64(), r.pow as i32)).collect())
        .collect();
    LumpTable { tau_f: tau.to_f64(), tau, derivs, derivs_f }
}

fn table(k: u8) -> Result<&'static LumpTable> {
    static TABLES: OnceLock<[LumpTable; 2]> = OnceLock::new();
    let t = TABLES.get_or_init(|| [build(1), build(2)]);
    match k {
        1 => Ok(&t[0]),
        2 => Ok(&t[1]),
        _ => invalid(format!("only lumps k = 1, 2 are available, got {k}")),
    }
}

/// `tau_k(x, y)`.
pub fn tau_star(k: u8, x: f64, y: f64) -> Result<f64> {
    Ok(table(k)?.tau_f.eval(x, y))
}

/// Exact polynomial `tau_k` with integer coefficients.
pub fn tau_polynomial(k: u8) -> Result<Poly2> {
    Ok(table(k)?.tau.clone())
}

/// Exact rational form of `d^(i+j) u_k / dx^i dy^j`, `i <= 4`, `j <= 2`.
pub fn lump_derivative_exact(k: u8, ox: usize, oy: usize) -> Result<RatFn> {
    if ox > MAX_DX || oy > MAX_DY {
        return invalid(format!("derivative order ({ox}, {oy}) exceeds ({MAX_DX}, {MAX_DY})"));
    }
    Ok(table(k)?.derivs[ox][oy].clone())
}

/// `u_k(x, y)`.
pub fn lump_u(k: u8, x: f64, y: f64) -> Result<f64> {
    lump_derivative(k, 0, 0, x, y)
}

/// `d^(i+j) u_k / dx^i dy^j` at `(x, y)`, evaluated in floating point.
pub fn lump_derivative(k: u8, ox: usize, oy: usize, x: f64, y: f64) -> Result<f64> {
    if ox > MAX_DX || oy > MAX_DY {
        return invalid(format!("derivative order ({ox}, {oy}) exceeds ({MAX_DX}, {MAX_DY})"));
    }
    let t = table(k)?;
    let (num, pow) = &t.derivs_f[ox][oy];
    Ok(num.eval(x, y) / t.tau_f.eval(x, y).powi(*pow))
}

/// Exact value of `-u_xxxx + u_xx + 3 (u^2)_xx + u_yy` at a rational point.
pub fn kp_residual_exact(k: u8, x: &BigRational, y: &BigRational) -> Result<BigRational> {
    let t = table(k)?;
    let ev = |i: usize, j: usize| t.derivs[i][j].eval_exact(&t.tau, x, y);
    let (u, ux, uxx, uxxxx, uyy) = (ev(0, 0), ev(1, 0), ev(2, 0), ev(4, 0), ev(0, 2));
    let three = BigRational::from_integer(3.into());
    let two = BigRational::from_integer(2.into());
    let sq_xx = &two * (&ux * &ux + &u * &uxx);
    Ok(-uxxxx + uxx + three * sq_xx + uyy)
}

/// Normalized-KP residual of `u_k` at `(x, y)`, evaluated exactly at the binary
/// value of the inputs and rounded once at the end.
pub fn kp_residual_pointwise(k: u8, x: f64, y: f64) -> Result<f64> {
    let (bx, by) = match (BigRational::from_float(x), BigRational::from_float(y)) {
        (Some(a), Some(b)) => (a, b),
        _ => return invalid("non-finite evaluation point"),
    };
    let r = kp_residual_exact(k, &bx, &by)?;
    if r.is_zero() {
        return Ok(0.0);
    }
    r.to_f64().ok_or_else(|| Error::Numerical("residual not representable".into()))
}

/// Scales taking a normalized lump `u` to a physical one, `zeta(x,y) = A u(a x, b y)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormalizationMap {
    pub amp: f64,
    pub a: f64,
    pub b: f64,
}

/// `A = 6/d_alpha`, `a^2 = 2/(beta - beta0)`, `b^2 = 4 cos^2(alpha/2)/(beta - beta0)`.
pub fn normalization_map(p: &PhysicalParams) -> Result<NormalizationMap> {
    let gap = p.beta - p.beta0;
    if !(gap > 0.0) {
        return invalid(format!("need beta > beta0 = {}, got beta = {}", p.beta0, p.beta));
    }
    let c = (p.alpha / 2.0).cos();
    Ok(NormalizationMap {
        amp: 6.0 / p.d_alpha,
        a: (2.0 / gap).sqrt(),
        b: (4.0 * c * c / gap).sqrt(),
    })
}

impl NormalizationMap {
    /// Identity map, used for the normalized equation itself.
    pub const IDENTITY: NormalizationMap = NormalizationMap { amp: 1.0, a: 1.0, b: 1.0 };
}

/// Grid in physical coordinates whose image under the map is
/// `[-l, l)^2` in normalized lump coordinates.
pub fn lump_grid(n: usize, l: f64, map: &NormalizationMap) -> Result<Grid> {
    make_grid(n, n, l / map.a, l / map.b)
}

/// Sample `A d^(i+j)/dx^i dy^j [u_k(a x, b y)]` on a grid.
pub fn lump_field_derivative(
    grid: &Grid,
    k: u8,
    map: &NormalizationMap,
    ox: usize,
    oy: usize,
) -> Result<RealField2D> {
    if ox > MAX_DX || oy > MAX_DY {
        return invalid(format!("derivative order ({ox}, {oy}) exceeds ({MAX_DX}, {MAX_DY})"));
    }
    let t = table(k)?;
    let (num, pow) = &t.derivs_f[ox][oy];
    let s = map.amp * map.a.powi(ox as i32) * map.b.powi(oy as i32);
    Ok(RealField2D::from_fn(grid, |x, y| {
        let (xx, yy) = (map.a * x, map.b * y);
        s * num.eval(xx, yy) / t.tau_f.eval(xx, yy).powi(*pow)
    }))
}

/// Sample the lump `A u_k(a x, b y)` on a grid.
pub fn lump_field(grid: &Grid, k: u8, map: &NormalizationMap) -> Result<RealField2D> {
    lump_field_derivative(grid, k, map, 0, 0)
}

/// Physical lump `zeta_k` for the given parameters, sampled on a grid.
pub fn mapped_lump(grid: &Grid, k: u8, p: &PhysicalParams) -> Result<RealField2D> {
    lump_field(grid, k, &normalization_map(p)?)
}

/// Spectral residual of the normalized equation in its `d_x^2`-multiplied form,
/// with its discrete `L2` norm.
pub fn kp_residual_normalized(u: &RealField2D) -> (RealField2D, f64) {
    let r = KpModel::NORMALIZED.residual_multiplied(u);
    let n = r.norm_l2();
    (r, n)
}

/// Spectral residual of the physical KP equation, `d_x^2`-multiplied form.
pub fn kp_residual_physical(zeta: &RealField2D, p: &PhysicalParams) -> (RealField2D, f64) {
    let r = KpModel::physical(p).residual_multiplied(zeta);
    let n = r.norm_l2();
    (r, n)
}

/// Linearization of the KP equation at `base`, in divided symmetric form,
/// restricted to modes with `k1 != 0`.
pub fn linearized_kp_apply(
    model: &KpModel,
    base: &RealField2D,
    v: &RealField2D,
) -> Result<RealField2D> {
    model.linearized_apply(base, v)
}
