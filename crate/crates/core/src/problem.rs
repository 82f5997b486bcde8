//! Quadratic equations `S(D) z + nl P(z^2) = 0` posed on a masked set of modes.
//!
//! Vectors are spectral fields supported on the mask. Inner products are the
//! `L2` quadrature of the corresponding real fields.

use ndarray::{Array2, Zip};
use num_complex::Complex64;

use crate::band::admissible_band;
use crate::dispersion::{g_eps_symbol, PhysicalParams};
use crate::error::{Error, Result};
use crate::grid::{Grid, RealField2D, SpectralField2D};
use crate::kp::KpModel;
use crate::product::{dealiased_product_spectral, PaddedFactor};

#[derive(Clone, Debug)]
pub struct QuadraticProblem {
    grid: Grid,
    symbol: Array2<f64>,
    mask: Array2<f64>,
    nl: f64,
}

impl QuadraticProblem {
    /// Build from a symbol (positive on the mask) and a 0/1 mask.
    pub fn new(grid: &Grid, symbol: Array2<f64>, mask: Array2<f64>, nl: f64) -> Result<Self> {
        if symbol.dim() != grid.shape() || mask.dim() != grid.shape() {
            return Err(Error::GridMismatch("symbol or mask shape".into()));
        }
        let bad = Zip::from(&symbol).and(&mask).fold(false, |b, &s, &m| b || (m != 0.0 && !(s > 0.0)));
        if bad {
            return Err(Error::Invalid("linear symbol must be positive on the band".into()));
        }
        Ok(Self { grid: grid.clone(), symbol, mask, nl })
    }

    /// KP model on all modes with `k1 != 0` off the Nyquist lines.
    pub fn from_kp(grid: &Grid, model: &KpModel) -> Self {
        let (k1, k2) = (grid.k1(), grid.k2());
        let symbol = Array2::from_shape_fn(grid.shape(), |(i, j)| model.symbol(k1[i], k2[j]).unwrap_or(0.0));
        let mut mask = Array2::from_shape_fn(grid.shape(), |(i, _)| if k1[i] != 0.0 { 1.0 } else { 0.0 });
        drop_nyquist(&mut mask);
        Self { grid: grid.clone(), symbol, mask, nl: model.nl }
    }

    /// Reduced equation `eps^-2 g_eps(D) z + 2 z + d_alpha chi_eps(D) z^2 = 0`
    /// on the admissible part of the `chi_eps` band, Nyquist lines excluded.
    pub fn reduced(grid: &Grid, p: &PhysicalParams) -> Result<Self> {
        let band = admissible_band(grid, p.delta, p.eps)?;
        let (k1, k2) = (grid.k1(), grid.k2());
        let symbol = Array2::from_shape_fn(grid.shape(), |(i, j)| {
            g_eps_symbol(k1[i], k2[j], p).map(|g| g + 2.0).unwrap_or(0.0)
        });
        let mut mask = band.samples().mapv(|c| c.re);
        drop_nyquist(&mut mask);
        Self::new(grid, symbol, mask, p.d_alpha)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }
    pub fn symbol(&self) -> &Array2<f64> {
        &self.symbol
    }
    pub fn mask(&self) -> &Array2<f64> {
        &self.mask
    }
    pub fn nl(&self) -> f64 {
        self.nl
    }
    /// Number of retained modes.
    pub fn band_size(&self) -> usize {
        self.mask.iter().filter(|&&m| m != 0.0).count()
    }

    pub fn project_spec(&self, f: &SpectralField2D) -> SpectralField2D {
        self.scale_by(f, |_, m| m)
    }

    pub fn project(&self, f: &RealField2D) -> RealField2D {
        self.project_spec(&f.transform()).inverse()
    }

    /// Multiply coefficients by `h(symbol, mask)`.
    pub fn scale_by(&self, f: &SpectralField2D, h: impl Fn(f64, f64) -> f64) -> SpectralField2D {
        let mut c = f.coeffs().clone();
        Zip::from(&mut c).and(&self.symbol).and(&self.mask).for_each(|z, &s, &m| *z *= h(s, m));
        SpectralField2D::new(&self.grid, c).expect("shape")
    }

    /// `S z + nl P(z^2)` for `z` already on the band.
    pub fn residual_spec(&self, z: &SpectralField2D) -> SpectralField2D {
        let sq = dealiased_product_spectral(z, z).expect("same grid");
        let mut c = sq.coeffs().clone();
        Zip::from(&mut c)
            .and(z.coeffs())
            .and(&self.symbol)
            .and(&self.mask)
            .for_each(|r, &zz, &s, &m| *r = (*r * self.nl + zz * s) * m);
        SpectralField2D::new(&self.grid, c).expect("shape")
    }

    /// Residual of a real field after projecting it onto the band.
    pub fn residual(&self, z: &RealField2D) -> RealField2D {
        self.residual_spec(&self.project_spec(&z.transform())).inverse()
    }

    /// `-S^-1 nl P(z^2)`; its fixed points are the band solutions.
    pub fn fixed_point_map_spec(&self, z: &SpectralField2D) -> SpectralField2D {
        let sq = dealiased_product_spectral(z, z).expect("same grid");
        let nl = self.nl;
        self.scale_by(&sq, |s, m| if m != 0.0 { -nl / s } else { 0.0 })
    }

    pub fn fixed_point_map(&self, z: &RealField2D) -> RealField2D {
        self.fixed_point_map_spec(&self.project_spec(&z.transform())).inverse()
    }

    /// Linearization at `z`.
    pub fn jacobian_at(&self, z: &SpectralField2D) -> Jacobian<'_> {
        Jacobian { prob: self, z: PaddedFactor::new(z) }
    }

    /// `L2` inner product of two spectral fields.
    pub fn inner(&self, a: &SpectralField2D, b: &SpectralField2D) -> f64 {
        spectral_inner(a, b)
    }
}

/// Remove the Nyquist lines, whose modes have no real translates; without
/// them the translation modes of a solution are exact kernel vectors.
fn drop_nyquist(mask: &mut Array2<f64>) {
    let (nx, ny) = mask.dim();
    mask.row_mut(nx / 2).fill(0.0);
    mask.column_mut(ny / 2).fill(0.0);
}

/// `L2` quadrature inner product computed from DFT coefficients.
pub fn spectral_inner(a: &SpectralField2D, b: &SpectralField2D) -> f64 {
    let g = a.grid();
    let s = Zip::from(a.coeffs()).and(b.coeffs()).fold(0.0, |acc, x: &Complex64, y: &Complex64| {
        acc + (x.conj() * y).re
    });
    s * g.cell_area() / g.len() as f64
}

pub fn spectral_norm(a: &SpectralField2D) -> f64 {
    spectral_inner(a, a).sqrt()
}

/// `v -> P (S v + 2 nl z v)`.
pub struct Jacobian<'a> {
    prob: &'a QuadraticProblem,
    z: PaddedFactor,
}

impl Jacobian<'_> {
    pub fn apply(&self, v: &SpectralField2D) -> Result<SpectralField2D> {
        let zv = self.z.mul(v)?;
        let mut c = zv.coeffs().clone();
        let two_nl = 2.0 * self.prob.nl;
        Zip::from(&mut c)
            .and(v.coeffs())
            .and(&self.prob.symbol)
            .and(&self.prob.mask)
            .for_each(|r, &vv, &s, &m| *r = (*r * two_nl + vv * s) * m);
        SpectralField2D::new(&self.prob.grid, c)
    }

    /// Symmetrically preconditioned form `S^-1/2 J S^-1/2`, equal to the
    /// identity plus `2 nl S^-1/2 (z .) S^-1/2` on the band.
    pub fn apply_normalized(&self, v: &SpectralField2D) -> Result<SpectralField2D> {
        let p = self.prob;
        let w = p.scale_by(v, |s, m| if m != 0.0 { 1.0 / s.sqrt() } else { 0.0 });
        let jw = self.apply(&w)?;
        Ok(p.scale_by(&jw, |s, m| if m != 0.0 { 1.0 / s.sqrt() } else { 0.0 }))
    }
}

/// `(f(x, y) + f(-x, -y)) / 2` in coefficient space: `(c(k) + c(-k)) / 2`.
pub fn symmetrize_spec(f: &SpectralField2D) -> SpectralField2D {
    let (nx, ny) = f.grid().shape();
    let c = f.coeffs();
    let out = Array2::from_shape_fn((nx, ny), |(i, j)| (c[[i, j]] + c[[(nx - i) % nx, (ny - j) % ny]]) * 0.5);
    SpectralField2D::new(f.grid(), out).expect("shape")
}
