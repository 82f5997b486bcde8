//! Fourier multipliers sampled on the wavenumber lattice.

use ndarray::{Array2, Zip};
use num_complex::Complex64;

use crate::error::Result;
use crate::grid::{Grid, RealField2D, SpectralField2D};

/// What to store where a symbol formula is undefined (typically `k1 = 0`
/// or `k = 0`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SingularPolicy {
    ZeroOut,
    ValueAtLimit(Complex64),
}

impl SingularPolicy {
    fn value(self) -> Complex64 {
        match self {
            SingularPolicy::ZeroOut => Complex64::new(0.0, 0.0),
            SingularPolicy::ValueAtLimit(v) => v,
        }
    }
}

/// A symbol sampled on the lattice of a grid, in FFT order.
#[derive(Clone, Debug)]
pub struct MultiplierSpec {
    grid: Grid,
    samples: Array2<Complex64>,
    policy: SingularPolicy,
}

impl MultiplierSpec {
    /// Sample a complex symbol. Returning `None` marks a singular mode, which
    /// is then filled according to `policy`.
    pub fn from_symbol(
        grid: &Grid,
        policy: SingularPolicy,
        f: impl Fn(f64, f64) -> Option<Complex64>,
    ) -> Self {
        let (k1, k2) = (grid.k1(), grid.k2());
        let samples = Array2::from_shape_fn(grid.shape(), |(i, j)| {
            match f(k1[i], k2[j]) {
                Some(v) if v.re.is_finite() && v.im.is_finite() => v,
                _ => policy.value(),
            }
        });
        Self { grid: grid.clone(), samples, policy }
    }

    /// Sample a real symbol.
    pub fn from_real_symbol(
        grid: &Grid,
        policy: SingularPolicy,
        f: impl Fn(f64, f64) -> Option<f64>,
    ) -> Self {
        Self::from_symbol(grid, policy, |a, b| f(a, b).map(|v| Complex64::new(v, 0.0)))
    }

    pub fn identity(grid: &Grid) -> Self {
        Self::from_real_symbol(grid, SingularPolicy::ZeroOut, |_, _| Some(1.0))
    }

    /// Symbol `i k1`, i.e. `d/dx`.
    pub fn ddx(grid: &Grid) -> Self {
        Self::from_symbol(grid, SingularPolicy::ZeroOut, |k1, _| Some(Complex64::new(0.0, k1)))
    }

    /// Symbol `i k2`, i.e. `d/dy`.
    pub fn ddy(grid: &Grid) -> Self {
        Self::from_symbol(grid, SingularPolicy::ZeroOut, |_, k2| Some(Complex64::new(0.0, k2)))
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }
    pub fn samples(&self) -> &Array2<Complex64> {
        &self.samples
    }
    pub fn policy(&self) -> SingularPolicy {
        self.policy
    }
    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.samples[[i, j]]
    }

    /// Pointwise product of symbols (operator composition).
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            grid: self.grid.clone(),
            samples: &self.samples * &other.samples,
            policy: self.policy,
        }
    }

    /// Pointwise map of the samples.
    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self { grid: self.grid.clone(), samples: self.samples.mapv(f), policy: self.policy }
    }

    pub fn apply(&self, f: &SpectralField2D) -> Result<SpectralField2D> {
        self.grid.check_same(f.grid())?;
        let mut c = f.coeffs().clone();
        Zip::from(&mut c).and(&self.samples).for_each(|a, &s| *a *= s);
        SpectralField2D::new(f.grid(), c)
    }

    /// Apply to a real field and return the real part of the result. Exact
    /// for symbols with `s(-k) = conj s(k)`.
    pub fn apply_real(&self, f: &RealField2D) -> Result<RealField2D> {
        Ok(self.apply(&f.transform())?.inverse())
    }

    /// Largest `|s(-k) - conj s(k)|`: zero when the symbol maps real fields to real fields.
    pub fn reality_defect(&self) -> f64 {
        let (nx, ny) = self.grid.shape();
        let mut d = 0.0_f64;
        for i in 1..nx {
            for j in 1..ny {
                let a = self.samples[[i, j]];
                let b = self.samples[[nx - i, ny - j]];
                d = d.max((a - b.conj()).norm());
            }
        }
        d
    }
}

/// Free-function form of [`MultiplierSpec::apply`].
pub fn apply_multiplier(m: &MultiplierSpec, f: &SpectralField2D) -> Result<SpectralField2D> {
    m.apply(f)
}
