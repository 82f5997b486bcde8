//! Bivariate polynomials with exact integer coefficients, and rational
//! functions of the form `P / tau^n` for a fixed `tau`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly2 {
    terms: BTreeMap<(u32, u32), BigInt>,
}

impl Poly2 {
    /// Build from `(coefficient, x power, y power)` triples.
    pub fn from_terms(terms: &[(i64, u32, u32)]) -> Self {
        let mut p = Self::default();
        for &(c, i, j) in terms {
            p.add_term(i, j, BigInt::from(c));
        }
        p
    }

    fn add_term(&mut self, i: u32, j: u32, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((i, j)).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|&(i, j)| i + j).max().unwrap_or(0)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut p = self.clone();
        for (&(i, j), c) in &o.terms {
            p.add_term(i, j, c.clone());
        }
        p
    }

    pub fn scale(&self, s: i64) -> Self {
        let mut p = Self::default();
        for (&(i, j), c) in &self.terms {
            p.add_term(i, j, c * s);
        }
        p
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(-1))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut p = Self::default();
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &o.terms {
                p.add_term(i + k, j + l, a * b);
            }
        }
        p
    }

    pub fn dx(&self) -> Self {
        let mut p = Self::default();
        for (&(i, j), c) in &self.terms {
            if i > 0 {
                p.add_term(i - 1, j, c * i);
            }
        }
        p
    }

    pub fn dy(&self) -> Self {
        let mut p = Self::default();
        for (&(i, j), c) in &self.terms {
            if j > 0 {
                p.add_term(i, j - 1, c * j);
            }
        }
        p
    }

    /// Coefficients rounded to `f64`, for fast approximate evaluation.
    pub fn to_f64(&self) -> PolyF64 {
        PolyF64 {
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), c)| (c.to_f64().unwrap_or(f64::NAN), i as i32, j as i32))
                .collect(),
        }
    }

    /// Exact value, accumulated over the common denominator `xd^dx yd^dy`.
    pub fn eval_exact(&self, x: &BigRational, y: &BigRational) -> BigRational {
        let dx = self.terms.keys().map(|k| k.0).max().unwrap_or(0) as usize;
        let dy = self.terms.keys().map(|k| k.1).max().unwrap_or(0) as usize;
        let powers = |v: &BigInt, n: usize| {
            let mut out = vec![BigInt::one()];
            for k in 0..n {
                let next = &out[k] * v;
                out.push(next);
            }
            out
        };
        let (xn, xd) = (powers(x.numer(), dx), powers(x.denom(), dx));
        let (yn, yd) = (powers(y.numer(), dy), powers(y.denom(), dy));
        let mut s = BigInt::zero();
        for (&(i, j), c) in &self.terms {
            let (i, j) = (i as usize, j as usize);
            s += c * &xn[i] * &xd[dx - i] * &yn[j] * &yd[dy - j];
        }
        BigRational::new(s, &xd[dx] * &yd[dy])
    }
}

/// `num / tau^pow`.
#[derive(Clone, Debug)]
pub struct RatFn {
    pub num: Poly2,
    pub pow: u32,
}

impl RatFn {
    /// `d/dx (P / tau^n) = (P_x tau - n P tau_x) / tau^(n+1)`.
    pub fn dx(&self, tau: &Poly2, tau_x: &Poly2) -> Self {
        let num = self.num.dx().mul(tau).sub(&self.num.mul(tau_x).scale(self.pow as i64));
        Self { num, pow: self.pow + 1 }
    }

    pub fn dy(&self, tau: &Poly2, tau_y: &Poly2) -> Self {
        let num = self.num.dy().mul(tau).sub(&self.num.mul(tau_y).scale(self.pow as i64));
        Self { num, pow: self.pow + 1 }
    }

    pub fn eval_exact(&self, tau: &Poly2, x: &BigRational, y: &BigRational) -> BigRational {
        let t = tau.eval_exact(x, y);
        let mut d = BigRational::one();
        for _ in 0..self.pow {
            d *= &t;
        }
        self.num.eval_exact(x, y) / d
    }
}

#[derive(Clone, Debug)]
pub struct PolyF64 {
    terms: Vec<(f64, i32, i32)>,
}

impl PolyF64 {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.terms.iter().map(|&(c, i, j)| c * x.powi(i) * y.powi(j)).sum()
    }
}
