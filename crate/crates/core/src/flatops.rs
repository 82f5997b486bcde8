//! Flat-state operators: `L`, `H(0)`, `M_0`, `M_1(eta)`, `T_1`, `T_2`, the
//! bilinear form `m(v, w)` and the quadratic part `J_2`.
//!
//! Internally `D = -i grad` is the real symbol `k`, so every composition is a
//! product of real symbols and dealiased products of (possibly imaginary)
//! intermediate fields. Every `1/D^2` uses the zero-out policy at `k = 0`.

use num_complex::Complex64;

use crate::dispersion::{c_fun, t_fun, PhysicalParams};
use crate::error::Result;
use crate::grid::{Grid, RealField2D, SpectralField2D};
use crate::product::dealiased_product_spectral;

/// A vector field `(u1, u2)` on one grid.
#[derive(Clone, Debug)]
pub struct VectorField2D {
    pub u1: RealField2D,
    pub u2: RealField2D,
}

impl VectorField2D {
    pub fn new(u1: RealField2D, u2: RealField2D) -> Result<Self> {
        u1.grid().check_same(u2.grid())?;
        Ok(Self { u1, u2 })
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self { u1: RealField2D::zeros(grid), u2: RealField2D::zeros(grid) }
    }

    pub fn grid(&self) -> &Grid {
        self.u1.grid()
    }

    /// `(u2, -u1)`.
    pub fn perp(&self) -> Self {
        Self { u1: self.u2.clone(), u2: self.u1.scale(-1.0) }
    }

    /// `grad phi` computed spectrally.
    pub fn gradient(phi: &RealField2D) -> Self {
        let s = phi.transform();
        let g = |j: usize| {
            smul_c(&s, |k1, k2| Complex64::new(0.0, if j == 0 { k1 } else { k2 })).inverse()
        };
        Self { u1: g(0), u2: g(1) }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self { u1: self.u1.add(&o.u1), u2: self.u2.add(&o.u2) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self { u1: self.u1.sub(&o.u1), u2: self.u2.sub(&o.u2) }
    }

    pub fn scale(&self, a: f64) -> Self {
        Self { u1: self.u1.scale(a), u2: self.u2.scale(a) }
    }

    /// `u . w` for a constant vector `w`.
    pub fn dot_const(&self, w: [f64; 2]) -> RealField2D {
        self.u1.scale(w[0]).axpy(w[1], &self.u2)
    }

    /// `sqrt(||u1||_0^2 + ||u2||_0^2)`.
    pub fn norm_l2(&self) -> f64 {
        self.u1.norm_l2().hypot(self.u2.norm_l2())
    }

    pub fn max_abs(&self) -> f64 {
        self.u1.max_abs().max(self.u2.max_abs())
    }

    fn from_spec(s: [SpectralField2D; 2]) -> Self {
        let [a, b] = s;
        Self { u1: a.inverse(), u2: b.inverse() }
    }

    fn to_spec(&self) -> [SpectralField2D; 2] {
        [self.u1.transform(), self.u2.transform()]
    }
}

/// Symbol of `L = alpha D^perp + c(D^2) D`:
/// `(alpha k2 + c(|k|^2) k1, -alpha k1 + c(|k|^2) k2)`.
pub fn l_symbol(k1: f64, k2: f64, alpha: f64) -> [f64; 2] {
    let c = c_fun(k1 * k1 + k2 * k2, alpha);
    [alpha * k2 + c * k1, -alpha * k1 + c * k2]
}

fn smul_c(f: &SpectralField2D, s: impl Fn(f64, f64) -> Complex64) -> SpectralField2D {
    let g = f.grid();
    let (k1, k2) = (g.k1(), g.k2());
    let mut out = f.clone();
    for ((i, j), c) in out.coeffs_mut().indexed_iter_mut() {
        *c *= s(k1[i], k2[j]);
    }
    out
}

/// Multiply by a real symbol.
fn smul(f: &SpectralField2D, s: impl Fn(f64, f64) -> f64) -> SpectralField2D {
    smul_c(f, |a, b| Complex64::new(s(a, b), 0.0))
}

/// Multiply by `s(k) / |k|^2`, zero at `k = 0`.
fn smul_inv_lap(f: &SpectralField2D, s: impl Fn(f64, f64) -> f64) -> SpectralField2D {
    smul(f, |a, b| {
        let q = a * a + b * b;
        if q == 0.0 {
            0.0
        } else {
            s(a, b) / q
        }
    })
}

fn prod(a: &SpectralField2D, b: &SpectralField2D) -> SpectralField2D {
    dealiased_product_spectral(a, b).expect("same grid")
}

fn sum(a: &SpectralField2D, b: &SpectralField2D) -> SpectralField2D {
    a.add(b)
}

fn dot(k1: f64, k2: f64, c: [f64; 2]) -> f64 {
    c[0] * k1 + c[1] * k2
}

/// `c . k^perp = c1 k2 - c2 k1`.
fn dot_perp(k1: f64, k2: f64, c: [f64; 2]) -> f64 {
    c[0] * k2 - c[1] * k1
}

/// `L (c.D)/D^2 f` in spectral form.
fn l_cd(f: &SpectralField2D, c: [f64; 2], alpha: f64) -> [SpectralField2D; 2] {
    let comp = |j: usize| smul_inv_lap(f, |a, b| l_symbol(a, b, alpha)[j] * dot(a, b, c));
    [comp(0), comp(1)]
}

/// `(D/D^2) . g` and `D . g` in spectral form.
fn div_k(g: &[SpectralField2D; 2]) -> SpectralField2D {
    sum(&smul(&g[0], |a, _| a), &smul(&g[1], |_, b| b))
}

/// `L f` returned in its real form `i L f = alpha grad^perp f + c(-Delta) grad f`.
pub fn l_apply(f: &RealField2D, alpha: f64) -> VectorField2D {
    let s = f.transform();
    let comp = |j: usize| smul_c(&s, |a, b| Complex64::new(0.0, l_symbol(a, b, alpha)[j])).inverse();
    VectorField2D { u1: comp(0), u2: comp(1) }
}

/// `H(0) phi = D^2 t(D^2) phi`.
pub fn h0_apply(phi: &RealField2D, alpha: f64) -> RealField2D {
    smul(&phi.transform(), |a, b| {
        let q = a * a + b * b;
        q * t_fun(q, alpha)
    })
    .inverse()
}

/// `H(0)^-1 = c(D^2)/D^2`, zero on the mean.
pub fn h0_inverse_apply(f: &RealField2D, alpha: f64) -> RealField2D {
    smul_inv_lap(&f.transform(), |a, b| c_fun(a * a + b * b, alpha)).inverse()
}

fn m0_spec(g: &[SpectralField2D; 2], alpha: f64) -> [SpectralField2D; 2] {
    // D . g^perp with g^perp = (g2, -g1)
    let h = smul(&g[1], |a, _| a).sub(&smul(&g[0], |_, b| b));
    let comp = |j: usize| smul_inv_lap(&h, |a, b| l_symbol(a, b, alpha)[j]);
    [comp(0), comp(1)]
}

/// `M_0 g = (1/D^2) L D . g^perp`.
pub fn m0_apply(g: &VectorField2D, alpha: f64) -> VectorField2D {
    VectorField2D::from_spec(m0_spec(&g.to_spec(), alpha))
}

/// `M_1(eta) g = M_0(eta (M_0 g)^perp) - grad(eta div g^perp) + alpha eta (M_0 g)^perp`.
pub fn m1_apply(eta: &RealField2D, g: &VectorField2D, alpha: f64) -> Result<VectorField2D> {
    eta.grid().check_same(g.grid())?;
    let e = eta.transform();
    let gs = g.to_spec();
    let h = smul(&gs[1], |a, _| a).sub(&smul(&gs[0], |_, b| b));
    let a = m0_spec(&gs, alpha);
    // M_0(eta a^perp) = -(1/D^2) L D . (eta a)
    let ea = [prod(&e, &a[0]), prod(&e, &a[1])];
    let s = div_k(&ea);
    // -grad(eta grad . g^perp) = D(eta D . g^perp)
    let eh = prod(&e, &h);
    let al = Complex64::new(alpha, 0.0);
    let t3 = [ea[1].scale(al), ea[0].scale(-al)];
    let comp = |j: usize| {
        let t1 = smul_inv_lap(&s, |p, q| -l_symbol(p, q, alpha)[j]);
        let t2 = smul(&eh, |p, q| if j == 0 { p } else { q });
        t1.add(&t2).add(&t3[j])
    };
    Ok(VectorField2D::from_spec([comp(0), comp(1)]))
}

/// `S_1(eta) = eta c^perp`.
pub fn s1_apply(eta: &RealField2D, p: &PhysicalParams) -> VectorField2D {
    let [c1, c2] = p.c_vec();
    VectorField2D { u1: eta.scale(c2), u2: eta.scale(-c1) }
}

/// `S_2(eta) = -(alpha/2) eta^2 c`.
pub fn s2_apply(eta: &RealField2D, p: &PhysicalParams) -> VectorField2D {
    let [c1, c2] = p.c_vec();
    let e = eta.transform();
    let sq = prod(&e, &e).inverse();
    let a = -0.5 * p.alpha;
    VectorField2D { u1: sq.scale(a * c1), u2: sq.scale(a * c2) }
}

/// `T_1(eta) = -L (c.D)/D^2 eta` with `c = (1 - eps^2) c0`.
pub fn t1_apply(eta: &RealField2D, p: &PhysicalParams) -> VectorField2D {
    let [a, b] = l_cd(&eta.transform(), p.c_vec(), p.alpha);
    VectorField2D { u1: a.inverse().scale(-1.0), u2: b.inverse().scale(-1.0) }
}

/// `T_2(eta)`, term by term from its four-term expression.
pub fn t2_apply(eta: &RealField2D, p: &PhysicalParams) -> VectorField2D {
    let (al, c) = (p.alpha, p.c_vec());
    let e = eta.transform();
    let e2 = prod(&e, &e);
    // P = L (c.D)/D^2 eta = -T_1
    let pv = l_cd(&e, c, al);
    let ep = [prod(&e, &pv[0]), prod(&e, &pv[1])];
    let s = div_k(&ep);
    let ce = smul(&e, |a, b| dot(a, b, c));
    let ece = prod(&e, &ce);
    let h = Complex64::new(al, 0.0);
    // -alpha eta L^perp (c.D)/D^2 eta = -alpha eta P^perp
    let tb = [ep[1].scale(-h), ep[0].scale(h)];
    let comp = |j: usize| {
        let ta = smul_inv_lap(&e2, |a, b| 0.5 * al * l_symbol(a, b, al)[j] * dot_perp(a, b, c));
        let tc = smul_inv_lap(&s, |a, b| l_symbol(a, b, al)[j]);
        let td = smul(&ece, |a, b| -(if j == 0 { a } else { b }));
        ta.add(&tb[j]).add(&tc).add(&td)
    };
    VectorField2D::from_spec([comp(0), comp(1)])
}

/// The symmetric bilinear form `m(v, w)` built with `c0`.
pub fn m_bilinear(v: &RealField2D, w: &RealField2D, p: &PhysicalParams) -> Result<RealField2D> {
    v.grid().check_same(w.grid())?;
    Ok(m_spec(&v.transform(), &w.transform(), p).inverse())
}

fn m_spec(v: &SpectralField2D, w: &SpectralField2D, p: &PhysicalParams) -> SpectralField2D {
    let (al, c) = (p.alpha, p.c0_vec);
    let cl = move |a: f64, b: f64| dot(l_symbol(a, b, al)[0], l_symbol(a, b, al)[1], c);
    let av = l_cd(v, c, al);
    let aw = l_cd(w, c, al);
    let half = Complex64::new(0.5, 0.0);
    let t1 = prod(&av[0], &aw[0]).add(&prod(&av[1], &aw[1])).scale(half);
    let vw = prod(v, w);
    let t2 = smul_inv_lap(&vw, |a, b| 0.5 * al * cl(a, b) * dot_perp(a, b, c));
    let vaw = div_k(&[prod(v, &aw[0]), prod(v, &aw[1])]);
    let wav = div_k(&[prod(w, &av[0]), prod(w, &av[1])]);
    let t3 = smul_inv_lap(&vaw.add(&wav), |a, b| 0.5 * cl(a, b));
    let cv = smul(v, |a, b| dot(a, b, c));
    let cw = smul(w, |a, b| dot(a, b, c));
    let t4 = prod(&cv, &cw).scale(half);
    let t5 = smul(&prod(v, &cw).add(&prod(w, &cv)), |a, b| -0.5 * dot(a, b, c));
    t1.add(&t2).add(&t3).add(&t4).add(&t5)
}

/// `J_2(eta)` from its five-term expression with `c = (1 - eps^2) c0`.
pub fn j2_apply(eta: &RealField2D, p: &PhysicalParams) -> RealField2D {
    let (al, c) = (p.alpha, p.c_vec());
    let cl = move |a: f64, b: f64| dot(l_symbol(a, b, al)[0], l_symbol(a, b, al)[1], c);
    let e = eta.transform();
    let pv = l_cd(&e, c, al);
    let t1 = prod(&pv[0], &pv[0]).add(&prod(&pv[1], &pv[1])).scale(Complex64::new(0.5, 0.0));
    let e2 = prod(&e, &e);
    let t2 = smul_inv_lap(&e2, |a, b| 0.5 * al * cl(a, b) * dot_perp(a, b, c));
    let ep = div_k(&[prod(&e, &pv[0]), prod(&e, &pv[1])]);
    let t3 = smul_inv_lap(&ep, cl);
    // c . grad eta
    let cg = smul_c(&e, |a, b| Complex64::new(0.0, dot(a, b, c)));
    let t4 = prod(&cg, &cg).scale(Complex64::new(-0.5, 0.0));
    let t5 = smul_c(&prod(&e, &cg), |a, b| Complex64::new(0.0, dot(a, b, c)));
    t1.add(&t2).add(&t3).add(&t4).add(&t5).inverse()
}

/// `J_2` from the operator form `|T_1|^2/2 - (c.grad eta)^2/2 + T_2.c + alpha eta T_1.c^perp`.
pub fn j2_from_t(eta: &RealField2D, p: &PhysicalParams) -> RealField2D {
    let c = p.c_vec();
    let t1 = t1_apply(eta, p);
    let t2 = t2_apply(eta, p);
    let sq = |f: &RealField2D| {
        let s = f.transform();
        prod(&s, &s).inverse()
    };
    let e = eta.transform();
    let cg = smul_c(&e, |a, b| Complex64::new(0.0, dot(a, b, c))).inverse();
    let t1cp = t1.dot_const([c[1], -c[0]]).transform();
    let et1 = prod(&e, &t1cp).inverse();
    sq(&t1.u1)
        .add(&sq(&t1.u2))
        .scale(0.5)
        .axpy(-0.5, &sq(&cg))
        .add(&t2.dot_const(c))
        .axpy(p.alpha, &et1)
}

/// `(1/D^2)(c0.L)(c0.D) f`.
pub fn cl_cd_apply(f: &RealField2D, p: &PhysicalParams) -> RealField2D {
    let (al, c) = (p.alpha, p.c0_vec);
    smul_inv_lap(&f.transform(), |a, b| {
        let l = l_symbol(a, b, al);
        dot(l[0], l[1], c) * dot(a, b, c)
    })
    .inverse()
}

/// `(1/D^2)(c0.L)(c0.D^perp) f`.
pub fn cl_cdperp_apply(f: &RealField2D, p: &PhysicalParams) -> RealField2D {
    let (al, c) = (p.alpha, p.c0_vec);
    smul_inv_lap(&f.transform(), |a, b| {
        let l = l_symbol(a, b, al);
        dot(l[0], l[1], c) * dot_perp(a, b, c)
    })
    .inverse()
}

/// `(1/D^2)(c0.L) D.(f w)` for a constant vector `w`.
pub fn cl_div_apply(f: &RealField2D, w: [f64; 2], p: &PhysicalParams) -> RealField2D {
    let (al, c) = (p.alpha, p.c0_vec);
    smul_inv_lap(&f.transform(), |a, b| {
        let l = l_symbol(a, b, al);
        dot(l[0], l[1], c) * dot(a, b, w)
    })
    .inverse()
}

fn l_cd_symbol(k: [f64; 2], c: [f64; 2], alpha: f64) -> [f64; 2] {
    let q = k[0] * k[0] + k[1] * k[1];
    if q == 0.0 {
        return [0.0, 0.0];
    }
    let l = l_symbol(k[0], k[1], alpha);
    let ck = dot(k[0], k[1], c) / q;
    [l[0] * ck, l[1] * ck]
}

/// Symbol of `m`: `m(e^{i p.x}, e^{i q.x}) = m_symbol(p, q) e^{i (p+q).x}`.
pub fn m_symbol(p: [f64; 2], q: [f64; 2], params: &PhysicalParams) -> f64 {
    let (al, c) = (params.alpha, params.c0_vec);
    let s = [p[0] + q[0], p[1] + q[1]];
    let ap = l_cd_symbol(p, c, al);
    let aq = l_cd_symbol(q, c, al);
    let cp = dot(p[0], p[1], c);
    let cq = dot(q[0], q[1], c);
    let cs = dot(s[0], s[1], c);
    let mut out = 0.5 * (ap[0] * aq[0] + ap[1] * aq[1]) + 0.5 * cp * cq - 0.5 * cs * (cp + cq);
    let qs = s[0] * s[0] + s[1] * s[1];
    if qs > 0.0 {
        let l = l_symbol(s[0], s[1], al);
        let cl = dot(l[0], l[1], c);
        let sa = s[0] * (ap[0] + aq[0]) + s[1] * (ap[1] + aq[1]);
        out += 0.5 * al * cl * dot_perp(s[0], s[1], c) / qs + 0.5 * cl * sa / qs;
    }
    out
}

/// Max-norm defects of the operator identities at `eta`:
/// `T_1 = M_0 S_1`, `T_2 = M_0 S_2 + M_1(eta) S_1`, the two forms of `J_2`,
/// `J_2 = (1 - eps^2)^2 m(eta, eta)` and `M_0 grad eta = 0`.
pub fn identity_defects(eta: &RealField2D, p: &PhysicalParams) -> Result<Vec<(&'static str, f64)>> {
    let al = p.alpha;
    let s1 = s1_apply(eta, p);
    let t1 = t1_apply(eta, p).sub(&m0_apply(&s1, al)).max_abs();
    let rhs = m0_apply(&s2_apply(eta, p), al).add(&m1_apply(eta, &s1, al)?);
    let t2 = t2_apply(eta, p).sub(&rhs).max_abs();
    let j = j2_apply(eta, p);
    let jt = j.sub(&j2_from_t(eta, p)).max_abs();
    let f = (1.0 - p.eps * p.eps).powi(2);
    let jm = j.sub(&m_bilinear(eta, eta, p)?.scale(f)).max_abs();
    let grad = m0_apply(&VectorField2D::gradient(eta), al).max_abs();
    Ok(vec![
        ("T1 = M0 S1", t1),
        ("T2 = M0 S2 + M1(eta) S1", t2),
        ("J2 five-term = operator form", jt),
        ("J2 = (1 - eps^2)^2 m(eta, eta)", jm),
        ("M0 grad eta = 0", grad),
    ])
}
