//! The lumps `u_1`, `u_2` of the normalized KP-I equation: exact residual,
//! sampled fields and their spectral residual, and the mapped physical lump.

use kpwave::dispersion::{derived_constants, PhysicalParams};
use kpwave::kp::KpModel;
use kpwave::lumps::*;
use kpwave::make_grid;
use num_bigint::BigInt;
use num_rational::BigRational;

fn main() -> kpwave::Result<()> {
    for k in [1u8, 2] {
        let x = BigRational::new(BigInt::from(7), BigInt::from(3));
        let y = BigRational::new(BigInt::from(-5), BigInt::from(11));
        let r = kp_residual_exact(k, &x, &y)?;
        println!("u_{k}: tau = {:?}", tau_polynomial(k)?);
        println!("  u(0, 0) = {:.15}, exact residual at (7/3, -5/11) = {r}", lump_u(k, 0.0, 0.0)?);
        println!("  float residual at (1.5, -2.25) = {:.3e}", kp_residual_pointwise(k, 1.5, -2.25)?);
    }

    let g = make_grid(256, 256, 40.0, 40.0)?;
    let u = lump_field(&g, 1, &NormalizationMap::IDENTITY)?;
    let (_, r) = kp_residual_normalized(&u);
    println!("sampled u_1 on 256^2, L = 40: residual {r:.3e}, relative {:.3e}", r / KpModel::NORMALIZED.residual_scale(&u));

    let d = derived_constants(0.8)?;
    let p = PhysicalParams::new(0.8, d.beta_star + 0.2, 0.0, 0.5)?;
    let map = normalization_map(&p)?;
    let pg = lump_grid(256, 40.0, &map)?;
    let z = mapped_lump(&pg, 1, &p)?;
    let (_, rp) = kp_residual_physical(&z, &p);
    println!("mapped lump (alpha 0.8): A = {:.6}, a = {:.6}, b = {:.6}", map.amp, map.a, map.b);
    println!("  physical residual relative {:.3e}", rp / KpModel::physical(&p).residual_scale(&z));
    Ok(())
}
