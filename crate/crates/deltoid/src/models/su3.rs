//! Pointwise check of the SU(3) Casimir table pushed through `Z = trace(g)/3`.

use nalgebra::Matrix3;
use num_complex::Complex64;

use crate::error::ModelError;

/// Scale that turns the printed `Gamma^{SU(3)}` table into the lambda = 4 deltoid table.
pub const SU3_SCALE: f64 = 0.5;
/// Scale stated next to the table in the source text; kept for the comparison.
pub const SU3_STATED_SCALE: f64 = 0.75;

#[derive(Clone, Debug)]
pub struct Su3Check {
    pub z: Complex64,
    /// `SU3_SCALE * Gamma(Z, Z)`, from the matrix entries.
    pub gamma_zz: Complex64,
    pub gamma_zzb: Complex64,
    pub l_z: Complex64,
    /// Max deviation of the three values from the lambda = 4 deltoid table.
    pub residual: f64,
    /// The same with `SU3_STATED_SCALE`.
    pub residual_stated_scale: f64,
    /// `|trace(g^2) - (9 Z^2 - 6 Zb)|`.
    pub trace_identity_residual: f64,
}

pub fn unitarity_residual(g: &Matrix3<Complex64>) -> (f64, f64) {
    let u = g.adjoint() * g - Matrix3::identity();
    let unit = u.iter().map(|x| x.norm()).fold(0.0, f64::max);
    (unit, (g.determinant() - Complex64::new(1.0, 0.0)).norm())
}

pub fn su3_gamma_pointwise(g: &Matrix3<Complex64>) -> Result<Su3Check, ModelError> {
    let (unit, det) = unitarity_residual(g);
    if unit > 1e-10 || det > 1e-10 {
        return Err(ModelError::NotInGroup(format!("unitarity {unit:.2e}, det {det:.2e}")));
    }
    let z = g.trace() / 3.0;
    // Gamma(z_ij, z_kl) = z_ij z_kl - 3 z_il z_kj, Gamma(z_ij, zb_kl) = 3 d_ik d_jl - z_ij zb_kl
    let mut gzz = Complex64::new(0.0, 0.0);
    let mut gzw = Complex64::new(0.0, 0.0);
    for i in 0..3 {
        for k in 0..3 {
            gzz += g[(i, i)] * g[(k, k)] - 3.0 * g[(i, k)] * g[(k, i)];
            let d = if i == k { 3.0 } else { 0.0 };
            gzw += d - g[(i, i)] * g[(k, k)].conj();
        }
    }
    gzz /= 9.0;
    gzw /= 9.0;
    let lz = -8.0 * z;
    let want = [z.conj() - z * z, (1.0 - z * z.conj()) / 2.0, -4.0 * z];
    let raw = [gzz, gzw, lz];
    let resid = |c: f64| raw.iter().zip(&want).map(|(r, w)| (c * r - w).norm()).fold(0.0, f64::max);
    let t2 = (g * g).trace();
    Ok(Su3Check {
        z,
        gamma_zz: SU3_SCALE * gzz,
        gamma_zzb: SU3_SCALE * gzw,
        l_z: SU3_SCALE * lz,
        residual: resid(SU3_SCALE),
        residual_stated_scale: resid(SU3_STATED_SCALE),
        trace_identity_residual: (t2 - (9.0 * z * z - 6.0 * z.conj())).norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_matrix() {
        let c = su3_gamma_pointwise(&Matrix3::identity()).unwrap();
        assert!((c.z - 1.0).norm() < 1e-15);
        assert!(c.gamma_zzb.norm() < 1e-15);
        assert!(c.residual < 1e-14);
        assert!(c.residual_stated_scale > 1.0);
    }

    #[test]
    fn rejects_non_unitary() {
        let g = Matrix3::identity() * Complex64::new(2.0, 0.0);
        assert!(su3_gamma_pointwise(&g).is_err());
    }
}
