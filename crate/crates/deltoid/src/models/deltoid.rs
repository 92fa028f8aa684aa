//! The deltoid model in the complex coordinates (Z, Zb).

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num::Signed;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{rat, rat_int, FieldScalar, MPoly, Rational, VarList};
use crate::diffusion::{DensityFactor, DiffusionModel, DomainTag, MeasureSpec, PolyMap};
use crate::error::ModelError;

pub fn deltoid_vars() -> VarList {
    VarList::new(&["Z", "Zb"])
}

fn zz() -> (VarList, MPoly, MPoly) {
    let v = deltoid_vars();
    let z = MPoly::var_at(&v, 0);
    let w = MPoly::var_at(&v, 1);
    (v, z, w)
}

/// Metric of the deltoid model (independent of lambda).
pub fn deltoid_metric() -> Vec<Vec<MPoly>> {
    let (v, z, w) = zz();
    let one = MPoly::one(&v);
    let zzb = (&one - &(&z * &w)).scale_rational(&rat(1, 2));
    let gzz = &w - &(&z * &z);
    let gww = &z - &(&w * &w);
    vec![vec![gzz, zzb.clone()], vec![zzb, gww]]
}

pub fn deltoid_model(lambda: &Rational) -> Result<DiffusionModel, ModelError> {
    if !lambda.is_positive() {
        return Err(ModelError::Parameter(format!("deltoid needs lambda > 0, got {lambda}")));
    }
    let (v, z, w) = zz();
    let drift = vec![z.scale_rational(&-lambda), w.scale_rational(&-lambda)];
    let mut params = BTreeMap::new();
    params.insert("lambda".to_string(), lambda.clone());
    Ok(DiffusionModel::new("deltoid", v, deltoid_metric(), drift, params)?)
}

/// `Gamma(Z,Zb)^2 - Gamma(Z,Z) Gamma(Zb,Zb)` for any model over (Z, Zb).
pub fn boundary_polynomial(model: &DiffusionModel) -> MPoly {
    let g = model.gamma_matrix();
    &(&g[0][1] * &g[0][1]) - &(&g[0][0] * &g[1][1])
}

/// Boundary polynomial of the deltoid: `((1 - Z Zb)/2)^2 - (Zb - Z^2)(Z - Zb^2)`.
pub fn deltoid_boundary() -> MPoly {
    let g = deltoid_metric();
    &(&g[0][1] * &g[0][1]) - &(&g[0][0] * &g[1][1])
}

pub fn deltoid_boundary_value(z: Complex64) -> f64 {
    let w = z.conj();
    let a = (1.0 - z * w) / 2.0;
    (a * a - (w - z * z) * (z - w * w)).re
}

/// Exponent of P in the reversible density: `(2 lambda - 5) / 6`.
pub fn deltoid_alpha(lambda: &Rational) -> Rational {
    (lambda * rat_int(2) - rat_int(5)) / rat_int(6)
}

pub fn deltoid_measure(lambda: &Rational) -> MeasureSpec {
    MeasureSpec {
        factors: vec![DensityFactor { base: deltoid_boundary(), exponent: deltoid_alpha(lambda) }],
        domain: DomainTag::Deltoid,
        normalization: None,
    }
}

/// `(Z, Zb) -> (s, p) = (Z + Zb, Z Zb)`.
pub fn psi_map() -> PolyMap {
    let (_, z, w) = zz();
    PolyMap::new(VarList::new(&["s", "p"]), vec![&z + &w, &z * &w]).expect("psi map")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Membership {
    Interior,
    Boundary,
    Exterior,
}

#[derive(Clone, Debug)]
pub struct MembershipReport {
    pub class: Membership,
    pub roots: [Complex64; 3],
    pub p_value: f64,
    /// True when the root test agrees with the sign of P.
    pub consistent: bool,
}

const ROOT_TOL: f64 = 1e-9;

/// Roots of `X^3 - 3 Z X^2 + 3 Zb X - 1` by Cardano on the depressed cubic.
pub fn deltoid_cubic_roots(z: Complex64) -> [Complex64; 3] {
    let w = z.conj();
    // X = Y + Z gives Y^3 + p Y + q with p = 3(Zb - Z^2), q = -2 Z^3 + 3 Z Zb - 1
    let p = 3.0 * (w - z * z);
    let q = -2.0 * z * z * z + 3.0 * z * w - 1.0;
    let disc = (q * q / 4.0 + p * p * p / 27.0).sqrt();
    let mut u3 = -q / 2.0 + disc;
    if (-q / 2.0 - disc).norm() > u3.norm() {
        u3 = -q / 2.0 - disc;
    }
    let omega = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
    let mut out = [z; 3];
    if u3.norm() == 0.0 {
        return out;
    }
    let u = u3.cbrt();
    for (k, slot) in out.iter_mut().enumerate() {
        let uk = u * omega.powi(k as i32);
        *slot = z + uk - p / (3.0 * uk);
    }
    out
}

pub fn membership_report(z: Complex64) -> MembershipReport {
    let roots = deltoid_cubic_roots(z);
    let p_value = deltoid_boundary_value(z);
    let mut min_gap = f64::INFINITY;
    for a in 0..3 {
        for b in a + 1..3 {
            min_gap = min_gap.min((roots[a] - roots[b]).norm());
        }
    }
    let max_mod_err = roots.iter().map(|r| (r.norm() - 1.0).abs()).fold(0.0, f64::max);
    // floating roots spread like sqrt(eps) near a double root: P itself decides there
    let numerically_multiple = p_value.abs() <= 1e-14 && max_mod_err <= 1e-4;
    let class = if min_gap <= ROOT_TOL || numerically_multiple {
        Membership::Boundary
    } else if max_mod_err <= ROOT_TOL {
        Membership::Interior
    } else {
        Membership::Exterior
    };
    let consistent = match class {
        Membership::Interior => p_value > 0.0,
        Membership::Exterior => p_value < 0.0,
        Membership::Boundary => p_value.abs() < 1e-8,
    };
    MembershipReport { class, roots, p_value, consistent }
}

pub fn membership_deltoid(z: Complex64) -> Membership {
    membership_report(z).class
}

/// A pair of torus angles.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaPair {
    pub t1: f64,
    pub t2: f64,
}

fn dist_mod_2pi(x: f64) -> f64 {
    let r = x.rem_euclid(2.0 * PI);
    r.min(2.0 * PI - r)
}

impl ThetaPair {
    pub fn new(t1: f64, t2: f64) -> Self {
        ThetaPair { t1, t2 }
    }

    /// Distance (mod 2 pi) to the lines where two of the three phases coincide.
    pub fn degeneracy_margin(&self) -> f64 {
        let (a, b) = (self.t1, self.t2);
        dist_mod_2pi(a - b).min(dist_mod_2pi(2.0 * a + b)).min(dist_mod_2pi(a + 2.0 * b))
    }

    /// True when Z(theta) lies in the open deltoid.
    pub fn is_interior_image(&self, margin: f64) -> bool {
        self.degeneracy_margin() > margin
    }

    pub fn phases(&self) -> [Complex64; 3] {
        [
            Complex64::from_polar(1.0, self.t1),
            Complex64::from_polar(1.0, self.t2),
            Complex64::from_polar(1.0, -(self.t1 + self.t2)),
        ]
    }

    pub fn neg(&self) -> Self {
        ThetaPair::new(-self.t1, -self.t2)
    }
}

pub fn z_of_theta(theta: &ThetaPair) -> Complex64 {
    let e = theta.phases();
    (e[0] + e[1] + e[2]) / 3.0
}

pub fn phi_theta(point: &[Complex64; 3], theta: &ThetaPair) -> [Complex64; 3] {
    let e = theta.phases();
    [e[0] * point[0], e[1] * point[1], e[2] * point[2]]
}

/// Point of the deltoid curve `(2 cos t + cos 2t)/3 + i (2 sin t - sin 2t)/3`.
pub fn deltoid_curve(t: f64) -> Complex64 {
    Complex64::new((2.0 * t.cos() + (2.0 * t).cos()) / 3.0, (2.0 * t.sin() - (2.0 * t).sin()) / 3.0)
}

/// Exact cusps `1, j, jbar`.
pub fn cusps() -> [FieldScalar; 3] {
    [FieldScalar::one(), FieldScalar::j(), FieldScalar::jbar()]
}

/// Sign of an exact value of P at an exact point, for oracle use.
pub fn boundary_sign_exact(z: &FieldScalar) -> std::cmp::Ordering {
    let v = deltoid_boundary().eval_exact(&[z.clone(), z.conj()]);
    v.real_sign().expect("P is real at conjugate points")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffusion::drift_from_measure;

    #[test]
    fn rejects_nonpositive_lambda() {
        assert!(deltoid_model(&rat_int(0)).is_err());
        assert!(deltoid_model(&rat(-1, 2)).is_err());
    }

    #[test]
    fn reversible_measure_gives_the_drift() {
        for l in [rat(1, 1), rat(5, 2), rat(4, 1), rat(11, 2)] {
            let m = deltoid_model(&l).unwrap();
            let b = drift_from_measure(m.vars(), m.gamma_matrix(), &deltoid_measure(&l)).unwrap();
            assert_eq!(b, m.drift());
        }
    }

    #[test]
    fn membership_examples() {
        assert_eq!(membership_deltoid(Complex64::new(0.0, 0.0)), Membership::Interior);
        assert_eq!(membership_deltoid(Complex64::new(1.0, 0.0)), Membership::Boundary);
        assert_eq!(membership_deltoid(Complex64::new(2.0, 0.0)), Membership::Exterior);
    }

    #[test]
    fn theta_examples() {
        let z = z_of_theta(&ThetaPair::new(0.0, 0.0));
        assert!((z - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let a = 2.0 * PI / 3.0;
        let z = z_of_theta(&ThetaPair::new(a, a));
        assert!((z - FieldScalar::j().to_complex()).norm() < 1e-15);
        let th = ThetaPair::new(0.7, -2.1);
        assert!((z_of_theta(&th.neg()) - z_of_theta(&th).conj()).norm() < 1e-15);
        assert!(!ThetaPair::new(0.3, 0.3).is_interior_image(1e-3));
    }

    #[test]
    fn exact_cusps_are_on_the_boundary() {
        for c in cusps() {
            assert_eq!(boundary_sign_exact(&c), std::cmp::Ordering::Equal);
        }
        assert_eq!(boundary_sign_exact(&FieldScalar::zero()), std::cmp::Ordering::Greater);
    }
}
