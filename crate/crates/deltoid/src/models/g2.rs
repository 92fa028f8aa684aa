//! The G2 family on (s, p) = (Z + Zb, Z Zb), and the map Psi_1.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{rat, rat_int, FieldScalar, MPoly, Rational, VarList};
use crate::diffusion::{
    drift_from_measure, pushforward, DensityFactor, DiffusionModel, DomainTag, MeasureSpec, PolyMap,
};
use crate::error::{DiffusionError, ModelError};

pub fn g2_vars() -> VarList {
    VarList::new(&["s", "p"])
}

fn sp() -> (VarList, MPoly, MPoly) {
    let v = g2_vars();
    let s = MPoly::var_at(&v, 0);
    let p = MPoly::var_at(&v, 1);
    (v, s, p)
}

pub fn g2_metric() -> Vec<Vec<MPoly>> {
    let v = g2_vars();
    let parse = |t: &str| MPoly::parse(&v, t).expect("G2 table");
    let gss = parse("(-1)*s^2 + (1)*p + (1)*s + (1)");
    let gsp = parse("(1)*s^2 + (-3/2)*s*p + (-2)*p + (1/2)*s");
    let gpp = parse("(1)*s^3 + (-3)*p^2 + (-3)*s*p + (1)*p");
    vec![vec![gss, gsp.clone()], vec![gsp, gpp]]
}

pub fn g2_determinant() -> MPoly {
    let g = g2_metric();
    &(&g[0][0] * &g[1][1]) - &(&g[0][1] * &g[0][1])
}

/// `Q1 = s^2 - 4p` and `Q2 = det / (Q1 / 4)` by exact division.
pub fn q1_q2() -> (MPoly, MPoly) {
    let (v, s, p) = sp();
    let q1 = &(&s * &s) - &p.scale_rational(&rat_int(4));
    let q2 = g2_determinant().divide_exact(&q1.scale_rational(&rat(1, 4))).expect("Q1/4 divides the G2 determinant");
    debug_assert_eq!(q2.vars(), &v);
    (q1, q2)
}

/// The two printed forms of the cubic factor: the determinant display, then the named one.
pub fn q2_printed_variants() -> [(String, MPoly); 2] {
    let v = g2_vars();
    [
        ("3s^2+12sp+6p-4s^3-1".to_string(), MPoly::parse(&v, "(-4)*s^3 + (3)*s^2 + (12)*s*p + (6)*p + (-1)").unwrap()),
        ("3p^2+12sp+6p-4s^3-1".to_string(), MPoly::parse(&v, "(-4)*s^3 + (3)*p^2 + (12)*s*p + (6)*p + (-1)").unwrap()),
    ]
}

/// Integrability of `Q1^a1 Q2^a2` on the G2 domain.
pub fn g2_params_admissible(a1: &Rational, a2: &Rational) -> bool {
    a1 > &rat_int(-1) && a2 > &rat(-5, 6) && a1 + a2 > rat(-4, 3)
}

pub fn g2_measure(a1: &Rational, a2: &Rational) -> MeasureSpec {
    let (q1, q2) = q1_q2();
    MeasureSpec {
        factors: vec![
            DensityFactor { base: q1, exponent: a1.clone() },
            DensityFactor { base: q2, exponent: a2.clone() },
        ],
        domain: DomainTag::G2,
        normalization: None,
    }
}

pub fn g2_model(a1: &Rational, a2: &Rational) -> Result<DiffusionModel, ModelError> {
    if !g2_params_admissible(a1, a2) {
        return Err(ModelError::Parameter(format!(
            "G2 measure needs a1 > -1, a2 > -5/6, a1 + a2 > -4/3; got ({a1}, {a2})"
        )));
    }
    let v = g2_vars();
    let gamma = g2_metric();
    let drift = drift_from_measure(&v, &gamma, &g2_measure(a1, a2))?;
    let mut params = BTreeMap::new();
    params.insert("alpha1".to_string(), a1.clone());
    params.insert("alpha2".to_string(), a2.clone());
    Ok(DiffusionModel::new("g2", v, gamma, drift, params)?)
}

/// The G2 model obtained from the deltoid at parameter lambda.
pub fn g2_from_lambda(lambda: &Rational) -> Result<DiffusionModel, ModelError> {
    g2_model(&rat(-1, 2), &super::deltoid::deltoid_alpha(lambda))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Psi1Variant {
    /// `(S, P) = (3p - 1, 1 + s^3 - 3ps - 6p)` as printed.
    Printed,
    /// `(S, P) = (3p - 1, 1 + 3s^3 - 9ps - 6p)`, the intertwining solution.
    Corrected,
}

pub fn psi1_polymap(variant: Psi1Variant) -> PolyMap {
    let v = g2_vars();
    let big_s = MPoly::parse(&v, "(3)*p + (-1)").unwrap();
    let big_p = match variant {
        Psi1Variant::Printed => MPoly::parse(&v, "(1)*s^3 + (-3)*s*p + (-6)*p + (1)").unwrap(),
        Psi1Variant::Corrected => MPoly::parse(&v, "(3)*s^3 + (-9)*s*p + (-6)*p + (1)").unwrap(),
    };
    PolyMap::new(g2_vars(), vec![big_s, big_p]).expect("psi1 map")
}

pub fn psi1_map(point: (f64, f64), variant: Psi1Variant) -> (f64, f64) {
    let (s, p) = point;
    let c = match variant {
        Psi1Variant::Printed => 1.0,
        Psi1Variant::Corrected => 3.0,
    };
    (3.0 * p - 1.0, 1.0 + c * s.powi(3) - 3.0 * c * p * s - 6.0 * p)
}

pub fn psi1_map_exact(point: (&FieldScalar, &FieldScalar), variant: Psi1Variant) -> (FieldScalar, FieldScalar) {
    let m = psi1_polymap(variant);
    let x = [point.0.clone(), point.1.clone()];
    (m.images[0].eval_exact(&x), m.images[1].eval_exact(&x))
}

#[derive(Clone, Debug)]
pub struct Psi1Outcome {
    pub variant: Psi1Variant,
    pub alpha1: Rational,
    pub alpha2: Rational,
    /// The induced operator, or why it does not close.
    pub image: Result<DiffusionModel, DiffusionError>,
    /// `c` with `image = c * g2(alpha2, alpha1 of target)`, when one exists.
    pub factor: Option<Rational>,
}

/// Push `g2(a1, a2)` through Psi_1 and look for a constant multiple of `g2(a2, -1/2)`.
pub fn psi1_intertwining(a1: &Rational, a2: &Rational, variant: Psi1Variant) -> Result<Psi1Outcome, ModelError> {
    let source = g2_model(a1, a2)?;
    let image = pushforward(&source, &psi1_polymap(variant), "g2-psi1");
    let mut factor = None;
    if let Ok(img) = &image {
        let target = g2_model(a2, &rat(-1, 2))?;
        let lead = |m: &DiffusionModel| m.gamma(0, 0).coeff(&[2, 0]);
        let (a, b) = (lead(img), lead(&target));
        if let (Some(a), Some(b)) = (a.as_rational(), b.as_rational()) {
            let c = a / b;
            if img.first_difference(&target.scaled(&FieldScalar::from_rational(c.clone()))).is_none() {
                factor = Some(c);
            }
        }
    }
    Ok(Psi1Outcome { variant, alpha1: a1.clone(), alpha2: a2.clone(), image, factor })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q2_matches_the_named_printing() {
        let (_, q2) = q1_q2();
        let [(_, det_display), (_, named)] = q2_printed_variants();
        assert_eq!(q2, named);
        assert_ne!(q2, det_display);
    }

    #[test]
    fn drift_at_the_deltoid_parameters() {
        let l = rat(7, 3);
        let m = g2_from_lambda(&l).unwrap();
        let v = g2_vars();
        assert_eq!(m.drift()[0], MPoly::var_at(&v, 0).scale_rational(&-&l));
        let lp = MPoly::parse(&v, "(-17/3)*p + (1)").unwrap();
        assert_eq!(m.drift()[1], lp);
    }

    #[test]
    fn integrability_bounds() {
        assert!(g2_model(&rat_int(-1), &rat_int(0)).is_err());
        assert!(g2_model(&rat(-1, 2), &rat(-5, 6)).is_err());
        assert!(g2_model(&rat(-9, 10), &rat(-1, 2)).is_err());
        assert!(g2_model(&rat_int(0), &rat_int(0)).is_ok());
    }

    #[test]
    fn corrected_psi1_fixes_the_cusp() {
        assert_eq!(psi1_map((2.0, 1.0), Psi1Variant::Corrected), (2.0, 1.0));
        assert_eq!(psi1_map((2.0, 1.0), Psi1Variant::Printed), (2.0, -3.0));
    }
}
