//! The six-dimensional lift on three complex variables, and the flat torus model.

use std::collections::BTreeMap;

use nalgebra::{Matrix6, SymmetricEigen};
use num::Signed;
use num_complex::Complex64;

use crate::algebra::{rat, rat_int, FieldScalar, MPoly, Rational, VarList};
use crate::diffusion::{DensityFactor, DiffusionModel, DomainTag, MeasureSpec, PolyMap};
use crate::error::ModelError;

use super::deltoid::deltoid_vars;

pub fn sixdim_vars() -> VarList {
    VarList::new(&["z1", "z2", "z3", "zb1", "zb2", "zb3"])
}

/// Index in {0,1,2} different from `i` and `j`.
fn third(i: usize, j: usize) -> usize {
    3 - i - j
}

fn sixdim_metric(v: &VarList) -> Vec<Vec<MPoly>> {
    let x: Vec<MPoly> = (0..6).map(|i| MPoly::var_at(v, i)).collect();
    let half3 = FieldScalar::ratio(3, 2);
    let mut g = vec![vec![MPoly::zero(v); 6]; 6];
    for i in 0..3 {
        for j in 0..3 {
            let (zz, ww) = if i == j {
                (-(&x[i] * &x[i]), -(&x[i + 3] * &x[i + 3]))
            } else {
                let c = third(i, j);
                (&x[c + 3].scale(&half3) - &(&x[i] * &x[j]), &x[c].scale(&half3) - &(&x[i + 3] * &x[j + 3]))
            };
            g[i][j] = zz;
            g[i + 3][j + 3] = ww;
            let mut zw = (&x[i] * &x[j + 3]).scale_rational(&rat(-1, 2));
            if i == j {
                zw = &zw + &MPoly::constant(v, half3.clone());
            }
            g[i][j + 3] = zw.clone();
            g[j + 3][i] = zw;
        }
    }
    g
}

pub fn sixdim_model(lambda: &Rational) -> Result<DiffusionModel, ModelError> {
    if !lambda.is_positive() {
        return Err(ModelError::Parameter(format!("sixdim needs lambda > 0, got {lambda}")));
    }
    let v = sixdim_vars();
    let drift = (0..6).map(|i| MPoly::var_at(&v, i).scale_rational(&-lambda)).collect();
    let mut params = BTreeMap::new();
    params.insert("lambda".to_string(), lambda.clone());
    Ok(DiffusionModel::new("sixdim", v.clone(), sixdim_metric(&v), drift, params)?)
}

/// `(P1, P2)` as polynomials in the six variables.
pub fn p1_p2() -> (MPoly, MPoly) {
    let v = sixdim_vars();
    let x: Vec<MPoly> = (0..6).map(|i| MPoly::var_at(&v, i)).collect();
    let one = MPoly::one(&v);
    let mut s1 = MPoly::zero(&v);
    let mut s2 = MPoly::zero(&v);
    for i in 0..3 {
        let n = &x[i] * &x[i + 3];
        s2 = &s2 + &(&n * &n);
        s1 = &s1 + &n;
    }
    let sigma4 = &(&(&x[0] * &x[1]) * &x[2]) + &(&(&x[3] * &x[4]) * &x[5]);
    let a = &s1 + &one;
    let p1 = &(&(&MPoly::constant(&v, FieldScalar::from_int(2)) - &(&a * &a)) + &s2.scale_rational(&rat_int(2)))
        + &sigma4.scale_rational(&rat_int(4));
    let b = &s1 - &one;
    let p2 = &(&s2 - &one).scale_rational(&rat_int(2)) - &(&b * &b);
    (p1, p2)
}

/// Exponent of P1 in the reversible density: `(2 lambda - 11) / 6`.
pub fn sixdim_beta(lambda: &Rational) -> Rational {
    (lambda * rat_int(2) - rat_int(11)) / rat_int(6)
}

pub fn sixdim_measure(lambda: &Rational) -> MeasureSpec {
    MeasureSpec {
        factors: vec![DensityFactor { base: p1_p2().0, exponent: sixdim_beta(lambda) }],
        domain: DomainTag::Omega1,
        normalization: None,
    }
}

/// `(z1, z2, z3) -> Z = (z1 + z2 + z3)/3` together with its conjugate.
pub fn pi_map() -> PolyMap {
    let v = sixdim_vars();
    let third = FieldScalar::ratio(1, 3);
    let z = (0..3).fold(MPoly::zero(&v), |acc, i| &acc + &MPoly::var_at(&v, i)).scale(&third);
    let w = (3..6).fold(MPoly::zero(&v), |acc, i| &acc + &MPoly::var_at(&v, i)).scale(&third);
    PolyMap::new(deltoid_vars(), vec![z, w]).expect("pi map")
}

pub type Omega1Point = [Complex64; 3];

pub fn project(point: &Omega1Point) -> Complex64 {
    (point[0] + point[1] + point[2]) / 3.0
}

fn s1_s2(point: &Omega1Point) -> (f64, f64) {
    let n: Vec<f64> = point.iter().map(|z| z.norm_sqr()).collect();
    (n.iter().sum(), n.iter().map(|x| x * x).sum())
}

pub fn p1_value(point: &Omega1Point) -> f64 {
    let (s1, s2) = s1_s2(point);
    2.0 - (s1 + 1.0).powi(2) + 2.0 * s2 + 8.0 * (point[0] * point[1] * point[2]).re
}

pub fn p2_value(point: &Omega1Point) -> f64 {
    let (s1, s2) = s1_s2(point);
    2.0 * (s2 - 1.0) - (s1 - 1.0).powi(2)
}

/// Threshold under which P1 counts as boundary contact.
pub const P1_FLOOR: f64 = 1e-14;

/// Practical membership test for Omega_1.
pub fn omega1_member(point: &Omega1Point) -> bool {
    point.iter().all(|z| z.norm() < 1.0) && p1_value(point) > P1_FLOOR && p2_value(point) < 0.0
}

/// `(S, D, theta)` with `P1 = S cos^2(theta/2) + D sin^2(theta/2)`.
pub fn p1_split(point: &Omega1Point) -> (f64, f64, f64) {
    let r: Vec<f64> = point.iter().map(|z| z.norm()).collect();
    let s0 = r[0] + r[1] + r[2];
    let s1 = -r[0] + r[1] + r[2];
    let s2 = r[0] - r[1] + r[2];
    let s3 = r[0] + r[1] - r[2];
    let s = (1.0 + s0) * (1.0 - s1) * (1.0 - s2) * (1.0 - s3);
    let d = (1.0 - s0) * (1.0 + s1) * (1.0 + s2) * (1.0 + s3);
    let theta: f64 = point.iter().map(|z| z.arg()).sum();
    (s, d, theta)
}

/// Sign audit along the segment from the origin: P1 > 0 and P2 < 0 at every step.
pub fn segment_audit(point: &Omega1Point, steps: usize) -> bool {
    (0..=steps).all(|k| {
        let t = k as f64 / steps as f64;
        let q = [point[0] * t, point[1] * t, point[2] * t];
        p1_value(&q) > 0.0 && p2_value(&q) < 0.0
    })
}

/// Complex metric `Gamma(v_a, v_b)` for `v = (z1, z2, z3, zb1, zb2, zb3)`, evaluated at a point.
pub fn sixdim_gamma_numeric(point: &Omega1Point) -> [[Complex64; 6]; 6] {
    let z = point;
    let w: Vec<Complex64> = z.iter().map(|x| x.conj()).collect();
    let mut g = [[Complex64::new(0.0, 0.0); 6]; 6];
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                g[i][i] = -z[i] * z[i];
                g[i + 3][i + 3] = -w[i] * w[i];
            } else {
                let c = third(i, j);
                g[i][j] = 1.5 * w[c] - z[i] * z[j];
                g[i + 3][j + 3] = 1.5 * z[c] - w[i] * w[j];
            }
            let d = if i == j { 1.5 } else { 0.0 };
            g[i][j + 3] = d - 0.5 * z[i] * w[j];
            g[j + 3][i] = g[i][j + 3];
        }
    }
    g
}

/// Real metric in coordinates `(x1, x2, x3, y1, y2, y3)` with `z_k = x_k + i y_k`.
pub fn sixdim_real_metric(point: &Omega1Point) -> Matrix6<f64> {
    let g = sixdim_gamma_numeric(point);
    let half = Complex64::new(0.5, 0.0);
    let mhalf_i = Complex64::new(0.0, -0.5);
    let mut a = [[Complex64::new(0.0, 0.0); 6]; 6];
    for k in 0..3 {
        a[k][k] = half;
        a[k][k + 3] = half;
        a[k + 3][k] = mhalf_i;
        a[k + 3][k + 3] = -mhalf_i;
    }
    Matrix6::from_fn(|r, c| {
        let mut s = Complex64::new(0.0, 0.0);
        for p in 0..6 {
            for q in 0..6 {
                s += a[r][p] * g[p][q] * a[c][q];
            }
        }
        s.re
    })
}

pub fn smallest_metric_eigenvalue(point: &Omega1Point) -> f64 {
    SymmetricEigen::new(sixdim_real_metric(point)).eigenvalues.min()
}

/// Unit vectors at 120 degrees: `e_i . e_j = 1` if equal, `-1/2` otherwise.
fn e_dot(i: usize, j: usize) -> Rational {
    if i == j {
        rat_int(1)
    } else {
        rat(-1, 2)
    }
}

/// Laplacian acting on `z_k = exp(i <x, e_k>)`, written in the six variables.
pub fn flat_torus_model() -> DiffusionModel {
    let v = sixdim_vars();
    let x: Vec<MPoly> = (0..6).map(|i| MPoly::var_at(&v, i)).collect();
    let mut g = vec![vec![MPoly::zero(&v); 6]; 6];
    for i in 0..3 {
        for j in 0..3 {
            let d = e_dot(i, j);
            g[i][j] = (&x[i] * &x[j]).scale_rational(&-&d);
            g[i + 3][j + 3] = (&x[i + 3] * &x[j + 3]).scale_rational(&-&d);
            g[i][j + 3] = (&x[i] * &x[j + 3]).scale_rational(&d);
            g[j + 3][i] = g[i][j + 3].clone();
        }
    }
    let drift = x.iter().map(|p| -p).collect();
    DiffusionModel::new("flat-torus", v, g, drift, BTreeMap::new()).expect("flat torus model")
}

/// Point of the constraint set `|z_k| = 1`, `z1 z2 z3 = 1` from two angles.
pub fn torus_point(t1: f64, t2: f64) -> Omega1Point {
    [Complex64::from_polar(1.0, t1), Complex64::from_polar(1.0, t2), Complex64::from_polar(1.0, -(t1 + t2))]
}

fn with_conj(p: &Omega1Point) -> Vec<Complex64> {
    vec![p[0], p[1], p[2], p[0].conj(), p[1].conj(), p[2].conj()]
}

#[derive(Clone, Debug)]
pub struct FlatCheck {
    pub points: usize,
    /// Max |sixdim - flat| over all 36 entries.
    pub max_residual: f64,
    /// Same, with the cross terms `Gamma(z_i, zb_j)`, i != j, taken as `+1/2 z_i zb_j`.
    pub max_residual_plus_sign: f64,
    /// Max |Gamma(Z,Z) - (Zb - Z^2)| for the flat model under the constraint.
    pub deltoid_residual: f64,
}

/// Compare the flat model with the six-dimensional one on constrained points.
pub fn flat_check(points: &[(f64, f64)]) -> FlatCheck {
    let flat = flat_torus_model();
    let six = sixdim_model(&rat_int(1)).expect("lambda = 1");
    let fc: Vec<Vec<_>> = flat.gamma_matrix().iter().map(|r| r.iter().map(|p| p.compile()).collect()).collect();
    let sc: Vec<Vec<_>> = six.gamma_matrix().iter().map(|r| r.iter().map(|p| p.compile()).collect()).collect();
    let mut out =
        FlatCheck { points: points.len(), max_residual: 0.0, max_residual_plus_sign: 0.0, deltoid_residual: 0.0 };
    for &(t1, t2) in points {
        let p = torus_point(t1, t2);
        let x = with_conj(&p);
        let mut gz = Complex64::new(0.0, 0.0);
        for a in 0..6 {
            for b in 0..6 {
                let f = fc[a][b].eval(&x);
                let s = sc[a][b].eval(&x);
                out.max_residual = out.max_residual.max((f - s).norm());
                let cross = (a < 3) != (b < 3) && a % 3 != b % 3;
                let printed = if cross { -f } else { f };
                out.max_residual_plus_sign = out.max_residual_plus_sign.max((printed - s).norm());
                if a < 3 && b < 3 {
                    gz += f / 9.0;
                }
            }
        }
        let z = project(&p);
        out.deltoid_residual = out.deltoid_residual.max((gz - (z.conj() - z * z)).norm());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_examples() {
        let m = sixdim_model(&rat_int(2)).unwrap();
        let v = m.vars().clone();
        let g12 = MPoly::parse(&v, "(3/2)*zb3 + (-1)*z1*z2").unwrap();
        assert_eq!(m.gamma(0, 1), &g12);
        let g11b = MPoly::parse(&v, "(-1/2)*z1*zb1 + (3/2)").unwrap();
        assert_eq!(m.gamma(0, 3), &g11b);
    }

    #[test]
    fn p1_p2_values() {
        let (p1, p2) = p1_p2();
        let zero = vec![FieldScalar::zero(); 6];
        assert_eq!(p1.eval_exact(&zero), FieldScalar::one());
        assert_eq!(p2.eval_exact(&zero), FieldScalar::from_int(-3));
        let ones = vec![FieldScalar::one(); 6];
        assert!(p1.eval_exact(&ones).is_zero());
    }

    #[test]
    fn numeric_forms_match_polynomials() {
        let (p1, p2) = p1_p2();
        let pt = [Complex64::new(0.2, 0.1), Complex64::new(-0.3, 0.25), Complex64::new(0.05, -0.4)];
        let x = with_conj(&pt);
        assert!((p1.eval(&x).re - p1_value(&pt)).abs() < 1e-14);
        assert!((p2.eval(&x).re - p2_value(&pt)).abs() < 1e-14);
        let m = sixdim_model(&rat_int(1)).unwrap();
        let g = sixdim_gamma_numeric(&pt);
        for a in 0..6 {
            for b in 0..6 {
                assert!((m.gamma(a, b).eval(&x) - g[a][b]).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn metric_positive_at_origin() {
        let o = [Complex64::new(0.0, 0.0); 3];
        assert!(smallest_metric_eigenvalue(&o) > 0.0);
        assert!(omega1_member(&o));
    }
}
