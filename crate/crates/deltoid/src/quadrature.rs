//! Integration against the deltoid measures through the torus parametrization
//! `Z(t) = (e^{i t1} + e^{i t2} + e^{-i(t1+t2)})/3`.
//!
//! The density `P^alpha` pulls back to `|J|^{2 alpha + 1}` up to a constant,
//! because `|J|^2` is proportional to `P(Z(t))` (see [`jacobian_weight_audit`]).

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num::{Integer, Signed, ToPrimitive};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::algebra::{rat_int, rational_to_f64, FieldScalar, MPoly, Rational};
use crate::diffusion::DiffusionModel;
use crate::error::QuadratureError;
use crate::models::{deltoid_alpha, deltoid_boundary_value};

/// Sum in a fixed binary tree, independent of thread count.
pub fn pairwise_sum(x: &[f64]) -> f64 {
    if x.len() <= 16 {
        return x.iter().sum();
    }
    let (a, b) = x.split_at(x.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

pub fn torus_z(t1: f64, t2: f64) -> Complex64 {
    (Complex64::from_polar(1.0, t1) + Complex64::from_polar(1.0, t2) + Complex64::from_polar(1.0, -(t1 + t2))) / 3.0
}

/// Jacobian determinant of `t -> (Re Z, Im Z)`.
pub fn torus_jacobian(t1: f64, t2: f64) -> f64 {
    let e3 = Complex64::from_polar(1.0, -(t1 + t2));
    let i = Complex64::new(0.0, 1.0);
    let d1 = i * (Complex64::from_polar(1.0, t1) - e3) / 3.0;
    let d2 = i * (Complex64::from_polar(1.0, t2) - e3) / 3.0;
    (d1.conj() * d2).im
}

#[derive(Clone, Debug)]
pub struct TorusGrid {
    pub n: usize,
    pub lambda: Rational,
    pub alpha: Rational,
    nodes: Vec<Complex64>,
    weights: Vec<f64>,
}

impl TorusGrid {
    pub fn new(lambda: &Rational, n: usize) -> Result<Self, QuadratureError> {
        if lambda < &rat_int(1) {
            return Err(QuadratureError::Parameter(format!("torus quadrature needs lambda >= 1, got {lambda}")));
        }
        if n < 16 {
            return Err(QuadratureError::Parameter(format!("grid needs N >= 16, got {n}")));
        }
        let alpha = deltoid_alpha(lambda);
        let expo = 2.0 * rational_to_f64(&alpha) + 1.0;
        let h = 2.0 * PI / n as f64;
        let (nodes, raw): (Vec<Complex64>, Vec<f64>) = (0..n * n)
            .into_par_iter()
            .map(|idx| {
                let (a, b) = (idx / n, idx % n);
                let (t1, t2) = (a as f64 * h, b as f64 * h);
                let j = torus_jacobian(t1, t2).abs();
                let w = if expo == 0.0 { 1.0 } else { j.powf(expo) };
                (torus_z(t1, t2), w)
            })
            .unzip();
        let total = pairwise_sum(&raw);
        if !total.is_finite() || total <= 0.0 {
            return Err(QuadratureError::Parameter("weights do not normalize".into()));
        }
        let weights = raw.iter().map(|w| w / total).collect();
        Ok(TorusGrid { n, lambda: lambda.clone(), alpha, nodes, weights })
    }

    pub fn nodes(&self) -> impl Iterator<Item = (Complex64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F>(&self, f: F) -> f64
    where
        F: Fn(Complex64) -> f64 + Sync,
    {
        let v: Vec<f64> = self.nodes.par_iter().zip(&self.weights).map(|(z, w)| f(*z) * w).collect();
        pairwise_sum(&v)
    }

    pub fn integrate_complex<F>(&self, f: F) -> Complex64
    where
        F: Fn(Complex64) -> Complex64 + Sync,
    {
        let v: Vec<Complex64> = self.nodes.par_iter().zip(&self.weights).map(|(z, w)| f(*z) * *w).collect();
        let re: Vec<f64> = v.iter().map(|c| c.re).collect();
        let im: Vec<f64> = v.iter().map(|c| c.im).collect();
        Complex64::new(pairwise_sum(&re), pairwise_sum(&im))
    }

    /// Integral of a polynomial in `(Z, Zb)`.
    pub fn integrate_poly(&self, f: &MPoly) -> Complex64 {
        let c = f.compile();
        self.integrate_complex(|z| c.eval(&[z, z.conj()]))
    }

    /// Pairwise inner products of real-valued polynomials.
    pub fn gram(&self, basis: &[MPoly]) -> DMatrix<f64> {
        let compiled: Vec<_> = basis.iter().map(|p| p.compile()).collect();
        let values: Vec<Vec<f64>> =
            compiled.par_iter().map(|c| self.nodes.iter().map(|z| c.eval(&[*z, z.conj()]).re).collect()).collect();
        let m = basis.len();
        let pairs: Vec<(usize, usize)> = (0..m).flat_map(|a| (a..m).map(move |b| (a, b))).collect();
        let entries: Vec<f64> = pairs
            .par_iter()
            .map(|&(a, b)| {
                let prod: Vec<f64> = (0..self.len()).map(|i| self.weights[i] * values[a][i] * values[b][i]).collect();
                pairwise_sum(&prod)
            })
            .collect();
        let mut g = DMatrix::zeros(m, m);
        for ((a, b), v) in pairs.into_iter().zip(entries) {
            g[(a, b)] = v;
            g[(b, a)] = v;
        }
        g
    }

    /// `|int f L(g) + int Gamma(f, g)|`.
    pub fn selfadjoint_residual(&self, model: &DiffusionModel, f: &MPoly, g: &MPoly) -> Result<f64, QuadratureError> {
        let h = &(f * &model.l_apply(g)?) + &model.gamma_apply(f, g)?;
        Ok(self.integrate_poly(&h).norm())
    }
}

/// Exact 12th roots of unity as field elements.
fn root12(k: i64) -> FieldScalar {
    let half = || FieldScalar::ratio(1, 2);
    let h3 = || FieldScalar::sqrt3().scale(&crate::algebra::rat(1, 2));
    let i = FieldScalar::i();
    let (c, s) = match k.rem_euclid(12) {
        0 => (FieldScalar::one(), FieldScalar::zero()),
        1 => (h3(), half()),
        2 => (half(), h3()),
        3 => (FieldScalar::zero(), FieldScalar::one()),
        4 => (-half(), h3()),
        5 => (-h3(), half()),
        6 => (FieldScalar::from_int(-1), FieldScalar::zero()),
        7 => (-h3(), -half()),
        8 => (-half(), -h3()),
        9 => (FieldScalar::zero(), FieldScalar::from_int(-1)),
        10 => (half(), -h3()),
        _ => (h3(), -half()),
    };
    &c + &(&i * &s)
}

/// Exact trapezoid rule on an `N x N` grid with `N | 12`, for lambda where the
/// weight `|J|^{(2 lambda - 2)/3}` is an even power of `J` (lambda = 1, 4, 7, ...).
pub fn integrate_exact(f: &MPoly, lambda: &Rational, n: usize) -> Result<FieldScalar, QuadratureError> {
    if n == 0 || 12 % n != 0 {
        return Err(QuadratureError::Parameter(format!("exact mode needs N dividing 12, got {n}")));
    }
    let e = (lambda * rat_int(2) - rat_int(2)) / rat_int(3);
    let e = if e.is_integer() && !e.is_negative() && e.to_integer().is_even() {
        e.to_integer().to_u32().ok_or_else(|| QuadratureError::Parameter("exponent overflow".into()))?
    } else {
        return Err(QuadratureError::Parameter(format!("exact mode needs (2 lambda - 2)/3 even, lambda = {lambda}")));
    };
    let step = (12 / n) as i64;
    let third = FieldScalar::ratio(1, 3);
    let i = FieldScalar::i();
    let mut num = FieldScalar::zero();
    let mut den = FieldScalar::zero();
    for a in 0..n as i64 {
        for b in 0..n as i64 {
            let u1 = root12(a * step);
            let u2 = root12(b * step);
            let u3 = root12(-(a + b) * step);
            let z = &(&(&u1 + &u2) + &u3) * &third;
            let d1 = &(&i * &(&u1 - &u3)) * &third;
            let d2 = &(&i * &(&u2 - &u3)) * &third;
            let jac = (&d1.conj() * &d2).im();
            let w = jac.pow(e);
            num += &(&f.eval_exact(&[z.clone(), z.conj()]) * &w);
            den += &w;
        }
    }
    num.checked_div(&den).map_err(QuadratureError::from)
}

#[derive(Clone, Debug)]
pub struct JacobianAudit {
    pub n: usize,
    pub nodes_used: usize,
    pub ratio_median: f64,
    pub max_rel_deviation: f64,
    /// Max relative deviation of `P^{-1/2} |J|` from its median.
    pub lambda1_weight_deviation: f64,
    /// Max of `|J|` and `|P|` over nodes with `t1 = t2`.
    pub critical_max: (f64, f64),
}

/// Audit `|J(t)|^2 / P(Z(t))` over grid nodes with `P > 1e-6`.
pub fn jacobian_weight_audit(n: usize) -> JacobianAudit {
    let h = 2.0 * PI / n as f64;
    let mut ratios = Vec::new();
    let mut w1 = Vec::new();
    let mut crit: (f64, f64) = (0.0, 0.0);
    for a in 0..n {
        for b in 0..n {
            let (t1, t2) = (a as f64 * h, b as f64 * h);
            let j = torus_jacobian(t1, t2);
            let p = deltoid_boundary_value(torus_z(t1, t2));
            if a == b {
                crit = (crit.0.max(j.abs()), crit.1.max(p.abs()));
            }
            if p > 1e-6 {
                ratios.push(j * j / p);
                w1.push(j.abs() / p.sqrt());
            }
        }
    }
    let med = |v: &mut Vec<f64>| {
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v[v.len() / 2]
    };
    let dev = |v: &[f64], m: f64| v.iter().map(|x| (x - m).abs() / m).fold(0.0, f64::max);
    let rm = med(&mut ratios);
    let wm = med(&mut w1);
    JacobianAudit {
        n,
        nodes_used: ratios.len(),
        ratio_median: rm,
        max_rel_deviation: dev(&ratios, rm),
        lambda1_weight_deviation: dev(&w1, wm),
        critical_max: crit,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, VarList};
    use crate::models::deltoid_model;

    #[test]
    fn refuses_bad_parameters() {
        assert!(TorusGrid::new(&rat(1, 2), 64).is_err());
        assert!(TorusGrid::new(&rat_int(1), 8).is_err());
    }

    #[test]
    fn constants_and_mean_zero() {
        let g = TorusGrid::new(&rat_int(4), 64).unwrap();
        assert!((g.integrate(|_| 1.0) - 1.0).abs() < 1e-14);
        assert!(g.integrate(|z| z.re).abs() < 1e-10);
    }

    #[test]
    fn audit_ratio_is_a_third() {
        let a = jacobian_weight_audit(64);
        assert!(a.max_rel_deviation < 1e-9);
        assert!((a.ratio_median - 1.0 / 3.0).abs() < 1e-12);
        assert!(a.lambda1_weight_deviation < 1e-9);
        assert!(a.critical_max.0 < 1e-12 && a.critical_max.1 < 1e-12);
    }

    #[test]
    fn exact_mode_residual_is_zero() {
        let m = deltoid_model(&rat_int(1)).unwrap();
        let v = VarList::new(&["Z", "Zb"]);
        let g = MPoly::parse(&v, "(1)*Z^2*Zb + (2)*Zb^2").unwrap();
        let lg = m.l_apply(&g).unwrap();
        assert!(integrate_exact(&lg, &rat_int(1), 12).unwrap().is_zero());
        let one = MPoly::one(&v);
        assert!(integrate_exact(&one, &rat_int(4), 12).unwrap().is_one());
        assert!(integrate_exact(&one, &rat(5, 2), 12).is_err());
    }
}
