//! Eigenpolynomials by graded triangular solve.

use std::cmp::Reverse;
use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{rat_int, CompiledPoly, FieldScalar, MPoly, Monomial, Rational};
use crate::diffusion::DiffusionModel;
use crate::error::{QuadratureError, SpectralError};
use crate::models::deltoid_model;
use crate::quadrature::TorusGrid;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Flavor {
    R,
    P,
    Q,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenPoly {
    pub n: u32,
    pub k: u32,
    /// `mu` with `L(poly) = -mu * poly`.
    pub eigenvalue: Rational,
    /// Leading-coefficient normalization.
    pub poly: MPoly,
    pub flavor: Flavor,
    /// L2 norm of `poly`, once computed.
    pub norm: Option<f64>,
}

impl EigenPoly {
    /// Factor turning `poly` into a unit-norm function.
    pub fn unit_scale(&self) -> Option<f64> {
        self.norm.map(|n| 1.0 / n)
    }
}

/// `lambda_{n,k} = (lambda - 1)(n + k) + n^2 + k^2 + n k`.
pub fn lambda_nk(lambda: &Rational, n: u32, k: u32) -> Rational {
    let (n, k) = (n as i64, k as i64);
    (lambda - rat_int(1)) * rat_int(n + k) + rat_int(n * n + k * k + n * k)
}

/// Solve order for a graded triangular basis.
pub trait Grading: Sync {
    /// Larger keys come first; `L` must map a monomial to itself plus smaller keys.
    fn key(&self, exps: &[u32]) -> (u32, u32, u32);
}

/// Total degree, then lexicographic in the exponents (deltoid).
pub struct TotalDegree;

impl Grading for TotalDegree {
    fn key(&self, e: &[u32]) -> (u32, u32, u32) {
        (e[0] + e[1], e[0], e[1])
    }
}

/// Weighted degree `r + 2t` of `s^r p^t`, then the exponent of `s` (G2).
pub struct WeightedG2;

impl Grading for WeightedG2 {
    fn key(&self, e: &[u32]) -> (u32, u32, u32) {
        (e[0] + 2 * e[1], e[0], e[1])
    }
}

/// Eigenpolynomial with leading monomial `lead`, supported on the closure of
/// `lead` under the operator.
pub fn graded_solve(
    model: &DiffusionModel,
    lead: &[u32],
    grading: &dyn Grading,
) -> Result<(MPoly, Rational), SpectralError> {
    let vars = model.vars().clone();
    if lead.len() != vars.len() {
        return Err(SpectralError::Parameter("leading exponent length".into()));
    }
    let mut images: HashMap<Vec<u32>, MPoly> = HashMap::new();
    let mut stack = vec![lead.to_vec()];
    while let Some(m) = stack.pop() {
        if images.contains_key(&m) {
            continue;
        }
        let img = model.l_apply(&MPoly::monomial(&vars, &m, FieldScalar::one()))?;
        for (t, _) in img.terms() {
            let e = t.exps().to_vec();
            if e != m && grading.key(&e) >= grading.key(&m) {
                return Err(SpectralError::NotTriangular(format!("{m:?} -> {e:?}")));
            }
            if !images.contains_key(&e) {
                stack.push(e);
            }
        }
        images.insert(m, img);
    }
    let mut order: Vec<Vec<u32>> = images.keys().cloned().collect();
    order.sort_by_key(|e| Reverse(grading.key(e)));
    let diag = |e: &Vec<u32>| images[e].coeff(e);
    let mu = -diag(&order[0]);
    let mu_r = mu.as_rational().cloned().ok_or_else(|| SpectralError::Parameter("non-rational diagonal".into()))?;
    let mut coeff: BTreeMap<Vec<u32>, FieldScalar> = BTreeMap::new();
    let mut residual: HashMap<Vec<u32>, FieldScalar> = HashMap::new();
    for e in &order {
        let c = if e == &order[0] {
            FieldScalar::one()
        } else {
            let r = residual.remove(e).unwrap_or_default();
            let d = &diag(e) + &mu;
            if d.is_zero() {
                return Err(SpectralError::Collision { a: e[0], b: e.get(1).copied().unwrap_or(0) });
            }
            -(&r / &d)
        };
        if c.is_zero() {
            continue;
        }
        for (t, x) in images[e].terms() {
            if t.exps() != e.as_slice() {
                *residual.entry(t.exps().to_vec()).or_default() += &(x * &c);
            }
        }
        coeff.insert(e.clone(), c);
    }
    let poly = MPoly::from_terms(&vars, coeff.into_iter().map(|(e, c)| (Monomial(e), c)));
    Ok((poly, mu_r))
}

fn check_vars(model: &DiffusionModel, want: &[&str]) -> Result<(), SpectralError> {
    if model.vars().names() != want {
        return Err(SpectralError::Parameter(format!("model variables {:?}, expected {want:?}", model.vars().names())));
    }
    Ok(())
}

/// `R_{n,k}`: the eigenpolynomial with leading term `Z^n Zb^k`.
pub fn eigen_r(model: &DiffusionModel, n: u32, k: u32) -> Result<EigenPoly, SpectralError> {
    check_vars(model, &["Z", "Zb"])?;
    let (poly, eigenvalue) = graded_solve(model, &[n, k], &TotalDegree)?;
    Ok(EigenPoly { n, k, eigenvalue, poly, flavor: Flavor::R, norm: None })
}

/// `Phat = (R_{n,k} + R_{k,n})/2`, `Qhat = -i (R_{n,k} - R_{k,n})/2` (zero when `n = k`).
pub fn eigen_pq(model: &DiffusionModel, n: u32, k: u32) -> Result<(EigenPoly, EigenPoly), SpectralError> {
    let r = eigen_r(model, n, k)?;
    let rc = r.poly.conj_swap(&[("Z", "Zb")])?;
    Ok(pq_from_r(&r, &rc))
}

fn pq_from_r(r: &EigenPoly, r_kn: &MPoly) -> (EigenPoly, EigenPoly) {
    let half = FieldScalar::ratio(1, 2);
    let mhalf_i = &FieldScalar::i() * &FieldScalar::ratio(-1, 2);
    let p = (&r.poly + r_kn).scale(&half);
    let q = (&r.poly - r_kn).scale(&mhalf_i);
    let mk = |poly, flavor| EigenPoly { n: r.n, k: r.k, eigenvalue: r.eigenvalue.clone(), poly, flavor, norm: None };
    (mk(p, Flavor::P), mk(q, Flavor::Q))
}

/// Exact checks of the rotation structure under `(Z, Zb) -> (jZ, jbar Zb)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotationReport {
    pub n: u32,
    pub k: u32,
    /// The 2x2 form: `Phat(jZ) = c Phat + i s Qhat`, `Qhat(jZ) = -i s Phat + c Qhat`
    /// with `c = (j^m + jbar^m)/2`, `s = (j^m - jbar^m)/2`, `m = n - k`.
    pub matrix_form: bool,
    /// `omega` with `(Phat + i Qhat)(jZ) = omega (Phat + i Qhat)`, canonical text.
    pub factor_hat: Option<String>,
    /// `(P + i Q)(jZ) = jbar^m (P + i Q)` with `Q = Qhat`.
    pub compact_form_hat: bool,
    /// The same with the sign choice `Q = -Qhat`.
    pub compact_form_flipped: bool,
}

impl RotationReport {
    /// Both forms hold, the compact one for the sign choice `Q = -Qhat` when `m != 0 mod 3`.
    pub fn holds(&self) -> bool {
        self.matrix_form && self.compact_form_flipped
    }
}

fn proportional(a: &MPoly, b: &MPoly) -> Option<FieldScalar> {
    let (m, c) = b.leading_term()?;
    let ratio = &a.coeff(m.exps()) / c;
    (&b.scale(&ratio) == a).then_some(ratio)
}

pub fn verify_rotation(model: &DiffusionModel, n: u32, k: u32) -> Result<RotationReport, SpectralError> {
    let (p, q) = eigen_pq(model, n, k)?;
    let m = n as i64 - k as i64;
    let rot = |f: &MPoly| f.rotate_j(&[1, -1]);
    let jm = FieldScalar::j_pow(m);
    let jbm = FieldScalar::j_pow(-m);
    let c = (&jm + &jbm).scale(&crate::algebra::rat(1, 2));
    let s = (&jm - &jbm).scale(&crate::algebra::rat(1, 2));
    let i = FieldScalar::i();
    let (pr, qr) = (rot(&p.poly), rot(&q.poly));
    let matrix_form =
        pr == &p.poly.scale(&c) + &q.poly.scale(&(&i * &s)) && qr == &p.poly.scale(&-(&i * &s)) + &q.poly.scale(&c);
    let plus = &p.poly + &q.poly.scale(&i);
    let minus = &p.poly - &q.poly.scale(&i);
    let factor_hat = proportional(&rot(&plus), &plus);
    Ok(RotationReport {
        n,
        k,
        matrix_form,
        factor_hat: factor_hat.as_ref().map(|f| f.to_string()),
        compact_form_hat: rot(&plus) == plus.scale(&jbm),
        compact_form_flipped: rot(&minus) == minus.scale(&jbm),
    })
}

/// Eigenpolynomials of a G2 model with leading terms `s^r p^t`, `r + 2t = d`.
/// They are indexed `(n, k) = (r + t, t)`, so that the leading term is `s^{n-k} p^k`.
pub fn eigen_g2(model: &DiffusionModel, d: u32) -> Result<Vec<EigenPoly>, SpectralError> {
    check_vars(model, &["s", "p"])?;
    (0..=d / 2)
        .map(|t| {
            let r = d - 2 * t;
            let (poly, eigenvalue) = graded_solve(model, &[r, t], &WeightedG2)?;
            Ok(EigenPoly { n: r + t, k: t, eigenvalue, poly, flavor: Flavor::P, norm: None })
        })
        .collect()
}

/// Attach the L2 norm under the grid's measure.
pub fn norm_and_orthonormalize(e: &EigenPoly, grid: &TorusGrid) -> Result<EigenPoly, QuadratureError> {
    let f = e.poly.compile();
    let sq = grid.integrate(|z| {
        let v = f.eval(&[z, z.conj()]);
        v.norm_sqr()
    });
    if !sq.is_finite() || sq <= 0.0 {
        return Err(QuadratureError::Parameter(format!("norm of ({}, {}) is {sq}", e.n, e.k)));
    }
    let mut out = e.clone();
    out.norm = Some(sq.sqrt());
    Ok(out)
}

/// One eigenspace block `(n, k)`, `n >= k`.
#[derive(Clone, Debug)]
pub struct EigenBlock {
    pub n: u32,
    pub k: u32,
    pub eigenvalue: Rational,
    pub r: MPoly,
    pub p: EigenPoly,
    /// `None` when `n = k`.
    pub q: Option<EigenPoly>,
    p_num: CompiledPoly,
    q_num: Option<CompiledPoly>,
}

impl EigenBlock {
    pub fn p_value(&self, z: Complex64) -> f64 {
        self.p_num.eval(&[z, z.conj()]).re
    }

    pub fn q_value(&self, z: Complex64) -> f64 {
        self.q_num.as_ref().map_or(0.0, |q| q.eval(&[z, z.conj()]).re)
    }

    pub fn rotates(&self) -> bool {
        (self.n as i64 - self.k as i64).rem_euclid(3) != 0
    }
}

/// Immutable table of eigen blocks for one lambda, all `n + k <= degree_max`.
#[derive(Clone, Debug)]
pub struct EigenTable {
    pub lambda: Rational,
    pub degree_max: u32,
    blocks: Vec<EigenBlock>,
    max_deg: usize,
}

impl EigenTable {
    pub fn build(lambda: &Rational, degree_max: u32) -> Result<Self, SpectralError> {
        let model = deltoid_model(lambda).map_err(|e| SpectralError::Parameter(e.to_string()))?;
        let idx: Vec<(u32, u32)> = (0..=degree_max)
            .flat_map(|d| (0..=d).rev().filter(move |&n| 2 * n >= d).map(move |n| (n, d - n)))
            .collect();
        let blocks = idx
            .par_iter()
            .map(|&(n, k)| {
                let r = eigen_r(&model, n, k)?;
                let rc = r.poly.conj_swap(&[("Z", "Zb")])?;
                let (p, q) = pq_from_r(&r, &rc);
                let q = (n != k).then_some(q);
                Ok(EigenBlock {
                    n,
                    k,
                    eigenvalue: r.eigenvalue.clone(),
                    r: r.poly.clone(),
                    p_num: p.poly.compile(),
                    q_num: q.as_ref().map(|q| q.poly.compile()),
                    p,
                    q,
                })
            })
            .collect::<Result<Vec<_>, SpectralError>>()?;
        Ok(EigenTable { lambda: lambda.clone(), degree_max, blocks, max_deg: degree_max as usize })
    }

    /// Blocks ordered by total degree, then by `n` descending.
    pub fn blocks(&self) -> &[EigenBlock] {
        &self.blocks
    }

    pub fn block(&self, n: u32, k: u32) -> Option<&EigenBlock> {
        self.blocks.iter().find(|b| b.n == n && b.k == k)
    }

    /// `(Phat(z), Qhat(z))` for every block, sharing one power table.
    pub fn eval_all(&self, z: Complex64) -> Vec<(f64, f64)> {
        let pw = powers(z, self.max_deg);
        self.blocks
            .iter()
            .map(|b| {
                let p = b.p_num.eval_with_powers(&pw).re;
                let q = b.q_num.as_ref().map_or(0.0, |q| q.eval_with_powers(&pw).re);
                (p, q)
            })
            .collect()
    }
}

pub(crate) fn powers(z: Complex64, d: usize) -> [Vec<Complex64>; 2] {
    let mk = |x: Complex64| {
        let mut v = Vec::with_capacity(d + 1);
        let mut a = Complex64::new(1.0, 0.0);
        v.push(a);
        for _ in 0..d {
            a *= x;
            v.push(a);
        }
        v
    };
    [mk(z), mk(z.conj())]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::models::g2_from_lambda;
    use num::Zero;

    #[test]
    fn low_degree_examples() {
        let l = rat(7, 3);
        let m = deltoid_model(&l).unwrap();
        let r00 = eigen_r(&m, 0, 0).unwrap();
        assert_eq!(r00.poly, MPoly::one(m.vars()));
        assert!(r00.eigenvalue.is_zero());
        let r10 = eigen_r(&m, 1, 0).unwrap();
        assert_eq!(r10.poly, m.var("Z").unwrap());
        assert_eq!(r10.eigenvalue, l);
        let r11 = eigen_r(&m, 1, 1).unwrap();
        let want = MPoly::parse(m.vars(), "(1)*Z*Zb + (-3/17)").unwrap();
        assert_eq!(r11.poly, want);
        assert_eq!(r11.eigenvalue, rat(17, 3));
    }

    #[test]
    fn pq_of_degree_one() {
        let m = deltoid_model(&rat_int(4)).unwrap();
        let (p, q) = eigen_pq(&m, 1, 0).unwrap();
        assert_eq!(p.poly.to_string(), "(1/2)*Z + (1/2)*Zb");
        assert_eq!(q.poly.to_string(), "(-1/2*i)*Z + (1/2*i)*Zb");
        let (_, q11) = eigen_pq(&m, 1, 1).unwrap();
        assert!(q11.poly.is_zero());
    }

    #[test]
    fn rotation_factor() {
        let m = deltoid_model(&rat_int(4)).unwrap();
        let r = verify_rotation(&m, 1, 0).unwrap();
        assert!(r.matrix_form && r.compact_form_flipped && !r.compact_form_hat);
        assert_eq!(r.factor_hat.as_deref(), Some("-1/2+1/2*i*r3"));
        let r = verify_rotation(&m, 3, 0).unwrap();
        assert!(r.matrix_form && r.compact_form_flipped && r.compact_form_hat);
    }

    #[test]
    fn g2_low_degree() {
        let l = rat_int(4);
        let g = g2_from_lambda(&l).unwrap();
        let d1 = eigen_g2(&g, 1).unwrap();
        assert_eq!(d1[0].eigenvalue, l);
        let d2 = eigen_g2(&g, 2).unwrap();
        let lead_p = d2.iter().find(|e| e.k == 1).unwrap();
        assert_eq!(lead_p.poly, MPoly::parse(g.vars(), "(1)*p + (-1/9)").unwrap());
    }
}
