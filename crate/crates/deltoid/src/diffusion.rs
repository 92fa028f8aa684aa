//! Polynomial diffusion operators given by a carré du champ table and a drift.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{parse_rational, solve_linear, FieldScalar, MPoly, Monomial, Rational, VarList};
use crate::error::{AlgebraError, DiffusionError};

/// `L f = sum g^{ij} d_i d_j f + sum b^i d_i f`, with `Gamma(x_i, x_j) = g^{ij}`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiffusionModel {
    name: String,
    vars: VarList,
    gamma: Vec<Vec<MPoly>>,
    drift: Vec<MPoly>,
    params: BTreeMap<String, Rational>,
}

impl DiffusionModel {
    pub fn new(
        name: impl Into<String>,
        vars: VarList,
        gamma: Vec<Vec<MPoly>>,
        drift: Vec<MPoly>,
        params: BTreeMap<String, Rational>,
    ) -> Result<Self, DiffusionError> {
        let n = vars.len();
        if gamma.len() != n || gamma.iter().any(|r| r.len() != n) || drift.len() != n {
            return Err(AlgebraError::Shape(format!("model over {n} variables")).into());
        }
        for p in gamma.iter().flatten().chain(&drift) {
            if p.vars() != &vars {
                return Err(AlgebraError::VariableMismatch("model entries".into()).into());
            }
        }
        for i in 0..n {
            for j in 0..i {
                if gamma[i][j] != gamma[j][i] {
                    return Err(DiffusionError::NotSymmetric(i, j));
                }
            }
        }
        Ok(DiffusionModel { name: name.into(), vars, gamma, drift, params })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vars(&self) -> &VarList {
        &self.vars
    }

    pub fn var(&self, name: &str) -> Result<MPoly, AlgebraError> {
        MPoly::var(&self.vars, name)
    }

    pub fn gamma(&self, i: usize, j: usize) -> &MPoly {
        &self.gamma[i][j]
    }

    pub fn gamma_matrix(&self) -> &[Vec<MPoly>] {
        &self.gamma
    }

    pub fn drift(&self) -> &[MPoly] {
        &self.drift
    }

    pub fn params(&self) -> &BTreeMap<String, Rational> {
        &self.params
    }

    pub fn param(&self, name: &str) -> Option<&Rational> {
        self.params.get(name)
    }

    pub fn gamma_apply(&self, f: &MPoly, g: &MPoly) -> Result<MPoly, AlgebraError> {
        let n = self.vars.len();
        let df: Vec<MPoly> = (0..n).map(|i| f.derivative(i)).collect();
        let dg: Vec<MPoly> = (0..n).map(|i| g.derivative(i)).collect();
        let mut out = MPoly::zero(&self.vars);
        for i in 0..n {
            if df[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if dg[j].is_zero() || self.gamma[i][j].is_zero() {
                    continue;
                }
                out = out.checked_add(&df[i].checked_mul(&dg[j])?.checked_mul(&self.gamma[i][j])?)?;
            }
        }
        Ok(out)
    }

    pub fn l_apply(&self, f: &MPoly) -> Result<MPoly, AlgebraError> {
        let n = self.vars.len();
        let mut out = MPoly::zero(f.vars());
        for i in 0..n {
            let di = f.derivative(i);
            if di.is_zero() {
                continue;
            }
            out = out.checked_add(&di.checked_mul(&self.drift[i])?)?;
            for j in 0..n {
                let dij = di.derivative(j);
                if !dij.is_zero() {
                    out = out.checked_add(&dij.checked_mul(&self.gamma[i][j])?)?;
                }
            }
        }
        Ok(out)
    }

    /// Same operator up to the overall constant `c`: `Gamma = c Gamma'` and `b = c b'`.
    pub fn scaled(&self, c: &FieldScalar) -> DiffusionModel {
        let mut m = self.clone();
        for row in m.gamma.iter_mut() {
            for p in row.iter_mut() {
                *p = p.scale(c);
            }
        }
        for p in m.drift.iter_mut() {
            *p = p.scale(c);
        }
        m
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// First entry where two models over the same variables differ, if any.
    pub fn first_difference(&self, o: &DiffusionModel) -> Option<String> {
        if self.vars != o.vars {
            return Some(format!("variables {:?} vs {:?}", self.vars.names(), o.vars.names()));
        }
        let names = self.vars.names();
        for i in 0..names.len() {
            for j in i..names.len() {
                if self.gamma[i][j] != o.gamma[i][j] {
                    return Some(format!(
                        "Gamma({}, {}): {} vs {}",
                        names[i], names[j], self.gamma[i][j], o.gamma[i][j]
                    ));
                }
            }
        }
        for i in 0..names.len() {
            if self.drift[i] != o.drift[i] {
                return Some(format!("L({}): {} vs {}", names[i], self.drift[i], o.drift[i]));
            }
        }
        None
    }

    pub fn to_document(&self) -> ModelDocument {
        ModelDocument {
            name: self.name.clone(),
            variables: self.vars.names().to_vec(),
            gamma: self.gamma.iter().map(|r| r.iter().map(|p| p.to_string()).collect()).collect(),
            drift: self.drift.iter().map(|p| p.to_string()).collect(),
            params: self.params.iter().map(|(k, v)| (k.clone(), v.to_string())).collect(),
        }
    }

    pub fn from_document(doc: &ModelDocument) -> Result<Self, DiffusionError> {
        let vars = VarList::new(&doc.variables);
        let gamma = doc
            .gamma
            .iter()
            .map(|r| r.iter().map(|t| MPoly::parse(&vars, t)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let drift = doc.drift.iter().map(|t| MPoly::parse(&vars, t)).collect::<Result<Vec<_>, _>>()?;
        let params = doc
            .params
            .iter()
            .map(|(k, v)| Ok((k.clone(), parse_rational(v)?)))
            .collect::<Result<BTreeMap<_, _>, AlgebraError>>()?;
        DiffusionModel::new(doc.name.clone(), vars, gamma, drift, params)
    }
}

/// Serialized form of a model, polynomials in canonical text.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelDocument {
    pub name: String,
    pub variables: Vec<String>,
    pub gamma: Vec<Vec<String>>,
    pub drift: Vec<String>,
    pub params: BTreeMap<String, String>,
}

/// A polynomial map: target variable `k` is sent to `images[k]`, a polynomial in the source variables.
#[derive(Clone, Debug)]
pub struct PolyMap {
    pub target: VarList,
    pub images: Vec<MPoly>,
}

impl PolyMap {
    pub fn new(target: VarList, images: Vec<MPoly>) -> Result<Self, AlgebraError> {
        if images.len() != target.len() {
            return Err(AlgebraError::Shape("one image per target variable".into()));
        }
        if let Some(first) = images.first() {
            if images.iter().any(|p| p.vars() != first.vars()) {
                return Err(AlgebraError::VariableMismatch("map images".into()));
            }
        }
        Ok(PolyMap { target, images })
    }
}

/// Write `expr` as a polynomial in the images, searching monomials `Y^beta` whose
/// substituted degree is at most `deg(expr)`.
pub fn rewrite_in_images(expr: &MPoly, map: &PolyMap) -> Result<Option<MPoly>, AlgebraError> {
    if expr.is_zero() {
        return Ok(Some(MPoly::zero(&map.target)));
    }
    let degs: Vec<u32> = map.images.iter().map(|p| p.total_degree().unwrap_or(0)).collect();
    if degs.contains(&0) {
        return Err(AlgebraError::Shape("constant image in polynomial map".into()));
    }
    let bound = expr.total_degree().unwrap_or(0);
    let mut candidates: Vec<Vec<u32>> = Vec::new();
    enumerate_weighted(&degs, bound, &mut Vec::new(), &mut candidates);
    let source = expr.vars().clone();
    let values: Vec<MPoly> = candidates
        .iter()
        .map(|beta| {
            let mut t = MPoly::one(&source);
            for (img, &e) in map.images.iter().zip(beta) {
                if e > 0 {
                    t = &t * &img.pow(e);
                }
            }
            t
        })
        .collect();
    let mut rows: BTreeMap<Monomial, usize> = BTreeMap::new();
    for p in values.iter().chain(std::iter::once(expr)) {
        for (m, _) in p.terms() {
            let k = rows.len();
            rows.entry(m.clone()).or_insert(k);
        }
    }
    let mut a = vec![vec![FieldScalar::zero(); values.len()]; rows.len()];
    let mut b = vec![FieldScalar::zero(); rows.len()];
    for (col, p) in values.iter().enumerate() {
        for (m, c) in p.terms() {
            a[rows[m]][col] = c.clone();
        }
    }
    for (m, c) in expr.terms() {
        b[rows[m]] = c.clone();
    }
    match solve_linear(&a, &b) {
        Ok(x) => Ok(Some(MPoly::from_terms(&map.target, candidates.into_iter().map(Monomial).zip(x)))),
        Err(AlgebraError::Inconsistent) => Ok(None),
        Err(e) => Err(e),
    }
}

fn enumerate_weighted(w: &[u32], budget: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if cur.len() == w.len() {
        out.push(cur.clone());
        return;
    }
    let wi = w[cur.len()];
    for e in 0..=budget / wi {
        cur.push(e);
        enumerate_weighted(w, budget - e * wi, cur, out);
        cur.pop();
    }
}

/// The operator induced on the image variables, when the map intertwines.
pub fn pushforward(model: &DiffusionModel, map: &PolyMap, name: &str) -> Result<DiffusionModel, DiffusionError> {
    let tn = map.target.names();
    let n = tn.len();
    let mut gamma = vec![vec![MPoly::zero(&map.target); n]; n];
    for i in 0..n {
        for j in i..n {
            let e = model.gamma_apply(&map.images[i], &map.images[j])?;
            let r = rewrite_in_images(&e, map)?
                .ok_or_else(|| DiffusionError::NotClosed { entry: format!("Gamma({}, {})", tn[i], tn[j]) })?;
            gamma[i][j] = r.clone();
            gamma[j][i] = r;
        }
    }
    let mut drift = Vec::with_capacity(n);
    for (i, img) in map.images.iter().enumerate() {
        let e = model.l_apply(img)?;
        drift.push(
            rewrite_in_images(&e, map)?.ok_or_else(|| DiffusionError::NotClosed { entry: format!("L({})", tn[i]) })?,
        );
    }
    DiffusionModel::new(name, map.target.clone(), gamma, drift, model.params.clone())
}

/// Where a measure lives, for bookkeeping and sampling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DomainTag {
    Deltoid,
    Omega1,
    G2,
    Torus,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityFactor {
    pub base: MPoly,
    pub exponent: Rational,
}

/// Density `prod base_k^{exponent_k}` with respect to Lebesgue measure.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureSpec {
    pub factors: Vec<DensityFactor>,
    pub domain: DomainTag,
    pub normalization: Option<f64>,
}

/// Drift making the measure reversible for the given metric:
/// `b^i = sum_j d_j g^{ij} + sum_k e_k Gamma(base_k, x_i) / base_k`.
pub fn drift_from_measure(
    vars: &VarList,
    gamma: &[Vec<MPoly>],
    measure: &MeasureSpec,
) -> Result<Vec<MPoly>, AlgebraError> {
    let n = vars.len();
    let mut drift = Vec::with_capacity(n);
    for i in 0..n {
        let mut b = MPoly::zero(vars);
        for j in 0..n {
            b = b.checked_add(&gamma[i][j].derivative(j))?;
        }
        for f in &measure.factors {
            let mut g = MPoly::zero(vars);
            for j in 0..n {
                g = g.checked_add(&gamma[i][j].checked_mul(&f.base.derivative(j))?)?;
            }
            let q = g.divide_exact(&f.base)?;
            b = b.checked_add(&q.scale_rational(&f.exponent))?;
        }
        drift.push(b);
    }
    Ok(drift)
}

/// Cofactors `c_i` with `Gamma(F, x_i) = c_i F`, or the first variable where `F` fails to divide.
pub fn boundary_ideal_check(model: &DiffusionModel, f: &MPoly) -> Result<Vec<MPoly>, DiffusionError> {
    let mut out = Vec::new();
    for (i, name) in model.vars.names().iter().enumerate() {
        let x = MPoly::var_at(&model.vars, i);
        let g = model.gamma_apply(f, &x)?;
        match g.divide_exact(f) {
            Ok(q) => out.push(q),
            Err(AlgebraError::NotDivisible) => return Err(DiffusionError::BoundaryViolated { var: name.clone() }),
            Err(e) => return Err(e.into()),
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DivergenceReport {
    pub var: String,
    pub computed: MPoly,
    pub expected: MPoly,
}

impl DivergenceReport {
    pub fn holds(&self) -> bool {
        self.computed == self.expected
    }
}

/// `sum_j d_j Gamma(x_i, x_j)` per variable, against `factor * x_i`.
pub fn divergence_identity_check(model: &DiffusionModel, factor: &Rational) -> Vec<DivergenceReport> {
    let n = model.vars.len();
    (0..n)
        .map(|i| {
            let mut s = MPoly::zero(&model.vars);
            for j in 0..n {
                s = &s + &model.gamma[i][j].derivative(j);
            }
            DivergenceReport {
                var: model.vars.names()[i].clone(),
                computed: s,
                expected: MPoly::var_at(&model.vars, i).scale_rational(factor),
            }
        })
        .collect()
}

/// Outcome of checking a lambda-polynomial identity at enough points.
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaProof {
    pub degree_bound: u32,
    pub lambdas: Vec<Rational>,
    pub failure: Option<(Rational, String)>,
}

impl LambdaProof {
    pub fn holds(&self) -> bool {
        self.failure.is_none()
    }
}

/// Prove an identity whose two sides are polynomials of degree at most
/// `degree_bound` in lambda by checking it exactly at `degree_bound + 1`
/// distinct values: a nonzero polynomial of that degree has fewer roots.
pub fn identity_for_all_lambda<F>(
    degree_bound: u32,
    lambdas: &[Rational],
    check: F,
) -> Result<LambdaProof, DiffusionError>
where
    F: Fn(&Rational) -> Result<(), String>,
{
    let mut distinct = lambdas.to_vec();
    distinct.sort();
    distinct.dedup();
    let needed = degree_bound as usize + 1;
    if distinct.len() < needed {
        return Err(DiffusionError::TooFewPoints { needed, got: distinct.len() });
    }
    let mut failure = None;
    for l in lambdas {
        if let Err(why) = check(l) {
            failure = Some((l.clone(), why));
            break;
        }
    }
    Ok(LambdaProof { degree_bound, lambdas: lambdas.to_vec(), failure })
}

/// `2, 3, ..., degree_bound + 2`.
pub fn default_lambda_points(degree_bound: u32) -> Vec<Rational> {
    (0..=degree_bound as i64).map(|k| crate::algebra::rat_int(k + 2)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat_int;

    fn heat_on_line() -> DiffusionModel {
        // Jacobi-type operator on [-1, 1]: Gamma(x, x) = 1 - x^2, L x = -2x
        let v = VarList::new(&["x"]);
        let x = MPoly::var(&v, "x").unwrap();
        let g = &MPoly::one(&v) - &(&x * &x);
        DiffusionModel::new("line", v, vec![vec![g]], vec![x.scale_rational(&rat_int(-2))], BTreeMap::new()).unwrap()
    }

    #[test]
    fn boundary_cofactor_on_interval() {
        let m = heat_on_line();
        let f = m.gamma(0, 0).clone();
        let c = boundary_ideal_check(&m, &f).unwrap();
        assert_eq!(c[0], m.var("x").unwrap().scale_rational(&rat_int(-2)));
    }

    #[test]
    fn drift_from_flat_density() {
        let m = heat_on_line();
        let spec = MeasureSpec { factors: vec![], domain: DomainTag::Torus, normalization: None };
        let b = drift_from_measure(m.vars(), m.gamma_matrix(), &spec).unwrap();
        assert_eq!(b[0], m.var("x").unwrap().scale_rational(&rat_int(-2)));
    }

    #[test]
    fn pushforward_by_square() {
        // y = x^2 on the Jacobi operator gives Gamma(y,y) = 4y(1-y), L y = 2 - 6y
        let m = heat_on_line();
        let x = m.var("x").unwrap();
        let t = VarList::new(&["y"]);
        let map = PolyMap::new(t.clone(), vec![&x * &x]).unwrap();
        let p = pushforward(&m, &map, "sq").unwrap();
        let y = MPoly::var(&t, "y").unwrap();
        assert_eq!(p.gamma(0, 0), &(&y.scale_rational(&rat_int(4)) - &(&y * &y).scale_rational(&rat_int(4))));
        assert_eq!(p.drift()[0], &MPoly::constant(&t, FieldScalar::from_int(2)) - &y.scale_rational(&rat_int(6)));
    }

    #[test]
    fn odd_map_is_not_closed() {
        let m = heat_on_line();
        let x = m.var("x").unwrap();
        let map = PolyMap::new(VarList::new(&["y"]), vec![&(&x * &x) * &x]).unwrap();
        assert!(matches!(pushforward(&m, &map, "cube"), Err(DiffusionError::NotClosed { .. })));
    }

    #[test]
    fn lambda_proof_needs_enough_points() {
        let r = identity_for_all_lambda(2, &[rat_int(1), rat_int(2)], |_| Ok(()));
        assert!(matches!(r, Err(DiffusionError::TooFewPoints { needed: 3, got: 2 })));
        let p = identity_for_all_lambda(1, &default_lambda_points(1), |l| {
            if l == &rat_int(3) {
                Err("bad".into())
            } else {
                Ok(())
            }
        })
        .unwrap();
        assert!(!p.holds());
    }
}
