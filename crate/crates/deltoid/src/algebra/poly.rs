//! Sparse multivariate polynomials over Q(i, sqrt 3).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;

use super::field::{FieldScalar, Rational};
use crate::error::AlgebraError;

/// Ordered list of variable names shared by a family of polynomials.
#[derive(Clone, Debug, Eq)]
pub struct VarList(Arc<[String]>);

impl VarList {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Self {
        VarList(names.iter().map(|s| s.as_ref().to_string()).collect::<Vec<_>>().into())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Result<usize, AlgebraError> {
        self.0.iter().position(|n| n == name).ok_or_else(|| AlgebraError::UnknownVariable(name.to_string()))
    }
}

impl PartialEq for VarList {
    fn eq(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.0, &o.0) || self.0 == o.0
    }
}

/// Exponent vector, ordered graded-lexicographically (total degree first,
/// then lexicographic with the first variable most significant).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    fn div(&self, o: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&o.0) {
            out.push(a.checked_sub(*b)?);
        }
        Some(Monomial(out))
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MPoly {
    vars: VarList,
    terms: BTreeMap<Monomial, FieldScalar>,
}

impl MPoly {
    pub fn zero(vars: &VarList) -> Self {
        MPoly { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &VarList, c: FieldScalar) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(vars.len()), c);
        }
        p
    }

    pub fn one(vars: &VarList) -> Self {
        Self::constant(vars, FieldScalar::one())
    }

    pub fn var(vars: &VarList, name: &str) -> Result<Self, AlgebraError> {
        let i = vars.index_of(name)?;
        Ok(Self::var_at(vars, i))
    }

    pub fn var_at(vars: &VarList, i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Self::monomial(vars, &e, FieldScalar::one())
    }

    pub fn monomial(vars: &VarList, exps: &[u32], c: FieldScalar) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent vector length");
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial(exps.to_vec()), c);
        }
        p
    }

    pub fn from_terms<I>(vars: &VarList, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, FieldScalar)>,
    {
        let mut p = Self::zero(vars);
        for (m, c) in terms {
            assert_eq!(m.0.len(), vars.len(), "exponent vector length");
            p.add_term(m, &c);
        }
        p
    }

    pub fn vars(&self) -> &VarList {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &FieldScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> FieldScalar {
        self.terms.get(&Monomial(exps.to_vec())).cloned().unwrap_or_default()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &FieldScalar)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0)
    }

    /// The constant if the polynomial has no non-constant terms.
    pub fn as_constant(&self) -> Option<FieldScalar> {
        match self.terms.len() {
            0 => Some(FieldScalar::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                (m.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn has_rational_coeffs(&self) -> bool {
        self.terms.values().all(|c| c.as_rational().is_some())
    }

    pub fn has_real_coeffs(&self) -> bool {
        self.terms.values().all(|c| c.is_real())
    }

    fn add_term(&mut self, m: Monomial, c: &FieldScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_vars(&self, o: &MPoly) -> Result<(), AlgebraError> {
        if self.vars == o.vars {
            Ok(())
        } else {
            Err(AlgebraError::VariableMismatch(format!("{:?} vs {:?}", self.vars.names(), o.vars.names())))
        }
    }

    pub fn checked_add(&self, o: &MPoly) -> Result<MPoly, AlgebraError> {
        self.check_vars(o)?;
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, o: &MPoly) -> Result<MPoly, AlgebraError> {
        self.check_vars(o)?;
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), &-c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, o: &MPoly) -> Result<MPoly, AlgebraError> {
        self.check_vars(o)?;
        let mut acc: BTreeMap<Monomial, FieldScalar> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let c = c1 * c2;
                let slot = acc.entry(m1.mul(m2)).or_default();
                *slot += &c;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(MPoly { vars: self.vars.clone(), terms: acc })
    }

    pub fn scale(&self, c: &FieldScalar) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(&self.vars);
        }
        let terms = self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect();
        MPoly { vars: self.vars.clone(), terms }
    }

    pub fn scale_rational(&self, r: &Rational) -> MPoly {
        self.scale(&FieldScalar::from_rational(r.clone()))
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut out = MPoly::one(&self.vars);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Partial derivative with respect to the variable at index `i`.
    pub fn derivative(&self, i: usize) -> MPoly {
        let mut out = MPoly::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut nm = m.clone();
            nm.0[i] -= 1;
            out.add_term(nm, &c.scale(&super::field::rat_int(e as i64)));
        }
        out
    }

    pub fn differentiate(&self, var: &str) -> Result<MPoly, AlgebraError> {
        Ok(self.derivative(self.vars.index_of(var)?))
    }

    /// Replace variable `i` by `images[i]`. All images must share one variable list,
    /// which becomes the variable list of the result.
    pub fn substitute(&self, images: &[MPoly]) -> Result<MPoly, AlgebraError> {
        if images.len() != self.vars.len() {
            return Err(AlgebraError::Shape(format!("{} images for {} variables", images.len(), self.vars.len())));
        }
        let target = match images.first() {
            Some(p) => p.vars.clone(),
            None => return Ok(self.clone()),
        };
        for p in images {
            if p.vars != target {
                return Err(AlgebraError::VariableMismatch("substitution images".into()));
            }
        }
        // power tables, built lazily up to the degree each variable needs
        let mut powers: Vec<Vec<MPoly>> = images.iter().map(|p| vec![MPoly::one(&target), p.clone()]).collect();
        for (i, table) in powers.iter_mut().enumerate() {
            let need = self.degree_in(i) as usize;
            while table.len() <= need {
                let next = &table[table.len() - 1] * &images[i];
                table.push(next);
            }
        }
        let mut out = MPoly::zero(&target);
        for (m, c) in &self.terms {
            let mut t = MPoly::constant(&target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = &t * &powers[i][e as usize];
                }
            }
            for (tm, tc) in t.terms {
                out.add_term(tm, &tc);
            }
        }
        Ok(out)
    }

    /// Swap the paired variables and conjugate every coefficient.
    pub fn conj_swap(&self, pairs: &[(&str, &str)]) -> Result<MPoly, AlgebraError> {
        let mut perm: Vec<usize> = (0..self.vars.len()).collect();
        for (a, b) in pairs {
            let ia = self.vars.index_of(a)?;
            let ib = self.vars.index_of(b)?;
            perm[ia] = ib;
            perm[ib] = ia;
        }
        let mut out = MPoly::zero(&self.vars);
        for (m, c) in &self.terms {
            let mut e = vec![0; m.0.len()];
            for (i, &x) in m.0.iter().enumerate() {
                e[perm[i]] = x;
            }
            out.add_term(Monomial(e), &c.conj());
        }
        Ok(out)
    }

    /// Substitute `x_v -> j^{w_v} x_v`: each term picks up `j^{sum w_v e_v}`.
    pub fn rotate_j(&self, weights: &[i64]) -> MPoly {
        assert_eq!(weights.len(), self.vars.len(), "one weight per variable");
        let mut out = MPoly::zero(&self.vars);
        for (m, c) in &self.terms {
            let k: i64 = m.0.iter().zip(weights).map(|(&e, &w)| e as i64 * w).sum();
            out.add_term(m.clone(), &(c * &FieldScalar::j_pow(k)));
        }
        out
    }

    /// Quotient `self / g` when it is a polynomial.
    ///
    /// Leading-term division in graded-lex order. If `self = q g` then the leading
    /// monomial of every remainder is divisible by that of `g`, so the first
    /// failure proves non-divisibility.
    pub fn divide_exact(&self, g: &MPoly) -> Result<MPoly, AlgebraError> {
        self.check_vars(g)?;
        let (gm, gc) = g.leading_term().ok_or(AlgebraError::DivisionByZero)?;
        let gm = gm.clone();
        let ginv = gc.inv().ok_or(AlgebraError::DivisionByZero)?;
        let mut r = self.clone();
        let mut q = MPoly::zero(&self.vars);
        while let Some((rm, rc)) = r.leading_term() {
            let qm = rm.div(&gm).ok_or(AlgebraError::NotDivisible)?;
            let qc = rc * &ginv;
            for (m, c) in &g.terms {
                r.add_term(m.mul(&qm), &-(c * &qc));
            }
            q.add_term(qm, &qc);
        }
        Ok(q)
    }

    /// Re-express over another variable list containing every variable that occurs.
    pub fn reindex(&self, vars: &VarList) -> Result<MPoly, AlgebraError> {
        // variables absent from the target are fine if they never occur
        let mut map = Vec::with_capacity(self.vars.len());
        for (i, n) in self.vars.names().iter().enumerate() {
            match vars.index_of(n) {
                Ok(k) => map.push(k),
                Err(_) if self.degree_in(i) == 0 => map.push(usize::MAX),
                Err(e) => return Err(e),
            }
        }
        let mut out = MPoly::zero(vars);
        for (m, c) in &self.terms {
            let mut e = vec![0; vars.len()];
            for (i, &x) in m.0.iter().enumerate() {
                if x > 0 {
                    e[map[i]] = x;
                }
            }
            out.add_term(Monomial(e), c);
        }
        Ok(out)
    }

    pub fn map_coeffs(&self, f: impl Fn(&FieldScalar) -> FieldScalar) -> MPoly {
        let mut out = MPoly::zero(&self.vars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &f(c));
        }
        out
    }

    pub fn eval_exact(&self, point: &[FieldScalar]) -> FieldScalar {
        assert_eq!(point.len(), self.vars.len(), "point dimension");
        let mut out = FieldScalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t = &t * &x.pow(e);
                }
            }
            out += &t;
        }
        out
    }

    pub fn eval(&self, point: &[Complex64]) -> Complex64 {
        self.compile().eval(point)
    }

    pub fn compile(&self) -> CompiledPoly {
        CompiledPoly {
            nvars: self.vars.len(),
            max_deg: (0..self.vars.len()).map(|i| self.degree_in(i) as usize).collect(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.0.iter().map(|&e| e as usize).collect(), c.to_complex()))
                .collect(),
        }
    }
}

/// Floating-point copy of a polynomial for fast repeated evaluation.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    nvars: usize,
    max_deg: Vec<usize>,
    terms: Vec<(Vec<usize>, Complex64)>,
}

impl CompiledPoly {
    pub fn eval(&self, point: &[Complex64]) -> Complex64 {
        assert_eq!(point.len(), self.nvars, "point dimension");
        let pows: Vec<Vec<Complex64>> = point
            .iter()
            .zip(&self.max_deg)
            .map(|(&x, &d)| {
                let mut v = Vec::with_capacity(d + 1);
                let mut acc = Complex64::new(1.0, 0.0);
                v.push(acc);
                for _ in 0..d {
                    acc *= x;
                    v.push(acc);
                }
                v
            })
            .collect();
        self.eval_with_powers(&pows)
    }

    /// Evaluate given `pows[i][e] = x_i^e`, shared across many polynomials.
    pub fn eval_with_powers(&self, pows: &[Vec<Complex64>]) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut t = *c;
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t *= pows[i][k];
                }
            }
            s += t;
        }
        s
    }

    pub fn max_degree(&self) -> usize {
        self.max_deg.iter().copied().max().unwrap_or(0)
    }
}

impl<'a> Add<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    /// Panics when the variable lists differ; see [`MPoly::checked_add`].
    fn add(self, o: &MPoly) -> MPoly {
        self.checked_add(o).expect("MPoly add")
    }
}

impl<'a> Sub<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn sub(self, o: &MPoly) -> MPoly {
        self.checked_sub(o).expect("MPoly sub")
    }
}

impl<'a> Mul<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn mul(self, o: &MPoly) -> MPoly {
        self.checked_mul(o).expect("MPoly mul")
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.map_coeffs(|c| -c)
    }
}

macro_rules! owned_poly_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<MPoly> for MPoly {
            type Output = MPoly;
            fn $m(self, o: MPoly) -> MPoly {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a MPoly> for MPoly {
            type Output = MPoly;
            fn $m(self, o: &MPoly) -> MPoly {
                (&self).$m(o)
            }
        }
    };
}
owned_poly_binop!(Add, add);
owned_poly_binop!(Sub, sub);
owned_poly_binop!(Mul, mul);

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

/// Canonical text form: terms in decreasing graded-lex order joined by ` + `,
/// each written `(coeff)` followed by `*var` or `*var^e` factors.
impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (name, &e) in self.vars.names().iter().zip(&m.0) {
                match e {
                    0 => {}
                    1 => write!(f, "*{name}")?,
                    _ => write!(f, "*{name}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

impl MPoly {
    /// Parse the canonical text form over a given variable list.
    pub fn parse(vars: &VarList, text: &str) -> Result<MPoly, AlgebraError> {
        let text = text.trim();
        let mut out = MPoly::zero(vars);
        if text == "0" {
            return Ok(out);
        }
        for term in text.split(" + ") {
            let bad = || AlgebraError::Parse(term.to_string());
            let term = term.trim();
            let rest = term.strip_prefix('(').ok_or_else(bad)?;
            let close = rest.find(')').ok_or_else(bad)?;
            let coeff: FieldScalar = rest[..close].parse()?;
            let mut e = vec![0u32; vars.len()];
            let tail = &rest[close + 1..];
            for factor in tail.split('*').skip(1) {
                let (name, pow) = match factor.split_once('^') {
                    Some((n, p)) => (n, p.parse::<u32>().map_err(|_| bad())?),
                    None => (factor, 1),
                };
                e[vars.index_of(name)?] += pow;
            }
            if !tail.is_empty() && !tail.starts_with('*') {
                return Err(bad());
            }
            out.add_term(Monomial(e), &coeff);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zv() -> VarList {
        VarList::new(&["Z", "Zb"])
    }

    #[test]
    fn grlex_order() {
        let a = Monomial(vec![2, 0]);
        let b = Monomial(vec![1, 1]);
        let c = Monomial(vec![0, 3]);
        assert!(a > b);
        assert!(c > a);
    }

    #[test]
    fn arithmetic_and_text() {
        let v = zv();
        let z = MPoly::var(&v, "Z").unwrap();
        let w = MPoly::var(&v, "Zb").unwrap();
        let p = &(&z * &z) - &w;
        assert_eq!(p.to_string(), "(1)*Z^2 + (-1)*Zb");
        assert_eq!(MPoly::parse(&v, &p.to_string()).unwrap(), p);
        assert_eq!(p.derivative(0).to_string(), "(2)*Z");
    }

    #[test]
    fn exact_division() {
        let v = zv();
        let z = MPoly::var(&v, "Z").unwrap();
        let w = MPoly::var(&v, "Zb").unwrap();
        let f = &(&z + &w) * &(&z - &w);
        assert_eq!(f.divide_exact(&(&z + &w)).unwrap(), &z - &w);
        assert_eq!(f.divide_exact(&(&z + &MPoly::one(&v))), Err(AlgebraError::NotDivisible));
    }

    #[test]
    fn mismatched_vars_are_rejected() {
        let a = MPoly::var(&zv(), "Z").unwrap();
        let b = MPoly::var(&VarList::new(&["s", "p"]), "s").unwrap();
        assert!(matches!(a.checked_add(&b), Err(AlgebraError::VariableMismatch(_))));
    }

    #[test]
    fn rotation_and_conjugation() {
        let v = zv();
        let p = MPoly::monomial(&v, &[2, 0], FieldScalar::i());
        let r = p.rotate_j(&[1, -1]);
        assert_eq!(r.coeff(&[2, 0]), &FieldScalar::i() * &FieldScalar::jbar());
        let c = p.conj_swap(&[("Z", "Zb")]).unwrap();
        assert_eq!(c.coeff(&[0, 2]), -FieldScalar::i());
    }
}
