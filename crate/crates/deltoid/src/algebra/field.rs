//! Exact scalars in Q(i, sqrt 3).
//!
//! An element is stored as `a + b*i + c*r3 + d*i*r3` with rational parts, where
//! `r3` is the positive square root of 3. The cube root of unity
//! `j = -1/2 + i*sqrt(3)/2` lives here, which is all the rotation and cusp
//! arithmetic needs.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use num_complex::Complex64;

use crate::error::AlgebraError;

pub type Rational = BigRational;

/// Rational from a numerator/denominator pair of machine integers.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn rat_int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Parse "p" or "p/q".
pub fn parse_rational(s: &str) -> Result<Rational, AlgebraError> {
    let s = s.trim();
    let bad = || AlgebraError::Parse(s.to_string());
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(AlgebraError::DivisionByZero);
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    // to_f64 on BigRational handles huge numerators and denominators
    r.to_f64().unwrap_or(f64::NAN)
}

/// Element of Q(sqrt 3), used internally for products.
#[derive(Clone)]
struct Q3(Rational, Rational);

impl Q3 {
    fn mul(&self, o: &Q3) -> Q3 {
        let three = rat_int(3);
        let mut re = Rational::zero();
        let mut ir = Rational::zero();
        if !self.0.is_zero() {
            if !o.0.is_zero() {
                re += &self.0 * &o.0;
            }
            if !o.1.is_zero() {
                ir += &self.0 * &o.1;
            }
        }
        if !self.1.is_zero() {
            if !o.1.is_zero() {
                re += &self.1 * &o.1 * &three;
            }
            if !o.0.is_zero() {
                ir += &self.1 * &o.0;
            }
        }
        Q3(re, ir)
    }
    fn add(&self, o: &Q3) -> Q3 {
        Q3(&self.0 + &o.0, &self.1 + &o.1)
    }
    fn sub(&self, o: &Q3) -> Q3 {
        Q3(&self.0 - &o.0, &self.1 - &o.1)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct FieldScalar {
    a: Rational,
    b: Rational,
    c: Rational,
    d: Rational,
}

impl FieldScalar {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        FieldScalar { a, b, c, d }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(a: Rational) -> Self {
        FieldScalar { a, ..Self::default() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat_int(n))
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        Self::from_rational(rat(p, q))
    }

    pub fn i() -> Self {
        FieldScalar { b: Rational::one(), ..Self::default() }
    }

    pub fn sqrt3() -> Self {
        FieldScalar { c: Rational::one(), ..Self::default() }
    }

    /// Primitive cube root of unity -1/2 + i sqrt(3)/2.
    pub fn j() -> Self {
        FieldScalar { a: rat(-1, 2), d: rat(1, 2), ..Self::default() }
    }

    pub fn jbar() -> Self {
        Self::j().conj()
    }

    /// `j^k` for any integer k.
    pub fn j_pow(k: i64) -> Self {
        match k.rem_euclid(3) {
            0 => Self::one(),
            1 => Self::j(),
            _ => Self::jbar(),
        }
    }

    pub fn parts(&self) -> [&Rational; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    /// The rational value, if the scalar has no i or sqrt 3 part.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.b.is_zero() && self.c.is_zero() && self.d.is_zero() {
            Some(&self.a)
        } else {
            None
        }
    }

    /// True when the scalar is real, i.e. in Q(sqrt 3).
    pub fn is_real(&self) -> bool {
        self.b.is_zero() && self.d.is_zero()
    }

    /// Complex conjugation (i -> -i).
    pub fn conj(&self) -> Self {
        FieldScalar { a: self.a.clone(), b: -&self.b, c: self.c.clone(), d: -&self.d }
    }

    /// The Galois automorphism sqrt 3 -> -sqrt 3.
    fn conj_r3(&self) -> Self {
        FieldScalar { a: self.a.clone(), b: self.b.clone(), c: -&self.c, d: -&self.d }
    }

    /// Real and imaginary parts as elements of Q(sqrt 3) (returned with zero i-parts).
    pub fn re(&self) -> Self {
        FieldScalar { a: self.a.clone(), c: self.c.clone(), ..Self::default() }
    }

    pub fn im(&self) -> Self {
        FieldScalar { a: self.b.clone(), c: self.d.clone(), ..Self::default() }
    }

    fn split(&self) -> (Q3, Q3) {
        (Q3(self.a.clone(), self.c.clone()), Q3(self.b.clone(), self.d.clone()))
    }

    fn join(u: Q3, v: Q3) -> Self {
        FieldScalar { a: u.0, c: u.1, b: v.0, d: v.1 }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // x * conj(x) lies in Q(sqrt 3); multiplying by its r3-conjugate lands in Q
        let w = self * &self.conj();
        let wc = w.conj_r3();
        let n = (&w * &wc).as_rational().cloned()?;
        let num = &self.conj() * &wc;
        Some(num.scale(&(Rational::one() / n)))
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self, AlgebraError> {
        let inv = o.inv().ok_or(AlgebraError::DivisionByZero)?;
        Ok(self * &inv)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        FieldScalar { a: &self.a * r, b: &self.b * r, c: &self.c * r, d: &self.d * r }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = &out * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        out
    }

    pub fn to_complex(&self) -> Complex64 {
        let r3 = 3f64.sqrt();
        let f = rational_to_f64;
        Complex64::new(f(&self.a) + r3 * f(&self.c), f(&self.b) + r3 * f(&self.d))
    }

    /// Sign of a real scalar a + c sqrt 3, decided exactly.
    pub fn real_sign(&self) -> Option<std::cmp::Ordering> {
        if !self.is_real() {
            return None;
        }
        use std::cmp::Ordering::*;
        let sa = self.a.signum();
        let sc = self.c.signum();
        let sgn = |x: &Rational| {
            if x.is_positive() {
                Greater
            } else if x.is_negative() {
                Less
            } else {
                Equal
            }
        };
        if self.c.is_zero() {
            return Some(sgn(&self.a));
        }
        if self.a.is_zero() || sa == sc {
            return Some(sgn(&self.c));
        }
        // opposite signs: compare a^2 with 3 c^2
        let lhs = &self.a * &self.a;
        let rhs = &self.c * &self.c * rat_int(3);
        Some(match lhs.cmp(&rhs) {
            Equal => Equal,
            Greater => sgn(&self.a),
            Less => sgn(&self.c),
        })
    }
}

impl From<Rational> for FieldScalar {
    fn from(r: Rational) -> Self {
        Self::from_rational(r)
    }
}

impl From<i64> for FieldScalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl<'a> Add<&'a FieldScalar> for &'a FieldScalar {
    type Output = FieldScalar;
    fn add(self, o: &FieldScalar) -> FieldScalar {
        FieldScalar { a: &self.a + &o.a, b: &self.b + &o.b, c: &self.c + &o.c, d: &self.d + &o.d }
    }
}

impl<'a> Sub<&'a FieldScalar> for &'a FieldScalar {
    type Output = FieldScalar;
    fn sub(self, o: &FieldScalar) -> FieldScalar {
        FieldScalar { a: &self.a - &o.a, b: &self.b - &o.b, c: &self.c - &o.c, d: &self.d - &o.d }
    }
}

impl<'a> Mul<&'a FieldScalar> for &'a FieldScalar {
    type Output = FieldScalar;
    fn mul(self, o: &FieldScalar) -> FieldScalar {
        if let (Some(x), Some(y)) = (self.as_rational(), o.as_rational()) {
            return FieldScalar::from_rational(x * y);
        }
        if let Some(x) = self.as_rational() {
            return o.scale(x);
        }
        if let Some(y) = o.as_rational() {
            return self.scale(y);
        }
        let (u, v) = self.split();
        let (u2, v2) = o.split();
        let re = u.mul(&u2).sub(&v.mul(&v2));
        let im = u.mul(&v2).add(&v.mul(&u2));
        FieldScalar::join(re, im)
    }
}

impl<'a> Div<&'a FieldScalar> for &'a FieldScalar {
    type Output = FieldScalar;
    /// Panics on division by zero; see [`FieldScalar::checked_div`].
    fn div(self, o: &FieldScalar) -> FieldScalar {
        self.checked_div(o).expect("division by zero in FieldScalar")
    }
}

impl Neg for &FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        FieldScalar { a: -&self.a, b: -&self.b, c: -&self.c, d: -&self.d }
    }
}

impl Neg for FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<FieldScalar> for FieldScalar {
            type Output = FieldScalar;
            fn $m(self, o: FieldScalar) -> FieldScalar {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a FieldScalar> for FieldScalar {
            type Output = FieldScalar;
            fn $m(self, o: &FieldScalar) -> FieldScalar {
                (&self).$m(o)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl AddAssign<&FieldScalar> for FieldScalar {
    fn add_assign(&mut self, o: &FieldScalar) {
        self.a += &o.a;
        self.b += &o.b;
        self.c += &o.c;
        self.d += &o.d;
    }
}

impl SubAssign<&FieldScalar> for FieldScalar {
    fn sub_assign(&mut self, o: &FieldScalar) {
        self.a -= &o.a;
        self.b -= &o.b;
        self.c -= &o.c;
        self.d -= &o.d;
    }
}

impl MulAssign<&FieldScalar> for FieldScalar {
    fn mul_assign(&mut self, o: &FieldScalar) {
        *self = &*self * o;
    }
}

/// Canonical text: nonzero parts in the order `a`, `b*i`, `c*r3`, `d*i*r3`,
/// rationals written `p` or `p/q`, signs inline. Zero is `0`.
impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (val, suffix) in [(&self.a, ""), (&self.b, "*i"), (&self.c, "*r3"), (&self.d, "*i*r3")] {
            if val.is_zero() {
                continue;
            }
            let s = format!("{val}{suffix}");
            if !out.is_empty() && !s.starts_with('-') {
                out.push('+');
            }
            out.push_str(&s);
        }
        write!(f, "{out}")
    }
}

impl FromStr for FieldScalar {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, AlgebraError> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(AlgebraError::Parse(s));
        }
        let mut pieces = Vec::new();
        let mut start = 0;
        for (idx, ch) in s.char_indices() {
            if idx > 0 && (ch == '+' || ch == '-') {
                pieces.push(&s[start..idx]);
                start = idx;
            }
        }
        pieces.push(&s[start..]);
        let mut out = FieldScalar::zero();
        for piece in pieces {
            let piece = piece.strip_prefix('+').unwrap_or(piece);
            let (num, unit) = if let Some(p) = piece.strip_suffix("i*r3") {
                (p, FieldScalar::i() * FieldScalar::sqrt3())
            } else if let Some(p) = piece.strip_suffix("r3") {
                (p, FieldScalar::sqrt3())
            } else if let Some(p) = piece.strip_suffix('i') {
                (p, FieldScalar::i())
            } else {
                (piece, FieldScalar::one())
            };
            let num = num.strip_suffix('*').unwrap_or(num);
            let coeff = match num {
                "" => Rational::one(),
                "-" => -Rational::one(),
                _ => parse_rational(num).map_err(|_| AlgebraError::Parse(s.clone()))?,
            };
            out += &unit.scale(&coeff);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn j_is_a_primitive_cube_root() {
        let j = FieldScalar::j();
        assert!(j.pow(3).is_one());
        assert!(!j.is_one());
        let s = &(&FieldScalar::one() + &j) + &j.pow(2);
        assert!(s.is_zero());
        assert_eq!(FieldScalar::jbar(), j.pow(2));
    }

    #[test]
    fn inverse_roundtrip() {
        let x: FieldScalar = "3/2-1*i+2*r3+5/7*i*r3".parse().unwrap();
        let y = x.inv().unwrap();
        assert!((&x * &y).is_one());
        assert!(FieldScalar::zero().inv().is_none());
    }

    #[test]
    fn text_roundtrip() {
        for s in ["0", "1", "-1/2+1/2*i*r3", "3*i", "2/3*r3", "1-2*i+3*r3-4*i*r3"] {
            let x: FieldScalar = s.parse().unwrap();
            assert_eq!(x.to_string(), s);
        }
    }

    #[test]
    fn complex_value() {
        let z = FieldScalar::j().to_complex();
        assert!((z.re + 0.5).abs() < 1e-15);
        assert!((z.im - 3f64.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn sign_of_real_scalars() {
        use std::cmp::Ordering::*;
        let x: FieldScalar = "2-1*r3".parse().unwrap();
        assert_eq!(x.real_sign(), Some(Greater));
        let y: FieldScalar = "1-1*r3".parse().unwrap();
        assert_eq!(y.real_sign(), Some(Less));
        assert_eq!(FieldScalar::i().real_sign(), None);
    }
}
