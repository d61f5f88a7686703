//! Exact coefficient arithmetic.
//!
//! Three coefficient rings are used across the crate: [`Rational`] (plain ℚ),
//! [`Root2Number`] (ℚ(√2)) and [`CoeffScalar`], which adjoins the Laurent
//! symbol β and the polynomial symbol ν (= N²) to ℚ(√2). Generic code is
//! written against [`Coeff`], so hot paths can run over ℚ and lift into the
//! larger rings only when a computation needs them.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms.
pub type Rational = BigRational;

/// Shorthand for the rational `n/d`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p"` or `"p/q"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parsed = match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|e| Error::Parse(format!("{s}: {e}")))?;
            let d = BigInt::from_str(d.trim()).map_err(|e| Error::Parse(format!("{s}: {e}")))?;
            if d.is_zero() {
                return Err(Error::Parse(format!("{s}: zero denominator")));
            }
            Rational::new(n, d)
        }
        None => Rational::from_integer(BigInt::from_str(s).map_err(|e| Error::Parse(format!("{s}: {e}")))?),
    };
    Ok(parsed)
}

/// Serde adapter storing a [`Rational`] as its `"p/q"` string.
pub mod rational_string {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(D::Error::custom)
    }
}

/// Operations shared by every coefficient ring.
///
/// Method names intentionally mirror `num_traits`; import only one of the
/// two traits in a scope that works on [`Rational`] directly.
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign_ref(&mut self, rhs: &Self);
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn from_rational(r: Rational) -> Self;
    fn scale(&self, r: &Rational) -> Self;
    /// Multiplicative inverse, when it exists in this ring.
    fn checked_inverse(&self) -> Option<Self>;
    /// `Some(r)` when the value is a plain rational number.
    fn as_rational(&self) -> Option<Rational>;
    /// Embedding into the largest coefficient ring.
    fn to_scalar(&self) -> CoeffScalar;
    /// Report/cache encoding: `"p/q"` for ℚ, `{a, b}` for ℚ(√2), a term list for [`CoeffScalar`].
    fn to_json(&self) -> serde_json::Value;
    fn from_json(v: &serde_json::Value) -> Result<Self>;

    fn sub_assign_ref(&mut self, rhs: &Self) {
        self.add_assign_ref(&rhs.neg_ref());
    }

    fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.mul_ref(self);
        }
        acc
    }
}

impl Coeff for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_assign_ref(&mut self, rhs: &Self) {
        *self += rhs;
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn from_rational(r: Rational) -> Self {
        r
    }
    fn scale(&self, r: &Rational) -> Self {
        self * r
    }
    fn checked_inverse(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
    fn as_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
    fn to_scalar(&self) -> CoeffScalar {
        CoeffScalar::from_rational(self.clone())
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(self.to_string())
    }
    fn from_json(v: &serde_json::Value) -> Result<Self> {
        v.as_str().ok_or_else(|| Error::Parse(format!("expected rational string, got {v}"))).and_then(parse_rational)
    }
}

/// An element `a + b·√2` of ℚ(√2).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Root2Number {
    a: Rational,
    b: Rational,
}

impl Root2Number {
    pub fn new(a: Rational, b: Rational) -> Self {
        Root2Number { a, b }
    }

    pub fn from_rational(a: Rational) -> Self {
        Root2Number { a, b: Zero::zero() }
    }

    pub fn sqrt2() -> Self {
        Root2Number { a: Zero::zero(), b: One::one() }
    }

    /// `2^(e/2)` for any integer `e`.
    pub fn two_pow_half(e: i64) -> Self {
        let whole = e.div_euclid(2);
        let scale = if whole >= 0 {
            Rational::from_integer(BigInt::from(2).pow(whole as u32))
        } else {
            Rational::new(One::one(), BigInt::from(2).pow((-whole) as u32))
        };
        if e.rem_euclid(2) == 0 {
            Root2Number::from_rational(scale)
        } else {
            Root2Number { a: Zero::zero(), b: scale }
        }
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn sqrt2_part(&self) -> &Rational {
        &self.b
    }

    pub fn is_rational(&self) -> bool {
        Zero::is_zero(&self.b)
    }

    pub fn conjugate(&self) -> Self {
        Root2Number { a: self.a.clone(), b: -&self.b }
    }

    /// Field norm `a² − 2b²`; zero only for the zero element.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - int(2) * &self.b * &self.b
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.norm();
        if Zero::is_zero(&n) {
            return None;
        }
        let c = self.conjugate();
        Some(Root2Number { a: c.a / &n, b: c.b / n })
    }

    /// Integer power; negative exponents need an invertible base.
    pub fn powi(&self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        Some(Coeff::pow(&base, e.unsigned_abs() as u32))
    }
}

impl Add for &Root2Number {
    type Output = Root2Number;
    fn add(self, rhs: &Root2Number) -> Root2Number {
        Root2Number { a: &self.a + &rhs.a, b: &self.b + &rhs.b }
    }
}

impl Sub for &Root2Number {
    type Output = Root2Number;
    fn sub(self, rhs: &Root2Number) -> Root2Number {
        Root2Number { a: &self.a - &rhs.a, b: &self.b - &rhs.b }
    }
}

impl Mul for &Root2Number {
    type Output = Root2Number;
    fn mul(self, rhs: &Root2Number) -> Root2Number {
        let two = int(2);
        Root2Number { a: &self.a * &rhs.a + two * &self.b * &rhs.b, b: &self.a * &rhs.b + &rhs.a * &self.b }
    }
}

impl Neg for &Root2Number {
    type Output = Root2Number;
    fn neg(self) -> Root2Number {
        Root2Number { a: -&self.a, b: -&self.b }
    }
}

impl Coeff for Root2Number {
    fn zero() -> Self {
        Root2Number::default()
    }
    fn one() -> Self {
        Root2Number::from_rational(One::one())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.a) && Zero::is_zero(&self.b)
    }
    fn add_assign_ref(&mut self, rhs: &Self) {
        self.a += &rhs.a;
        self.b += &rhs.b;
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn from_rational(r: Rational) -> Self {
        Root2Number::from_rational(r)
    }
    fn scale(&self, r: &Rational) -> Self {
        Root2Number { a: &self.a * r, b: &self.b * r }
    }
    fn checked_inverse(&self) -> Option<Self> {
        self.inverse()
    }
    fn as_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.a.clone())
    }
    fn to_scalar(&self) -> CoeffScalar {
        CoeffScalar::constant(self.clone())
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("plain data")
    }
    fn from_json(v: &serde_json::Value) -> Result<Self> {
        Ok(Self::deserialize(v)?)
    }
}

impl fmt::Display for Root2Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (Zero::is_zero(&self.a), Zero::is_zero(&self.b)) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}*sqrt2", self.b),
            (false, false) if self.b.is_negative() => {
                write!(f, "{} - {}*sqrt2", self.a, -&self.b)
            }
            (false, false) => write!(f, "{} + {}*sqrt2", self.a, self.b),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Root2Repr {
    a: String,
    b: String,
}

impl Serialize for Root2Number {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Root2Repr { a: self.a.to_string(), b: self.b.to_string() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Root2Number {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = Root2Repr::deserialize(d)?;
        Ok(Root2Number {
            a: parse_rational(&repr.a).map_err(D::Error::custom)?,
            b: parse_rational(&repr.b).map_err(D::Error::custom)?,
        })
    }
}

/// Exponents of the symbols β (Laurent) and ν (polynomial).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct SymbolExponents {
    pub beta: i32,
    pub nu: u32,
}

impl SymbolExponents {
    fn combine(self, other: Self) -> Self {
        SymbolExponents { beta: self.beta + other.beta, nu: self.nu + other.nu }
    }
}

/// A finitely supported sum `Σ c·β^i·ν^j` with `c ∈ ℚ(√2)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct CoeffScalar {
    terms: BTreeMap<SymbolExponents, Root2Number>,
}

impl CoeffScalar {
    pub fn constant(value: Root2Number) -> Self {
        let mut c = CoeffScalar::default();
        c.insert(SymbolExponents::default(), value);
        c
    }

    pub fn from_rational(r: Rational) -> Self {
        Self::constant(Root2Number::from_rational(r))
    }

    /// The monomial `value·β^beta·ν^nu`.
    pub fn monomial(value: Root2Number, beta: i32, nu: u32) -> Self {
        let mut c = CoeffScalar::default();
        c.insert(SymbolExponents { beta, nu }, value);
        c
    }

    /// The symbol β.
    pub fn beta() -> Self {
        Self::monomial(Coeff::one(), 1, 0)
    }

    /// The symbol ν.
    pub fn nu() -> Self {
        Self::monomial(Coeff::one(), 0, 1)
    }

    fn insert(&mut self, key: SymbolExponents, value: Root2Number) {
        if !Coeff::is_zero(&value) {
            self.terms.insert(key, value);
        }
    }

    fn accumulate(&mut self, key: SymbolExponents, value: Root2Number) {
        match self.terms.get_mut(&key) {
            Some(slot) => {
                slot.add_assign_ref(&value);
                if Coeff::is_zero(slot) {
                    self.terms.remove(&key);
                }
            }
            None => self.insert(key, value),
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (SymbolExponents, &Root2Number)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient of `β^0 ν^0` when no symbol occurs.
    pub fn as_root2(&self) -> Option<Root2Number> {
        match self.terms.len() {
            0 => Some(Coeff::zero()),
            1 => self.terms.get(&SymbolExponents::default()).cloned(),
            _ => None,
        }
    }

    pub fn is_beta_free(&self) -> bool {
        self.terms.keys().all(|k| k.beta == 0)
    }

    pub fn is_nu_free(&self) -> bool {
        self.terms.keys().all(|k| k.nu == 0)
    }

    /// True when every stored coefficient has zero √2-part.
    pub fn is_sqrt2_free(&self) -> bool {
        self.terms.values().all(Root2Number::is_rational)
    }

    pub fn mul_root2(&self, x: &Root2Number) -> Self {
        let mut out = CoeffScalar::default();
        for (k, v) in &self.terms {
            out.insert(*k, v * x);
        }
        out
    }

    /// Multiplicative inverse of a single-term scalar `c·β^i` (ν must not occur).
    pub fn inverse(&self) -> Option<Self> {
        let mut it = self.terms.iter();
        let (k, v) = it.next()?;
        if it.next().is_some() || k.nu != 0 {
            return None;
        }
        Some(Self::monomial(v.inverse()?, -k.beta, 0))
    }

    /// Evaluates β → `beta0`, ν → `nu0`; a ring homomorphism into ℚ(√2).
    pub fn specialize(&self, beta0: &Root2Number, nu0: &Root2Number) -> Result<Root2Number> {
        if Coeff::is_zero(beta0) {
            return Err(Error::Domain("β is a Laurent symbol and cannot be specialized at 0".into()));
        }
        let mut acc: Root2Number = Coeff::zero();
        for (k, v) in &self.terms {
            let b = beta0.powi(k.beta as i64).expect("nonzero base is invertible");
            let n = Coeff::pow(nu0, k.nu);
            acc.add_assign_ref(&(&(v * &b) * &n));
        }
        Ok(acc)
    }
}

impl Coeff for CoeffScalar {
    fn zero() -> Self {
        CoeffScalar::default()
    }
    fn one() -> Self {
        CoeffScalar::constant(Coeff::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add_assign_ref(&mut self, rhs: &Self) {
        for (k, v) in &rhs.terms {
            self.accumulate(*k, v.clone());
        }
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        let mut out = CoeffScalar::default();
        for (k1, v1) in &self.terms {
            for (k2, v2) in &rhs.terms {
                out.accumulate(k1.combine(*k2), v1 * v2);
            }
        }
        out
    }
    fn neg_ref(&self) -> Self {
        CoeffScalar { terms: self.terms.iter().map(|(k, v)| (*k, -v)).collect() }
    }
    fn from_rational(r: Rational) -> Self {
        CoeffScalar::from_rational(r)
    }
    fn scale(&self, r: &Rational) -> Self {
        let mut out = CoeffScalar::default();
        for (k, v) in &self.terms {
            out.insert(*k, v.scale(r));
        }
        out
    }
    fn checked_inverse(&self) -> Option<Self> {
        self.inverse()
    }
    fn as_rational(&self) -> Option<Rational> {
        self.as_root2()?.as_rational()
    }
    fn to_scalar(&self) -> CoeffScalar {
        self.clone()
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("plain data")
    }
    fn from_json(v: &serde_json::Value) -> Result<Self> {
        Ok(Self::deserialize(v)?)
    }
}

impl Add for &CoeffScalar {
    type Output = CoeffScalar;
    fn add(self, rhs: &CoeffScalar) -> CoeffScalar {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Sub for &CoeffScalar {
    type Output = CoeffScalar;
    fn sub(self, rhs: &CoeffScalar) -> CoeffScalar {
        let mut out = self.clone();
        out.sub_assign_ref(rhs);
        out
    }
}

impl Mul for &CoeffScalar {
    type Output = CoeffScalar;
    fn mul(self, rhs: &CoeffScalar) -> CoeffScalar {
        self.mul_ref(rhs)
    }
}

impl Neg for &CoeffScalar {
    type Output = CoeffScalar;
    fn neg(self) -> CoeffScalar {
        self.neg_ref()
    }
}

impl fmt::Display for CoeffScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, v) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let symbolic = k.beta != 0 || k.nu != 0;
            if symbolic && !v.is_rational() {
                write!(f, "({v})")?;
            } else {
                write!(f, "{v}")?;
            }
            match k.beta {
                0 => {}
                1 => write!(f, "*beta")?,
                e => write!(f, "*beta^{e}")?,
            }
            match k.nu {
                0 => {}
                1 => write!(f, "*nu")?,
                e => write!(f, "*nu^{e}")?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct ScalarTermRepr {
    beta: i32,
    nu: u32,
    value: Root2Number,
}

impl Serialize for CoeffScalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<ScalarTermRepr> =
            self.terms.iter().map(|(k, v)| ScalarTermRepr { beta: k.beta, nu: k.nu, value: v.clone() }).collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CoeffScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<ScalarTermRepr>::deserialize(d)?;
        let mut out = CoeffScalar::default();
        for t in terms {
            out.add_assign_ref(&CoeffScalar::monomial(t.value, t.beta, t.nu));
        }
        Ok(out)
    }
}

/// An exponent of ħ, stored in thirds so that `k − 1/3` and `k − 2/3` are exact.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct HbarExponent(i64);

impl HbarExponent {
    pub const ZERO: HbarExponent = HbarExponent(0);

    pub fn from_int(n: i64) -> Self {
        HbarExponent(3 * n)
    }

    pub fn from_thirds(thirds: i64) -> Self {
        HbarExponent(thirds)
    }

    pub fn thirds(self) -> i64 {
        self.0
    }

    /// The exponent as an integer, if it is one.
    pub fn as_int(self) -> Option<i64> {
        (self.0 % 3 == 0).then_some(self.0 / 3)
    }

    pub fn value(self) -> Rational {
        rat(self.0, 3)
    }
}

impl Add for HbarExponent {
    type Output = HbarExponent;
    fn add(self, rhs: HbarExponent) -> HbarExponent {
        HbarExponent(self.0 + rhs.0)
    }
}

impl Sub for HbarExponent {
    type Output = HbarExponent;
    fn sub(self, rhs: HbarExponent) -> HbarExponent {
        HbarExponent(self.0 - rhs.0)
    }
}

impl fmt::Display for HbarExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

impl Serialize for HbarExponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.value().to_string())
    }
}

impl<'de> Deserialize<'de> for HbarExponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = parse_rational(&String::deserialize(d)?).map_err(D::Error::custom)?;
        let thirds = r * int(3);
        if !thirds.is_integer() {
            return Err(D::Error::custom("ħ-exponent denominator must divide 3"));
        }
        let n: i64 = num_traits::ToPrimitive::to_i64(thirds.numer())
            .ok_or_else(|| D::Error::custom("ħ-exponent out of range"))?;
        Ok(HbarExponent(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r2(a: i64, b: i64) -> Root2Number {
        Root2Number::new(int(a), int(b))
    }

    #[test]
    fn root2_products() {
        assert_eq!(&r2(0, 1) * &r2(0, 1), r2(2, 0));
        let x = Root2Number::new(rat(3, 7), rat(-2, 5));
        assert_eq!(&r2(1, 0) * &x, x);
        assert_eq!(&r2(1, 1) * &r2(1, -1), r2(-1, 0));
    }

    #[test]
    fn two_pow_half_values() {
        assert_eq!(Root2Number::two_pow_half(0), r2(1, 0));
        assert_eq!(Root2Number::two_pow_half(1), r2(0, 1));
        assert_eq!(Root2Number::two_pow_half(4), r2(4, 0));
        assert_eq!(Root2Number::two_pow_half(-1), Root2Number::new(int(0), rat(1, 2)));
        assert_eq!(Root2Number::two_pow_half(-2), Root2Number::new(rat(1, 2), int(0)));
    }

    #[test]
    fn specialize_examples() {
        let c = CoeffScalar::beta();
        assert_eq!(c.specialize(&r2(2, 0), &r2(17, 3)).unwrap(), r2(2, 0));

        let c = CoeffScalar::nu();
        assert_eq!(c.specialize(&r2(1, 0), &r2(0, 0)).unwrap(), r2(0, 0));

        let c = CoeffScalar::monomial(Coeff::one(), -1, 0);
        // 1/(1+√2) = √2 − 1
        assert_eq!(c.specialize(&r2(1, 1), &r2(0, 0)).unwrap(), r2(-1, 1));
    }

    #[test]
    fn specialize_beta_at_zero_is_domain_error() {
        let c = CoeffScalar::beta();
        assert!(matches!(c.specialize(&r2(0, 0), &r2(1, 0)), Err(Error::Domain(_))));
        let c = CoeffScalar::nu();
        assert!(matches!(c.specialize(&r2(0, 0), &r2(1, 0)), Err(Error::Domain(_))));
    }

    #[test]
    fn scalar_inverse_of_monomial() {
        let c = CoeffScalar::monomial(r2(1, 1), 2, 0);
        let inv = c.inverse().unwrap();
        assert_eq!(c.mul_ref(&inv), <CoeffScalar as Coeff>::one());
        assert!(CoeffScalar::nu().inverse().is_none());
    }

    #[test]
    fn serde_round_trip_examples() {
        let c = CoeffScalar::monomial(Root2Number::new(rat(-9, 128), rat(5, 3)), -2, 3);
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"[{"beta":-2,"nu":3,"value":{"a":"-9/128","b":"5/3"}}]"#);
        let back: CoeffScalar = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);

        let h = HbarExponent::from_thirds(-2);
        let s = serde_json::to_string(&h).unwrap();
        assert_eq!(s, r#""-2/3""#);
        assert_eq!(serde_json::from_str::<HbarExponent>(&s).unwrap(), h);
    }

    fn small_rat() -> impl Strategy<Value = Rational> {
        (-20i64..20, 1i64..9).prop_map(|(n, d)| rat(n, d))
    }

    fn small_root2() -> impl Strategy<Value = Root2Number> {
        (small_rat(), small_rat()).prop_map(|(a, b)| Root2Number::new(a, b))
    }

    fn small_scalar() -> impl Strategy<Value = CoeffScalar> {
        prop::collection::vec((small_root2(), -2i32..3, 0u32..3), 0..4).prop_map(|ts| {
            let mut c = CoeffScalar::default();
            for (v, b, n) in ts {
                c.add_assign_ref(&CoeffScalar::monomial(v, b, n));
            }
            c
        })
    }

    proptest! {
        #[test]
        fn root2_ring_axioms(x in small_root2(), y in small_root2(), z in small_root2()) {
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&x * &y, &y * &x);
        }

        #[test]
        fn root2_inverse(x in small_root2()) {
            prop_assume!(!Coeff::is_zero(&x));
            let inv = x.inverse().unwrap();
            prop_assert_eq!(&x * &inv, <Root2Number as Coeff>::one());
        }

        #[test]
        fn scalar_ring_axioms(x in small_scalar(), y in small_scalar(), z in small_scalar()) {
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert!(x.terms().all(|(_, v)| !Coeff::is_zero(v)));
        }

        #[test]
        fn specialize_is_homomorphism(x in small_scalar(), y in small_scalar(),
                                      b in small_root2(), n in small_root2()) {
            prop_assume!(!Coeff::is_zero(&b));
            let lhs = (&x * &y).specialize(&b, &n).unwrap();
            let rhs = &x.specialize(&b, &n).unwrap() * &y.specialize(&b, &n).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn scalar_serde_round_trip(x in small_scalar()) {
            let s = serde_json::to_string(&x).unwrap();
            let back: CoeffScalar = serde_json::from_str(&s).unwrap();
            prop_assert_eq!(back, x);
        }
    }
}
