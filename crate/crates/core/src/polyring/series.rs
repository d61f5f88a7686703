use std::collections::BTreeMap;
use std::fmt;

use super::poly::Poly;
use crate::error::{usage, Result};
use crate::scalars::{Coeff, CoeffScalar, HbarExponent, Rational};

/// A finite expansion `Σ ħ^e · p_e(t)` truncated at ħ-order `hbar_cap` (inclusive)
/// and t-weight `weight_cap`.
#[derive(Clone, PartialEq, Debug)]
pub struct HbarSeries<C: Coeff = CoeffScalar> {
    terms: BTreeMap<HbarExponent, Poly<C>>,
    weight_cap: u32,
    hbar_cap: HbarExponent,
}

impl<C: Coeff> HbarSeries<C> {
    pub fn zero(weight_cap: u32, hbar_cap: HbarExponent) -> Self {
        HbarSeries { terms: BTreeMap::new(), weight_cap, hbar_cap }
    }

    pub fn one(weight_cap: u32, hbar_cap: HbarExponent) -> Self {
        let mut s = Self::zero(weight_cap, hbar_cap);
        s.add_component(HbarExponent::ZERO, &Poly::one(weight_cap));
        s
    }

    pub fn weight_cap(&self) -> u32 {
        self.weight_cap
    }

    pub fn hbar_cap(&self) -> HbarExponent {
        self.hbar_cap
    }

    pub fn components(&self) -> impl Iterator<Item = (HbarExponent, &Poly<C>)> {
        self.terms.iter().map(|(e, p)| (*e, p))
    }

    /// The ħ^e component (zero if absent).
    pub fn component(&self, e: HbarExponent) -> Poly<C> {
        self.terms.get(&e).cloned().unwrap_or_else(|| Poly::zero(self.weight_cap))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `ħ^e · p` (truncated at both caps).
    pub fn add_component(&mut self, e: HbarExponent, p: &Poly<C>) {
        if e > self.hbar_cap || p.is_zero() {
            return;
        }
        let cap = self.weight_cap;
        let slot = self.terms.entry(e).or_insert_with(|| Poly::zero(cap));
        slot.add_assign_truncated(p);
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (e, p) in &rhs.terms {
            out.add_component(*e, p);
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_components(|p| p.neg())
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        self.map_components(|p| p.scale_rational(r))
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.weight_cap != rhs.weight_cap || self.hbar_cap != rhs.hbar_cap {
            return usage("HbarSeries::mul: mismatched caps");
        }
        let mut out = Self::zero(self.weight_cap, self.hbar_cap);
        for (e1, p1) in &self.terms {
            for (e2, p2) in &rhs.terms {
                let e = *e1 + *e2;
                if e > self.hbar_cap {
                    continue;
                }
                out.add_component(e, &p1.mul_truncated(p2, self.weight_cap));
            }
        }
        Ok(out)
    }

    fn map_components(&self, f: impl Fn(&Poly<C>) -> Poly<C>) -> Self {
        let mut out = Self::zero(self.weight_cap, self.hbar_cap);
        for (e, p) in &self.terms {
            out.add_component(*e, &f(p));
        }
        out
    }

    fn check_unipotent(&self, op: &str) -> Result<Self> {
        if self.terms.keys().next().is_some_and(|e| *e < HbarExponent::ZERO) {
            return usage(format!("{op}: negative ħ-exponent"));
        }
        let mut x = self.clone();
        x.terms.remove(&HbarExponent::ZERO);
        Ok(x)
    }

    /// Formal logarithm; the ħ⁰ component must be exactly 1.
    pub fn log(&self) -> Result<Self> {
        if !self.terms.get(&HbarExponent::ZERO).is_some_and(Poly::is_one) {
            return usage("log: series must have constant term 1");
        }
        let x = self.check_unipotent("log")?;
        let mut out = Self::zero(self.weight_cap, self.hbar_cap);
        let mut power = Self::one(self.weight_cap, self.hbar_cap);
        let mut n = 1i64;
        loop {
            power = power.mul(&x)?;
            if power.is_zero() {
                break;
            }
            let sign = if n % 2 == 1 { 1 } else { -1 };
            out = out.add(&power.scale_rational(&Rational::new(sign.into(), n.into())));
            n += 1;
        }
        Ok(out)
    }

    /// Formal exponential; the argument must have no ħ⁰ component.
    pub fn exp(&self) -> Result<Self> {
        if self.terms.contains_key(&HbarExponent::ZERO) {
            return usage("exp: series must have zero ħ⁰ component");
        }
        let x = self.check_unipotent("exp")?;
        let mut out = Self::one(self.weight_cap, self.hbar_cap);
        let mut power = Self::one(self.weight_cap, self.hbar_cap);
        let mut n = 1i64;
        loop {
            power = power.mul(&x)?.scale_rational(&Rational::new(1.into(), n.into()));
            if power.is_zero() {
                break;
            }
            out = out.add(&power);
            n += 1;
        }
        Ok(out)
    }

    /// `t_k → c·t_k` in every component.
    pub fn rescale_times(&self, c: &C) -> Self {
        self.map_components(|p| p.rescale_times(c))
    }

    /// Truncates to a lower ħ-order and/or weight.
    pub fn truncate(&self, weight_cap: u32, hbar_cap: HbarExponent) -> Result<Self> {
        if weight_cap > self.weight_cap || hbar_cap > self.hbar_cap {
            return usage("cannot extend the caps of an ħ-series");
        }
        let mut out = Self::zero(weight_cap, hbar_cap);
        for (e, p) in &self.terms {
            out.add_component(*e, &p.truncate(weight_cap)?);
        }
        Ok(out)
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> HbarSeries<D> {
        let mut out = HbarSeries::zero(self.weight_cap, self.hbar_cap);
        for (e, p) in &self.terms {
            out.add_component(*e, &p.map_coeffs(&f));
        }
        out
    }

    pub fn lift(&self) -> HbarSeries<CoeffScalar> {
        self.map_coeffs(C::to_scalar)
    }
}

impl<C: Coeff> fmt::Display for HbarSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, p)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if *e == HbarExponent::ZERO {
                write!(f, "({p})")?;
            } else {
                write!(f, "({p})*hbar^{e}")?;
            }
        }
        Ok(())
    }
}
