use std::collections::BTreeMap;

use super::poly::Poly;
use crate::error::{usage, Result};
use crate::scalars::{Coeff, CoeffScalar};

/// A Laurent polynomial in `z` with polynomial coefficients, restricted to
/// z-powers in `[z_min, z_max]`.
///
/// The bounds are enforced rather than used for silent truncation: a product
/// producing a nonzero coefficient outside them is an error, which is how
/// insufficient z-ranges surface.
#[derive(Clone, PartialEq, Debug)]
pub struct LaurentZ<C: Coeff = CoeffScalar> {
    terms: BTreeMap<i64, Poly<C>>,
    z_min: i64,
    z_max: i64,
    weight_cap: u32,
}

impl<C: Coeff> LaurentZ<C> {
    pub fn zero(z_min: i64, z_max: i64, weight_cap: u32) -> Self {
        LaurentZ { terms: BTreeMap::new(), z_min, z_max, weight_cap }
    }

    /// The constant series `p · z⁰`.
    pub fn constant(p: Poly<C>, z_min: i64, z_max: i64) -> Self {
        let mut s = Self::zero(z_min, z_max, p.weight_cap());
        if !p.is_zero() {
            s.terms.insert(0, p);
        }
        s
    }

    pub fn bounds(&self) -> (i64, i64) {
        (self.z_min, self.z_max)
    }

    pub fn weight_cap(&self) -> u32 {
        self.weight_cap
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Poly<C>)> {
        self.terms.iter().map(|(k, p)| (*k, p))
    }

    pub fn coeff(&self, power: i64) -> Poly<C> {
        self.terms.get(&power).cloned().unwrap_or_else(|| Poly::zero(self.weight_cap))
    }

    /// Adds `z^power · p`; a power outside the bounds is a usage error.
    pub fn add_term(&mut self, power: i64, p: &Poly<C>) -> Result<()> {
        if p.is_zero() {
            return Ok(());
        }
        if power < self.z_min || power > self.z_max {
            return usage(format!("z-power {power} outside the truncation window [{}, {}]", self.z_min, self.z_max));
        }
        let cap = self.weight_cap;
        let slot = self.terms.entry(power).or_insert_with(|| Poly::zero(cap));
        slot.add_assign_truncated(p);
        if slot.is_zero() {
            self.terms.remove(&power);
        }
        Ok(())
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.bounds() != rhs.bounds() || self.weight_cap != rhs.weight_cap {
            return usage("LaurentZ::mul: mismatched truncation bounds");
        }
        let mut out = Self::zero(self.z_min, self.z_max, self.weight_cap);
        for (a, p) in &self.terms {
            for (b, q) in &rhs.terms {
                out.add_term(a + b, &p.mul_truncated(q, self.weight_cap))?;
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}
