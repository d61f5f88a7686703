use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use super::monomial::{var_weight, Monomial, PRIMED};
use crate::error::{usage, Error, Result};
use crate::scalars::{int, Coeff, CoeffScalar, Rational};

/// A sparse polynomial in time variables, truncated at total weight `weight_cap`.
///
/// No stored monomial exceeds the cap and no stored coefficient is zero.
/// The same type houses one-family polynomials in `t₁, t₃, …` and
/// two-family polynomials in `t` and `t′` (see [`TwoSetPolynomial`]).
#[derive(Clone, PartialEq, Debug)]
pub struct Poly<C: Coeff = CoeffScalar> {
    terms: BTreeMap<Monomial, C>,
    weight_cap: u32,
}

/// Polynomial in the odd times `t₁, t₃, t₅, …`.
pub type OddPolynomial<C = CoeffScalar> = Poly<C>;

/// Polynomial in two disjoint families `t` and `t′`, truncated at joint weight.
/// Variables of the second family carry the [`PRIMED`] flag.
pub type TwoSetPolynomial<C = CoeffScalar> = Poly<C>;

impl<C: Coeff> Poly<C> {
    pub fn zero(weight_cap: u32) -> Self {
        Poly { terms: BTreeMap::new(), weight_cap }
    }

    pub fn one(weight_cap: u32) -> Self {
        Self::constant(C::one(), weight_cap)
    }

    pub fn constant(c: C, weight_cap: u32) -> Self {
        let mut p = Self::zero(weight_cap);
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn monomial(m: Monomial, c: C, weight_cap: u32) -> Self {
        let mut p = Self::zero(weight_cap);
        p.add_term(m, c);
        p
    }

    /// The variable `t_k`.
    pub fn t(k: u32, weight_cap: u32) -> Self {
        Self::monomial(Monomial::var(k), C::one(), weight_cap)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, C)>, weight_cap: u32) -> Self {
        let mut p = Self::zero(weight_cap);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn weight_cap(&self) -> u32 {
        self.weight_cap
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Same as [`Poly::is_zero`].
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Monomial::one()).is_some_and(|c| *c == C::one())
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&Monomial::one())
    }

    /// Adds `c·m`, dropping it if `m` lies above the cap.
    pub fn add_term(&mut self, m: Monomial, c: C) {
        if m.weight() > self.weight_cap || c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(slot) => {
                slot.add_assign_ref(&c);
                if slot.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn check_caps(&self, rhs: &Self, op: &str) -> Result<()> {
        if self.weight_cap != rhs.weight_cap {
            return usage(format!("{op}: mismatched weight caps {} and {}", self.weight_cap, rhs.weight_cap));
        }
        Ok(())
    }

    /// Adds `rhs` into `self`, truncating at `self`'s cap.
    pub fn add_assign_truncated(&mut self, rhs: &Self) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_caps(rhs, "add")?;
        let mut out = self.clone();
        out.add_assign_truncated(rhs);
        Ok(out)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg_ref())).collect(), weight_cap: self.weight_cap }
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.weight_cap);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v.mul_ref(c));
        }
        out
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        let mut out = Self::zero(self.weight_cap);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v.scale(r));
        }
        out
    }

    /// Product with equal caps; mismatched caps are a usage error.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.check_caps(rhs, "mul")?;
        Ok(self.mul_truncated(rhs, self.weight_cap))
    }

    /// Product truncated at an explicit cap.
    pub fn mul_truncated(&self, rhs: &Self, cap: u32) -> Self {
        let mut out = Self::zero(cap);
        // terms iterate in increasing weight, so each inner loop can stop early
        for (m1, c1) in &self.terms {
            if m1.weight() > cap {
                break;
            }
            for (m2, c2) in &rhs.terms {
                if m1.weight() + m2.weight() > cap {
                    break;
                }
                out.add_term(m1.mul(m2), c1.mul_ref(c2));
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.weight_cap);
        for _ in 0..n {
            acc = acc.mul_truncated(self, self.weight_cap);
        }
        acc
    }

    /// Drops everything above `cap`; raising the cap is a usage error.
    pub fn truncate(&self, cap: u32) -> Result<Self> {
        if cap > self.weight_cap {
            return usage(format!("cannot extend weight cap {} to {cap}", self.weight_cap));
        }
        Ok(Self::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), c.clone())), cap))
    }

    /// Reinterprets the polynomial under a larger cap. Only sound when the
    /// caller knows the polynomial is exact beyond its current cap.
    pub fn with_cap_unchecked(mut self, cap: u32) -> Self {
        self.terms.retain(|m, _| m.weight() <= cap);
        self.weight_cap = cap;
        self
    }

    /// The homogeneous component of the given weight.
    pub fn component(&self, weight: u32) -> Self {
        Self::from_terms(
            self.terms.iter().filter(|(m, _)| m.weight() == weight).map(|(m, c)| (m.clone(), c.clone())),
            self.weight_cap,
        )
    }

    /// `Some(w)` if every term has weight `w` (`None` for mixed weights; `Some(0)` for zero).
    pub fn homogeneous_weight(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Monomial::weight);
        let first = it.next().unwrap_or(0);
        it.all(|w| w == first).then_some(first)
    }

    pub fn max_weight(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::weight).max()
    }

    /// `∂/∂(var)` applied `times` times.
    pub fn derivative(&self, var: u32, times: u32) -> Self {
        let ann = Monomial::var_pow(var, times);
        let mut out = Self::zero(self.weight_cap);
        for (m, c) in &self.terms {
            if let Some((f, q)) = m.differentiate(&ann) {
                out.add_term(q, c.scale(&Rational::from_integer(f)));
            }
        }
        out
    }

    /// Truncated `exp(p)`; `p` must have zero constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return usage("exp: argument has a nonzero constant term");
        }
        let mut out = Self::one(self.weight_cap);
        let mut power = Self::one(self.weight_cap);
        let mut n = 1i64;
        loop {
            power = power.mul_truncated(self, self.weight_cap).scale_rational(&Rational::new(1.into(), n.into()));
            if power.is_zero() {
                break;
            }
            out.add_assign_truncated(&power);
            n += 1;
        }
        Ok(out)
    }

    /// Truncated `log(p)`; `p` must have constant term 1.
    pub fn log(&self) -> Result<Self> {
        if self.constant_term() != C::one() {
            return usage("log: argument must have constant term 1");
        }
        let x = self.sub(&Self::one(self.weight_cap))?;
        let mut out = Self::zero(self.weight_cap);
        let mut power = Self::one(self.weight_cap);
        let mut n = 1i64;
        loop {
            power = power.mul_truncated(&x, self.weight_cap);
            if power.is_zero() {
                break;
            }
            let sign = if n % 2 == 1 { 1 } else { -1 };
            out.add_assign_truncated(&power.scale_rational(&Rational::new(sign.into(), n.into())));
            n += 1;
        }
        Ok(out)
    }

    /// Substitutes `t_k → c·t_k` in every variable: each monomial picks up `c^{degree}`.
    pub fn rescale_times(&self, c: &C) -> Self {
        let mut out = Self::zero(self.weight_cap);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v.mul_ref(&c.pow(m.degree())));
        }
        out
    }

    /// Exact evaluation; variables missing from `point` evaluate to zero.
    pub fn specialize_times(&self, point: &BTreeMap<u32, C>) -> C {
        let mut acc = C::zero();
        'terms: for (m, c) in &self.terms {
            let mut value = c.clone();
            for &(var, e) in m.exps() {
                match point.get(&var) {
                    Some(x) => value = value.mul_ref(&x.pow(e)),
                    None => continue 'terms,
                }
            }
            acc.add_assign_ref(&value);
        }
        acc
    }

    /// Moves every variable into the second family: `t_k → t′_k`.
    pub fn prime(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (m.map_vars(|v| v | PRIMED), c.clone())), self.weight_cap)
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))), self.weight_cap)
    }

    /// Embedding into [`CoeffScalar`] coefficients.
    pub fn lift(&self) -> Poly<CoeffScalar> {
        self.map_coeffs(C::to_scalar)
    }

    /// Every coefficient satisfies `pred`.
    pub fn all_coeffs(&self, pred: impl Fn(&C) -> bool) -> bool {
        self.terms.values().all(pred)
    }

    /// JSON form `{weight_cap, terms: [{exps: [[k, e], …], coeff}]}`; primed
    /// variables are written with negative indices.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let exps: Vec<Value> = m
                    .exps()
                    .iter()
                    .map(|&(v, e)| {
                        let k = var_weight(v) as i64;
                        json!([if v & PRIMED != 0 { -k } else { k }, e])
                    })
                    .collect();
                json!({ "exps": exps, "coeff": c.to_json() })
            })
            .collect();
        json!({ "weight_cap": self.weight_cap, "terms": terms })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("polynomial JSON: {what}"));
        let cap = v.get("weight_cap").and_then(Value::as_u64).ok_or_else(|| bad("weight_cap"))? as u32;
        let mut p = Self::zero(cap);
        for t in v.get("terms").and_then(Value::as_array).ok_or_else(|| bad("terms"))? {
            let exps = t.get("exps").and_then(Value::as_array).ok_or_else(|| bad("exps"))?;
            let mut pairs = Vec::with_capacity(exps.len());
            for pair in exps {
                let k = pair.get(0).and_then(Value::as_i64).ok_or_else(|| bad("index"))?;
                let e = pair.get(1).and_then(Value::as_u64).ok_or_else(|| bad("exponent"))?;
                let var = if k < 0 { (-k) as u32 | PRIMED } else { k as u32 };
                pairs.push((var, e as u32));
            }
            let m = Monomial::from_pairs(pairs);
            if m.weight() > cap {
                return Err(bad("monomial above weight cap"));
            }
            let c = C::from_json(t.get("coeff").ok_or_else(|| bad("coeff"))?)?;
            if c.is_zero() {
                return Err(bad("zero coefficient"));
            }
            p.add_term(m, c);
        }
        Ok(p)
    }
}

impl Poly<Rational> {
    /// The polynomial `Σ_k c_k t_k` over the odd indices `k ≤ cap`.
    pub fn linear(coeffs: impl IntoIterator<Item = (u32, Rational)>, cap: u32) -> Self {
        Self::from_terms(coeffs.into_iter().map(|(k, c)| (Monomial::var(k), c)), cap)
    }
}

impl<C: Coeff> fmt::Display for Poly<C> {
    /// Canonical text: terms in monomial order, e.g. `4/3*t1^3 - 4*t3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let (negative, body) = match c.as_rational() {
                Some(r) if r < int(0) => (true, (-r).to_string()),
                Some(r) => (false, r.to_string()),
                None => (false, format!("({c})")),
            };
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{body}")?;
            } else if body == "1" {
                write!(f, "{m}")?;
            } else {
                write!(f, "{body}*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat;
    use proptest::prelude::*;

    type P = Poly<Rational>;

    fn t(k: u32, cap: u32) -> P {
        P::t(k, cap)
    }

    #[test]
    fn mul_examples() {
        let p = t(1, 5).add(&t(3, 5).scale_rational(&rat(2, 7))).unwrap();
        assert_eq!(P::one(5).mul(&p).unwrap(), p);
        assert_eq!(t(1, 2).mul(&t(1, 2)).unwrap(), P::monomial(Monomial::var_pow(1, 2), int(1), 2));
        assert!(t(1, 3).mul(&t(3, 3)).unwrap().is_zero());
        assert!(matches!(t(1, 3).mul(&t(1, 4)), Err(Error::Usage(_))));
    }

    #[test]
    fn exp_examples() {
        assert_eq!(P::zero(4).exp().unwrap(), P::one(4));
        let e = t(1, 2).exp().unwrap();
        assert_eq!(e.to_string(), "1 + t1 + 1/2*t1^2");
        let p = P::linear([(1, int(2)), (3, rat(2, 3))], 3);
        assert_eq!(p.exp().unwrap().to_string(), "1 + 2*t1 + 2*t1^2 + 4/3*t1^3 + 2/3*t3");
        assert!(matches!(P::one(3).exp(), Err(Error::Usage(_))));
    }

    #[test]
    fn rescale_and_specialize_examples() {
        let p = P::monomial(Monomial::from_pairs([(1, 1), (3, 1)]), int(1), 4);
        assert_eq!(p.rescale_times(&int(1)), p);
        assert_eq!(p.rescale_times(&rat(1, 2)), p.scale_rational(&rat(1, 4)));

        let sq = P::monomial(Monomial::var_pow(1, 2), int(1), 2);
        assert_eq!(sq.specialize_times(&BTreeMap::from([(1, int(1))])), int(1));

        let q3 = P::from_terms([(Monomial::var_pow(1, 3), rat(4, 3)), (Monomial::var(3), int(2))], 3);
        assert_eq!(q3.specialize_times(&BTreeMap::from([(3, rat(1, 3))])), rat(2, 3));

        let q21 = P::from_terms([(Monomial::var_pow(1, 3), rat(4, 3)), (Monomial::var(3), int(-4))], 3);
        assert_eq!(q21.specialize_times(&BTreeMap::from([(1, int(1))])), rat(4, 3));
        assert_eq!(q21.to_string(), "4/3*t1^3 - 4*t3");
    }

    #[test]
    fn cauchy_kernel_rescaling() {
        let cap = 6;
        let kernel_arg = |scale: Rational| {
            let mut p = P::zero(cap);
            for k in [1u32, 3] {
                let m = Monomial::from_pairs([(k, 1), (k | PRIMED, 1)]);
                p.add_term(m, &scale * int(k as i64));
            }
            p
        };
        let lhs = kernel_arg(int(2)).exp().unwrap().rescale_times(&rat(1, 2));
        let rhs = kernel_arg(rat(1, 2)).exp().unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn log_inverts_exp_example() {
        let p = P::linear([(1, rat(1, 8)), (3, rat(9, 128))], 6);
        assert_eq!(p.exp().unwrap().log().unwrap(), p);
        assert!(matches!(P::zero(3).log(), Err(Error::Usage(_))));
    }

    #[test]
    fn json_round_trip_with_primed_vars() {
        let m = Monomial::from_pairs([(1, 2), (3 | PRIMED, 1)]);
        let p = P::from_terms([(m, rat(-5, 3)), (Monomial::one(), int(1))], 6);
        let back = P::from_json(&p.to_json()).unwrap();
        assert_eq!(back, p);
    }

    const ODD: [u32; 4] = [1, 3, 5, 7];

    fn arb_poly(cap: u32) -> impl Strategy<Value = P> {
        prop::collection::vec((prop::collection::vec((0usize..4, 0u32..3), 0..3), -6i64..6, 1i64..4), 0..6).prop_map(
            move |terms| {
                P::from_terms(
                    terms
                        .into_iter()
                        .map(|(vs, n, d)| (Monomial::from_pairs(vs.into_iter().map(|(i, e)| (ODD[i], e))), rat(n, d))),
                    cap,
                )
            },
        )
    }

    proptest! {
        #[test]
        fn truncation_coherence(p in arb_poly(10), q in arb_poly(10), small in 1u32..10) {
            let full = p.mul(&q).unwrap().truncate(small).unwrap();
            let early = p.truncate(small).unwrap().mul(&q.truncate(small).unwrap()).unwrap();
            prop_assert_eq!(full, early);
        }

        #[test]
        fn specialize_is_homomorphism(p in arb_poly(8), q in arb_poly(8), a in -3i64..3, b in -3i64..3) {
            let point = BTreeMap::from([(1, int(a)), (3, rat(b, 3)), (5, int(1))]);
            // products must not be truncated for the identity to hold
            let pq = p.mul_truncated(&q, 40);
            prop_assert_eq!(
                pq.specialize_times(&point),
                p.specialize_times(&point) * q.specialize_times(&point)
            );
        }

        #[test]
        fn exp_log_inverse(p in arb_poly(7)) {
            let p = p.sub(&P::constant(p.constant_term(), 7)).unwrap();
            let e = p.exp().unwrap();
            prop_assert_eq!(e.log().unwrap(), p);
        }

        #[test]
        fn mul_commutes_and_associates(p in arb_poly(6), q in arb_poly(6), r in arb_poly(6)) {
            prop_assert_eq!(p.mul(&q).unwrap(), q.mul(&p).unwrap());
            prop_assert_eq!(p.mul(&q).unwrap().mul(&r).unwrap(), p.mul(&q.mul(&r).unwrap()).unwrap());
        }
    }
}
