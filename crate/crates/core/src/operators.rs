//! Normal-ordered differential operators in the odd times: cut-and-join
//! operators, odd-time Virasoro modes, the BKP symmetry generators, and
//! exponential action on `1`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use crate::error::{usage, Result};
use crate::polyring::{HbarSeries, Monomial, Poly};
use crate::report::VerificationReport;
use crate::scalars::{int, rat, Coeff, CoeffScalar, HbarExponent, Rational};

/// `Σ c · t^{creation} ∂^{annihilation}` with every derivative to the right.
///
/// Terms whose creation weight exceeds `cap` are dropped on insertion; they
/// cannot contribute to any result truncated at `cap`.
#[derive(Clone, PartialEq, Debug)]
pub struct DiffOperator<C: Coeff = CoeffScalar> {
    terms: BTreeMap<(Monomial, Monomial), C>,
    cap: u32,
}

impl<C: Coeff> DiffOperator<C> {
    pub fn zero(cap: u32) -> Self {
        DiffOperator { terms: BTreeMap::new(), cap }
    }

    /// Multiplication by a polynomial.
    pub fn multiplication(p: &Poly<C>, cap: u32) -> Self {
        let mut op = Self::zero(cap);
        for (m, c) in p.terms() {
            op.add_term(m.clone(), Monomial::one(), c.clone());
        }
        op
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Monomial, &C)> {
        self.terms.iter().map(|((a, b), c)| (a, b, c))
    }

    pub fn add_term(&mut self, creation: Monomial, annihilation: Monomial, c: C) {
        if creation.weight() > self.cap || c.is_zero() {
            return;
        }
        let key = (creation, annihilation);
        match self.terms.get_mut(&key) {
            Some(slot) => {
                slot.add_assign_ref(&c);
                if slot.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for ((a, b), c) in &rhs.terms {
            out.add_term(a.clone(), b.clone(), c.clone());
        }
        out
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        let mut out = Self::zero(self.cap);
        for ((a, b), c) in &self.terms {
            out.add_term(a.clone(), b.clone(), c.scale(r));
        }
        out
    }

    /// The common `weight(creation) − weight(annihilation)`, if all terms share one.
    pub fn weight_shift(&self) -> Option<i64> {
        let mut shifts = self.terms.keys().map(|(a, b)| a.weight() as i64 - b.weight() as i64);
        let first = shifts.next()?;
        shifts.all(|s| s == first).then_some(first)
    }

    /// Action on a polynomial, truncated at the polynomial's cap.
    pub fn apply(&self, p: &Poly<C>) -> Poly<C> {
        let cap = p.weight_cap();
        let mut out = Poly::zero(cap);
        for ((cr, an), c) in &self.terms {
            for (m, v) in p.terms() {
                if m.weight() < an.weight() {
                    continue;
                }
                if m.weight() - an.weight() + cr.weight() > cap {
                    continue;
                }
                if let Some((f, q)) = m.differentiate(an) {
                    out.add_term(cr.mul(&q), c.mul_ref(v).scale(&Rational::from_integer(f)));
                }
            }
        }
        out
    }

    /// Symbolic product `self ∘ rhs`, normal ordered by the Leibniz rule.
    pub fn compose(&self, rhs: &Self) -> Self {
        let cap = self.cap.min(rhs.cap);
        let mut out = Self::zero(cap);
        for ((a, b), c1) in &self.terms {
            for ((c, d), c2) in &rhs.terms {
                // ∂^b t^c = Σ_γ Π_k binom(b_k, γ_k)·c_k!/(c_k−γ_k)! · t^{c−γ} ∂^{b−γ}
                for (gamma, factor) in leibniz_contractions(b, c) {
                    let (_, b_rest) = b.differentiate(&gamma).expect("γ ≤ b");
                    let (_, c_rest) = c.differentiate(&gamma).expect("γ ≤ c");
                    out.add_term(a.mul(&c_rest), b_rest.mul(d), c1.mul_ref(c2).scale(&Rational::from_integer(factor)));
                }
            }
        }
        out
    }

    /// Conjugation by the rescaling `t_k → c·t_k`, `∂_k → c^{−1}∂_k`.
    pub fn conjugate_rescale(&self, c: &C) -> Result<Self> {
        let Some(inv) = c.checked_inverse() else {
            return usage("conjugate_rescale: scale factor must be invertible");
        };
        let mut out = Self::zero(self.cap);
        for ((a, b), v) in &self.terms {
            let d = a.degree() as i64 - b.degree() as i64;
            let f = if d >= 0 { c.pow(d as u32) } else { inv.pow((-d) as u32) };
            out.add_term(a.clone(), b.clone(), v.mul_ref(&f));
        }
        Ok(out)
    }

    /// `Σ_{n ≤ order} ħⁿ opⁿ·1 / n!`, truncated at weight `cap`.
    pub fn exp_action(&self, order: u32, cap: u32) -> Result<HbarSeries<C>> {
        match self.weight_shift() {
            Some(s) if s > 0 => {}
            None if self.is_empty() => {}
            _ => return usage("exp_action needs an operator of positive homogeneous weight shift"),
        }
        let mut out = HbarSeries::one(cap, HbarExponent::from_int(order as i64));
        let mut phi = Poly::one(cap);
        for n in 1..=order {
            phi = self.apply(&phi).scale_rational(&rat(1, n as i64));
            if phi.is_zero() {
                break;
            }
            out.add_component(HbarExponent::from_int(n as i64), &phi);
        }
        Ok(out)
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> DiffOperator<D> {
        let mut out = DiffOperator::zero(self.cap);
        for ((a, b), c) in &self.terms {
            out.add_term(a.clone(), b.clone(), f(c));
        }
        out
    }
}

/// Every `γ ≤ min(b, c)` with the Leibniz factor `Π binom(b_k, γ_k) c_k!/(c_k−γ_k)!`.
fn leibniz_contractions(b: &Monomial, c: &Monomial) -> Vec<(Monomial, BigInt)> {
    let shared: Vec<(u32, u32, u32)> = b
        .exps()
        .iter()
        .filter_map(|&(v, eb)| {
            let ec = c.exponent(v);
            (ec > 0).then_some((v, eb, ec))
        })
        .collect();
    let mut out = vec![(Monomial::one(), BigInt::from(1))];
    for (v, eb, ec) in shared {
        let mut next = Vec::new();
        for (g, f) in &out {
            for k in 0..=eb.min(ec) {
                let mut factor = f.clone();
                factor *= binomial(eb, k);
                for j in 0..k {
                    factor *= ec - j;
                }
                next.push((g.mul(&Monomial::var_pow(v, k)), factor));
            }
        }
        out = next;
    }
    out
}

fn binomial(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::from(1), |acc, j| acc * (n - j) / (j + 1))
}

impl<C: Coeff> fmt::Display for DiffOperator<C> {
    /// Debug dump: one `coeff  creation  d(annihilation)` line per term in canonical order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for ((a, b), c) in &self.terms {
            writeln!(f, "{c}  {a}  d({b})")?;
        }
        Ok(())
    }
}

fn odd_upto(n: u32) -> impl Iterator<Item = u32> {
    (1..=n).step_by(2)
}

fn pair(k: u32, m: u32) -> Monomial {
    Monomial::from_pairs([(k, 1), (m, 1)])
}

fn r<C: Coeff>(n: i64, d: i64) -> C {
    C::from_rational(rat(n, d))
}

/// `Σ_{k,m} [km t_k t_m ∂_{k+m−s} + ½(k+m+s) t_{k+m+s} ∂_k ∂_m]` over odd `k, m`,
/// the common shape of the cut-and-join and `M̂ᴮ` operators (`s = 1` or `3`),
/// with the two sums scaled by `first` and `second`.
fn quadratic_part<C: Coeff>(s: u32, first: &Rational, second: &Rational, cap: u32) -> DiffOperator<C> {
    let mut op = DiffOperator::zero(cap);
    for k in odd_upto(cap) {
        for m in odd_upto(cap) {
            if k + m > s {
                let c = first * int((k * m) as i64);
                op.add_term(pair(k, m), Monomial::var(k + m - s), C::from_rational(c));
            }
            if k + m + s <= cap {
                let c = second * rat((k + m + s) as i64, 2);
                op.add_term(Monomial::var(k + m + s), pair(k, m), C::from_rational(c));
            }
        }
    }
    op
}

/// `Ŵ₀(N) = Σ_{k,m}[km t_k t_m ∂_{k+m−1} + ½(k+m+1) t_{k+m+1}∂_k∂_m] + t₁/8 − (ν/2) t₁` with `ν = N²`.
pub fn build_w0<C: Coeff>(nu: &C, cap: u32) -> DiffOperator<C> {
    let mut op = quadratic_part(1, &int(1), &int(1), cap);
    let mut lin: C = r(1, 8);
    lin.sub_assign_ref(&nu.scale(&rat(1, 2)));
    op.add_term(Monomial::var(1), Monomial::one(), lin);
    op
}

/// `Ŵ₁ = ⅓ Σ_{k,m}[km t_k t_m ∂_{k+m−3} + ½(k+m+3) t_{k+m+3}∂_k∂_m] + t₁³/6 + t₃/8`.
pub fn build_w1<C: Coeff>(cap: u32) -> DiffOperator<C> {
    let third = rat(1, 3);
    let mut op = quadratic_part(3, &third, &third, cap);
    op.add_term(Monomial::var_pow(1, 3), Monomial::one(), r(1, 6));
    op.add_term(Monomial::var(3), Monomial::one(), r(1, 8));
    op
}

/// `Ŵ₁ + t₁³/144 + b·t₃`, generating a one-parameter family of BKP tau-functions.
pub fn build_w1_family<C: Coeff>(b: &C, cap: u32) -> DiffOperator<C> {
    let mut op = build_w1(cap);
    op.add_term(Monomial::var_pow(1, 3), Monomial::one(), r(1, 144));
    op.add_term(Monomial::var(3), Monomial::one(), b.clone());
    op
}

/// The Virasoro mode `L̂_m` restricted to odd times:
/// `½Σ_{a+b=−m} ab t_a t_b + Σ_k k t_k ∂_{k+m} + ½Σ_{a+b=m} ∂_a∂_b`.
///
/// Terms carrying an even index are dropped. For even `m` those indices occur
/// in pairs (`a + b` even forces `a, b` to share parity, and `k + m` has the
/// parity of `k`), so each dropped term contains an even time or an even
/// derivative; both vanish on functions of the odd times evaluated at zero
/// even times.
pub fn build_virasoro_odd<C: Coeff>(m: i64, cap: u32) -> Result<DiffOperator<C>> {
    if m % 2 != 0 {
        return usage(format!("build_virasoro_odd: mode {m} is odd"));
    }
    let mut op = DiffOperator::zero(cap);
    if m < 0 {
        let s = (-m) as u32;
        for a in odd_upto(s) {
            let b = s - a;
            if b > 0 {
                op.add_term(pair(a, b), Monomial::one(), C::from_rational(rat((a * b) as i64, 2)));
            }
        }
    }
    for k in odd_upto(cap) {
        let target = k as i64 + m;
        if target > 0 {
            op.add_term(Monomial::var(k), Monomial::var(target as u32), C::from_rational(int(k as i64)));
        }
    }
    if m > 0 {
        let s = m as u32;
        for a in odd_upto(s) {
            let b = s - a;
            if b > 0 {
                op.add_term(Monomial::one(), pair(a, b), r(1, 2));
            }
        }
    }
    Ok(op)
}

/// `M̂ᴮ₋₁ = Σ(2km t_k t_m ∂_{k+m−1} + 4(k+m+1) t_{k+m+1}∂_k∂_m)` and
/// `M̂ᴮ₋₃ = Σ(2km t_k t_m ∂_{k+m−3} + 4(k+m+3) t_{k+m+3}∂_k∂_m) + t₁³/3`.
pub fn build_mb<C: Coeff>(j: i64, cap: u32) -> Result<DiffOperator<C>> {
    // ½(k+m+s)·8 = 4(k+m+s)
    match j {
        -1 => Ok(quadratic_part(1, &int(2), &int(8), cap)),
        -3 => {
            let mut op = quadratic_part(3, &int(2), &int(8), cap);
            op.add_term(Monomial::var_pow(1, 3), Monomial::one(), r(1, 3));
            Ok(op)
        }
        _ => usage(format!("build_mb: index {j} not in {{-1, -3}}")),
    }
}

/// `Ĵᴮ_k = 2∂/∂t_k` for odd `k`.
pub fn current_j<C: Coeff>(k: u32, cap: u32) -> Result<DiffOperator<C>> {
    if k.is_multiple_of(2) {
        return usage(format!("current_j: index {k} is even"));
    }
    let mut op = DiffOperator::zero(cap);
    op.add_term(Monomial::one(), Monomial::var(k), C::from_rational(int(2)));
    Ok(op)
}

/// All monomials in the odd times of weight at most `cap`.
pub fn odd_monomials(cap: u32) -> Vec<Monomial> {
    fn go(remaining: u32, max_part: u32, acc: &mut Vec<(u32, u32)>, out: &mut Vec<Monomial>) {
        out.push(Monomial::from_pairs(acc.iter().copied()));
        for k in odd_upto(max_part.min(remaining)) {
            acc.push((k, 1));
            go(remaining - k, k, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(cap, cap, &mut Vec::new(), &mut out);
    out.sort();
    out.dedup();
    out
}

/// Checks both identifications of the rescaled cut-and-join operators with
/// the BKP generators, with symbolic `ν`, on every monomial of weight ≤ `cap`:
///
/// `Ŵ₀(N)|_{t→t/2} = ¼ M̂ᴮ₋₁ + (1/16 − ν/4) t₁` and
/// `Ŵ₁|_{t→t/2} = (1/12) M̂ᴮ₋₃ − t₁³/144 + t₃/16`.
pub fn verify_operator_identity(cap: u32) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("operators");
    report.param("max_weight", cap);
    let op_cap = cap + 3;
    let half = CoeffScalar::from_rational(rat(1, 2));
    let nu = CoeffScalar::nu();

    let lhs0 = build_w0(&nu, op_cap).conjugate_rescale(&half)?;
    let mut lin = CoeffScalar::from_rational(rat(1, 16));
    lin.sub_assign_ref(&nu.scale(&rat(1, 4)));
    let rhs0 = build_mb::<CoeffScalar>(-1, op_cap)?
        .scale_rational(&rat(1, 4))
        .add(&DiffOperator::multiplication(&Poly::monomial(Monomial::var(1), lin, op_cap), op_cap));

    let lhs1 = build_w1::<CoeffScalar>(op_cap).conjugate_rescale(&half)?;
    let extra = Poly::from_terms(
        [
            (Monomial::var_pow(1, 3), CoeffScalar::from_rational(rat(-1, 144))),
            (Monomial::var(3), CoeffScalar::from_rational(rat(1, 16))),
        ],
        op_cap,
    );
    let rhs1 = build_mb::<CoeffScalar>(-3, op_cap)?
        .scale_rational(&rat(1, 12))
        .add(&DiffOperator::multiplication(&extra, op_cap));

    for (name, lhs, rhs) in [("W0", &lhs0, &rhs0), ("W1", &lhs1, &rhs1)] {
        for m in odd_monomials(cap) {
            let p = Poly::monomial(m.clone(), CoeffScalar::one(), op_cap);
            report.check_poly(&format!("{name} on {m}"), &rhs.apply(&p), &lhs.apply(&p));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Rational;
    use proptest::prelude::*;

    type Op = DiffOperator<Rational>;
    type P = Poly<Rational>;

    #[test]
    fn w0_examples() {
        let nu = CoeffScalar::nu();
        let w = build_w0(&nu, 4);
        let one = Poly::one(4);
        let mut expected = CoeffScalar::from_rational(rat(1, 8));
        expected.sub_assign_ref(&nu.scale(&rat(1, 2)));
        assert_eq!(w.apply(&one), Poly::monomial(Monomial::var(1), expected, 4));

        let w0 = build_w0(&int(0), 4);
        assert_eq!(w0.apply(&P::t(1, 4)).to_string(), "9/8*t1^2");
        assert!(build_w0(&rat(1, 4), 6).apply(&P::one(6)).is_zero());
        assert_eq!(w0.weight_shift(), Some(1));
    }

    #[test]
    fn w1_examples() {
        let w = build_w1::<Rational>(9);
        assert_eq!(w.apply(&P::one(9)).to_string(), "1/6*t1^3 + 1/8*t3");
        assert_eq!(w.weight_shift(), Some(3));
        let coeff = w.terms().find(|(a, b, _)| **a == Monomial::var(5) && **b == Monomial::var_pow(1, 2));
        assert_eq!(coeff.map(|t| t.2.clone()), Some(rat(5, 6)));
    }

    #[test]
    fn virasoro_examples() {
        let l0 = build_virasoro_odd::<Rational>(0, 7).unwrap();
        assert!(l0.terms().all(|(a, b, c)| a == b && *c == int(a.weight() as i64)));
        assert_eq!(l0.len(), 4);
        assert_eq!(l0.apply(&P::t(3, 7)), P::t(3, 7).scale_rational(&int(3)));
        let lm2 = build_virasoro_odd::<Rational>(-2, 7).unwrap();
        assert!(lm2.terms().any(|(a, b, c)| *a == Monomial::var_pow(1, 2) && b.is_one() && *c == rat(1, 2)));
        assert!(build_virasoro_odd::<Rational>(1, 7).is_err());
    }

    #[test]
    fn mb_examples() {
        let m1 = build_mb::<Rational>(-1, 6).unwrap();
        let m3 = build_mb::<Rational>(-3, 6).unwrap();
        assert!(m1.apply(&P::one(6)).is_zero());
        assert_eq!(m3.apply(&P::one(6)).to_string(), "1/3*t1^3");
        assert_eq!((m1.weight_shift(), m3.weight_shift()), (Some(1), Some(3)));
        assert!(build_mb::<Rational>(-2, 6).is_err());
    }

    #[test]
    fn conjugate_rescale_examples() {
        let w = build_w0(&int(0), 5);
        assert_eq!(w.conjugate_rescale(&int(1)).unwrap(), w);
        let half = w.conjugate_rescale(&rat(1, 2)).unwrap();
        let t1 = |op: &Op| op.terms().find(|(a, b, _)| **a == Monomial::var(1) && b.is_one()).unwrap().2.clone();
        assert_eq!(t1(&half), rat(1, 16));
        assert!(w.conjugate_rescale(&int(0)).is_err());
    }

    #[test]
    fn operator_identities_on_one() {
        let r = verify_operator_identity(2).unwrap();
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
        let on_one = r.items.iter().find(|i| i.label == "W1 on 1").unwrap();
        assert_eq!(on_one.expected, "1/48*t1^3 + 1/16*t3");
    }

    #[test]
    fn exp_action_rejects_non_positive_shift() {
        let l0 = build_virasoro_odd::<Rational>(0, 4).unwrap();
        assert!(l0.exp_action(2, 4).is_err());
        let s = build_w0(&rat(1, 4), 8).exp_action(8, 8).unwrap();
        assert_eq!(s, HbarSeries::one(8, HbarExponent::from_int(8)));
    }

    #[test]
    fn basis_monomials() {
        let ms = odd_monomials(5);
        let names: Vec<String> = ms.iter().map(|m| m.to_string()).collect();
        assert_eq!(names, ["1", "t1", "t1^2", "t1^3", "t3", "t1^4", "t1*t3", "t1^5", "t1^2*t3", "t5"]);
    }

    fn arb_poly(cap: u32) -> impl Strategy<Value = P> {
        const ODD: [u32; 3] = [1, 3, 5];
        prop::collection::vec((prop::collection::vec((0usize..3, 0u32..3), 0..3), -5i64..5), 0..5).prop_map(
            move |terms| {
                P::from_terms(
                    terms
                        .into_iter()
                        .map(|(vs, n)| (Monomial::from_pairs(vs.into_iter().map(|(i, e)| (ODD[i], e))), int(n))),
                    cap,
                )
            },
        )
    }

    /// Brute-force oracle: apply `t^a ∂^b` via repeated single-variable derivatives.
    fn brute_apply(op: &Op, p: &P) -> P {
        let mut out = P::zero(p.weight_cap());
        for (a, b, c) in op.terms() {
            let mut q = p.clone();
            for &(v, e) in b.exps() {
                q = q.derivative(v, e);
            }
            let mult = P::monomial(a.clone(), c.clone(), p.weight_cap());
            out.add_assign_truncated(&mult.mul_truncated(&q, p.weight_cap()));
        }
        out
    }

    proptest! {
        #[test]
        fn apply_matches_brute_force(p in arb_poly(12)) {
            for op in [build_w0(&rat(1, 3), 12), build_w1(12), build_mb(-3, 12).unwrap(), build_virasoro_odd(2, 12).unwrap()] {
                prop_assert_eq!(op.apply(&p), brute_apply(&op, &p));
            }
        }

        #[test]
        fn composition_matches_sequential_action(p in arb_poly(12)) {
            let a = build_w0(&int(0), 12);
            let b = build_virasoro_odd(-2, 12).unwrap();
            let ab = a.compose(&b);
            prop_assert_eq!(ab.apply(&p), a.apply(&b.apply(&p)));
        }

        #[test]
        fn shift_is_homogeneous(p in arb_poly(12)) {
            let w1 = build_w1::<Rational>(12);
            for (m, c) in p.terms() {
                let image = w1.apply(&P::monomial(m.clone(), c.clone(), 12));
                if let Some(w) = image.max_weight() {
                    prop_assert_eq!(image.homogeneous_weight(), Some(w));
                    prop_assert_eq!(w, m.weight() + 3);
                }
            }
        }
    }
}
