//! Tau-functions from both sides of every comparison: cut-and-join series on
//! one side, Q-function expansions and hypergeometric BKP sums on the other,
//! plus the campaigns that compare them.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{usage, Error, Result};
use crate::operators::{build_virasoro_odd, build_w0, build_w1};
use crate::partitions::{enumerate_strict_up_to, hook_eval_delta1, StrictPartition};
use crate::polyring::{HbarSeries, Poly};
use crate::qschur::{mm_factor, q_at, Normalization, Point, QStore};
use crate::report::VerificationReport;
use crate::scalars::{int, rat, Coeff, CoeffScalar, HbarExponent, Rational, Root2Number};

/// Which tau-function.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Model {
    /// Kontsevich–Witten, `α = 1`.
    Kw,
    /// (Generalized) Brézin–Gross–Witten, `α = 0`.
    Bgw,
}

impl Model {
    pub fn alpha(self) -> u32 {
        match self {
            Model::Kw => 1,
            Model::Bgw => 0,
        }
    }

    /// `1 + 2α`: the weight of the ħⁿ component is `n` times this.
    pub fn weight_per_order(self) -> u32 {
        1 + 2 * self.alpha()
    }

    /// The ħ-order reachable at a given weight cap.
    pub fn order_for_weight(self, weight: u32) -> u32 {
        weight / self.weight_per_order()
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kw" => Ok(Model::Kw),
            "bgw" => Ok(Model::Bgw),
            _ => Err(Error::Parse(format!("unknown model '{s}' (expected kw or bgw)"))),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Kw => "kw",
            Model::Bgw => "bgw",
        })
    }
}

/// `e^{ħŴ}·1` through ħ-order `order`, at weight cap `order·(1+2α)`.
/// For KW the value of `nu` is ignored.
pub fn tau_cutjoin<C: Coeff>(model: Model, nu: &C, order: u32) -> Result<HbarSeries<C>> {
    let cap = order * model.weight_per_order();
    let op = match model {
        Model::Kw => build_w1(cap),
        Model::Bgw => build_w0(nu, cap),
    };
    op.exp_action(order, cap)
}

fn hbar_cap(model: Model, cap: u32) -> (u32, HbarExponent) {
    let order = model.order_for_weight(cap);
    (order * model.weight_per_order(), HbarExponent::from_int(order as i64))
}

/// Sums per-partition contributions in partition order, so the result does
/// not depend on how the terms were scheduled.
fn assemble<C: Coeff>(
    lambdas: &[StrictPartition],
    weight_cap: u32,
    hbar: HbarExponent,
    term: impl Fn(&StrictPartition) -> Result<Option<(HbarExponent, Poly<C>)>> + Sync,
) -> Result<HbarSeries<C>> {
    let terms: Vec<_> = lambdas.par_iter().map(&term).collect::<Result<_>>()?;
    let mut out = HbarSeries::zero(weight_cap, hbar);
    for (e, p) in terms.into_iter().flatten() {
        out.add_component(e, &p);
    }
    Ok(out)
}

fn check_store(store: &QStore, weight: u32) -> Result<()> {
    if store.cap() < weight {
        return usage(format!("Q-function store cap {} below required weight {weight}", store.cap()));
    }
    Ok(())
}

fn inverse(x: &Root2Number) -> Result<Root2Number> {
    x.inverse().ok_or_else(|| Error::Domain("division by a vanishing specialization".into()))
}

/// `Σ_{|λ| ≤ cap} (ħ/16)^{|λ|} Q_λ(t) Q_λ(δ_{k,1})³ / Q_{2λ}(δ_{k,1})²`.
pub fn q_expansion_bgw(store: &QStore, cap: u32) -> Result<HbarSeries<Root2Number>> {
    check_store(store, cap)?;
    let lambdas = enumerate_strict_up_to(cap);
    store.prefetch(&lambdas)?;
    assemble(&lambdas, cap, HbarExponent::from_int(cap as i64), |l| {
        let w = l.weight();
        let h = hook_eval_delta1(l);
        let h2 = inverse(&hook_eval_delta1(&l.double()))?;
        let coeff = &(&(&h * &h) * &h) * &(&h2 * &h2);
        let coeff = (&coeff * &mm_factor(l.len())).scale(&rat(1, 16).pow(w as i32));
        let q = store.mac(l)?;
        Ok(Some((HbarExponent::from_int(w as i64), q.map_coeffs(|c| coeff.scale(c)))))
    })
}

/// `Σ_{|λ| ≤ cap} (ħ/16)^{|λ|/3} Q_λ(t) Q_λ(δ_{k,1}) Q_{2λ}(δ_{k,3}/3) / Q_{2λ}(δ_{k,1})`,
/// at weight cap `3⌊cap/3⌋`.
pub fn q_expansion_mm(store: &QStore, cap: u32) -> Result<HbarSeries<Root2Number>> {
    let (weight_cap, hbar) = hbar_cap(Model::Kw, cap);
    check_store(store, weight_cap)?;
    let lambdas = enumerate_strict_up_to(weight_cap);
    assemble(&lambdas, weight_cap, hbar, |l| {
        let w = l.weight();
        let at3 = q_at(&l.double(), &Point::Delta3Over3, Normalization::Mm);
        if Coeff::is_zero(&at3) {
            return Ok(None);
        }
        if w % 3 != 0 {
            return Err(Error::Domain(format!("Q_2λ(δ3/3) nonzero for |λ| = {w} not divisible by 3")));
        }
        let ratio = &hook_eval_delta1(l) * &inverse(&hook_eval_delta1(&l.double()))?;
        let coeff = &(&ratio * &at3) * &mm_factor(l.len());
        let coeff = coeff.scale(&rat(1, 16).pow((w / 3) as i32));
        let q = store.mac(l)?;
        Ok(Some((HbarExponent::from_int((w / 3) as i64), q.map_coeffs(|c| coeff.scale(c)))))
    })
}

/// The content function `n ↦ e^{ξ(n)}` of a hypergeometric BKP tau-function,
/// stored as (ħ-exponent, coefficient) pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct RFunction {
    pub model: Model,
    values: Vec<(HbarExponent, CoeffScalar)>,
}

impl RFunction {
    /// `e^{ξ(n)} = Π_{j ≤ n} r(j)` with `r(z) = ħ((2z−1)² − 4ν)/16`.
    pub fn bgw(nu: &CoeffScalar, max_n: u32) -> Self {
        let mut values = Vec::with_capacity(max_n as usize);
        let mut acc = CoeffScalar::one();
        for j in 1..=max_n {
            let mut r = CoeffScalar::from_rational(int(((2 * j - 1) * (2 * j - 1)) as i64));
            r.sub_assign_ref(&nu.scale(&int(4)));
            acc = acc.mul_ref(&r.scale(&rat(1, 16)));
            values.push((HbarExponent::from_int(j as i64), acc.clone()));
        }
        RFunction { model: Model::Bgw, values }
    }

    /// `e^{ξ(3k)} = ħᵏA_k`, `e^{ξ(3k−1)} = −ħ^{k−1/3}·2A_k/((6k−1)β)`,
    /// `e^{ξ(3k−2)} = ħ^{k−2/3}·8βA_k/(6k−1)`, `A_k = Π_{j≤k}(6j−1)(6j−5)/16`.
    pub fn kw(beta: &CoeffScalar, max_n: u32) -> Result<Self> {
        let Some(beta_inv) = beta.checked_inverse() else {
            return Err(Error::Domain("β must be invertible".into()));
        };
        let mut values = Vec::with_capacity(max_n as usize);
        for n in 1..=max_n {
            let k = n.div_ceil(3) as i64;
            let a_k = (1..=k).fold(int(1), |acc, j| acc * rat((6 * j - 1) * (6 * j - 5), 16));
            let c = match n % 3 {
                0 => CoeffScalar::from_rational(a_k),
                2 => beta_inv.scale(&(a_k * rat(-2, 6 * k - 1))),
                _ => beta.scale(&(a_k * rat(8, 6 * k - 1))),
            };
            values.push((HbarExponent::from_thirds(n as i64), c));
        }
        Ok(RFunction { model: Model::Kw, values })
    }

    pub fn max_n(&self) -> u32 {
        self.values.len() as u32
    }

    /// `e^{ξ(n)}` for `1 ≤ n ≤ max_n`.
    pub fn xi(&self, n: u32) -> &(HbarExponent, CoeffScalar) {
        &self.values[n as usize - 1]
    }

    /// `r_λ = Π_j e^{ξ(λ_j)}`.
    pub fn r_lambda(&self, lambda: &StrictPartition) -> Result<(HbarExponent, CoeffScalar)> {
        if lambda.parts().first().is_some_and(|&p| p > self.max_n()) {
            return usage(format!("r-function tabulated only up to n = {}", self.max_n()));
        }
        Ok(lambda.parts().iter().fold((HbarExponent::ZERO, CoeffScalar::one()), |(e, c), &p| {
            let (pe, pc) = self.xi(p);
            (e + *pe, c.mul_ref(pc))
        }))
    }
}

/// `Σ_λ r_λ Q_λ(t/2) Q_λ(point)` in MM normalization (the point is `t*/2`),
/// over `|λ|` up to the weight cap `(1+2α)⌊cap/(1+2α)⌋` of the model.
pub fn tau_hypergeometric(store: &QStore, r: &RFunction, point: &Point, cap: u32) -> Result<HbarSeries<CoeffScalar>> {
    let (weight_cap, hbar) = hbar_cap(r.model, cap);
    check_store(store, weight_cap)?;
    let lambdas = enumerate_strict_up_to(weight_cap);
    store.prefetch(&lambdas)?;
    let half = rat(1, 2);
    assemble(&lambdas, weight_cap, hbar, |l| {
        let at = q_at(l, point, Normalization::Mm);
        if Coeff::is_zero(&at) {
            return Ok(None);
        }
        let (e, c) = r.r_lambda(l)?;
        let c = c.mul_root2(&(&at * &mm_factor(l.len())));
        let q = store.mac(l)?.rescale_times(&half);
        Ok(Some((e, q.map_coeffs(|x| c.scale(x)))))
    })
}

/// The four expansion conjectures.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Conjecture {
    /// Q-function expansion of the KW tau-function.
    Mm,
    /// Q-function expansion of the BGW tau-function.
    BgwQ,
    /// Hypergeometric form of the generalized BGW tau-function.
    C2,
    /// Hypergeometric form of the KW tau-function.
    C3,
}

impl fmt::Display for Conjecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Conjecture::Mm => "mm",
            Conjecture::BgwQ => "bgw-q",
            Conjecture::C2 => "c2",
            Conjecture::C3 => "c3",
        })
    }
}

/// Values of the symbols used by the hypergeometric campaigns; symbolic by default.
#[derive(Clone, Debug)]
pub struct SymbolValues {
    pub nu: CoeffScalar,
    pub beta: CoeffScalar,
}

impl Default for SymbolValues {
    fn default() -> Self {
        SymbolValues { nu: CoeffScalar::nu(), beta: CoeffScalar::beta() }
    }
}

fn rational_series(s: &HbarSeries<Rational>) -> HbarSeries<Root2Number> {
    s.map_coeffs(|c| Root2Number::from_rational(c.clone()))
}

fn all_coeffs<C: Coeff>(s: &HbarSeries<C>, pred: impl Fn(&C) -> bool) -> bool {
    s.components().all(|(_, p)| p.all_coeffs(&pred))
}

/// Closed-form hook values against Pfaffian specialization, for every
/// partition whose `δ_{k,1}` value an expansion uses.
fn hook_cross_check(report: &mut VerificationReport, lambdas: &[StrictPartition]) {
    for l in lambdas {
        for mu in [l.clone(), l.double()] {
            let expected = hook_eval_delta1(&mu);
            let actual = q_at(&mu, &Point::Delta1, Normalization::Mm);
            report.check(format!("hook {mu}"), &expected, &actual);
        }
    }
}

/// Runs one conjecture campaign up to weight `cap`.
pub fn verify_conjecture(
    which: Conjecture,
    store: &QStore,
    cap: u32,
    symbols: &SymbolValues,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::new(which.to_string());
    report.param("max_weight", cap);
    match which {
        Conjecture::Mm => {
            let (w, _) = hbar_cap(Model::Kw, cap);
            let lhs = q_expansion_mm(store, cap)?;
            let rhs = tau_cutjoin(Model::Kw, &int(0), Model::Kw.order_for_weight(cap))?;
            report.param("weight_cap", w);
            report.check_series(&rational_series(&rhs), &lhs);
            let rational = all_coeffs(&lhs, Root2Number::is_rational);
            report.push("sqrt2-free totals", true, rational, rational);
            hook_cross_check(&mut report, &enumerate_strict_up_to(w));
        }
        Conjecture::BgwQ => {
            let lhs = q_expansion_bgw(store, cap)?;
            let rhs = tau_cutjoin(Model::Bgw, &int(0), cap)?;
            report.check_series(&rational_series(&rhs), &lhs);
            let rational = all_coeffs(&lhs, Root2Number::is_rational);
            report.push("sqrt2-free totals", true, rational, rational);
            hook_cross_check(&mut report, &enumerate_strict_up_to(cap));
            // the hypergeometric route at ν = 0 must agree with this one
            let hyper = tau_hypergeometric(store, &RFunction::bgw(&CoeffScalar::zero(), cap), &Point::Delta1, cap)?;
            let lifted = lhs.rescale_times(&Root2Number::from_rational(rat(1, 2))).lift();
            let mut routes = VerificationReport::new("routes");
            routes.check_series(&lifted, &hyper);
            report.merge("hypergeometric route ", routes);
        }
        Conjecture::C2 => {
            report.param("nu", &symbols.nu);
            let lhs = tau_hypergeometric(store, &RFunction::bgw(&symbols.nu, cap), &Point::Delta1, cap)?;
            let rhs = tau_cutjoin(Model::Bgw, &symbols.nu, cap)?.rescale_times(&CoeffScalar::from_rational(rat(1, 2)));
            report.check_series(&rhs, &lhs);
            let ok = all_coeffs(&lhs, |c| c.is_sqrt2_free() && c.is_beta_free());
            report.push("sqrt2-free, polynomial in nu", true, ok, ok);
        }
        Conjecture::C3 => {
            report.param("beta", &symbols.beta);
            let (w, _) = hbar_cap(Model::Kw, cap);
            report.param("weight_cap", w);
            let lhs = tau_hypergeometric(store, &RFunction::kw(&symbols.beta, w.max(1))?, &Point::Delta3Over3, cap)?;
            let rhs = tau_cutjoin(Model::Kw, &CoeffScalar::zero(), Model::Kw.order_for_weight(cap))?
                .rescale_times(&CoeffScalar::from_rational(rat(1, 2)));
            report.check_series(&rhs, &lhs);
            let beta_free = all_coeffs(&lhs, |c| c.is_beta_free() && c.is_sqrt2_free());
            report.push("beta-free, sqrt2-free totals", true, beta_free, beta_free);
            let integral = lhs.components().all(|(e, _)| e.as_int().is_some());
            report.push("integer hbar exponents", true, integral, integral);
        }
    }
    Ok(report)
}

/// A single `c·ħ^e` term; every zero is equal regardless of exponent.
#[derive(Clone, Debug)]
struct HbarTerm(HbarExponent, CoeffScalar);

impl PartialEq for HbarTerm {
    fn eq(&self, other: &Self) -> bool {
        match (Coeff::is_zero(&self.1), Coeff::is_zero(&other.1)) {
            (true, true) => true,
            (false, false) => self.0 == other.0 && self.1 == other.1,
            _ => false,
        }
    }
}

impl fmt::Display for HbarTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if Coeff::is_zero(&self.1) {
            write!(f, "0")
        } else {
            write!(f, "({})*hbar^{}", self.1, self.0)
        }
    }
}

/// `r^{KW}_λ Q_λ(δ_{k,3}/3) = (ħ/16)^{|λ|/3} Q_λ(δ_{k,1})/Q_{2λ}(δ_{k,1}) · Q_{2λ}(δ_{k,3}/3)`
/// for every strict `λ` with `|λ| ≤ cap`, with symbolic β.
pub fn verify_perpart_relation(cap: u32, beta: &CoeffScalar) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("perpart");
    report.param("max_weight", cap).param("beta", beta);
    let r = RFunction::kw(beta, cap.max(1))?;
    let lambdas = enumerate_strict_up_to(cap);
    let rows: Vec<(HbarTerm, Option<HbarTerm>)> = lambdas
        .par_iter()
        .map(|l| {
            let w = l.weight();
            let (e, c) = r.r_lambda(l)?;
            let lhs = HbarTerm(e, c.mul_root2(&q_at(l, &Point::Delta3Over3, Normalization::Mm)));
            let at3 = q_at(&l.double(), &Point::Delta3Over3, Normalization::Mm);
            let rhs = if Coeff::is_zero(&at3) {
                Some(HbarTerm(HbarExponent::from_thirds(w as i64), CoeffScalar::zero()))
            } else if w % 3 == 0 {
                let ratio = &hook_eval_delta1(l) * &inverse(&hook_eval_delta1(&l.double()))?;
                let v = (&ratio * &at3).scale(&rat(1, 16).pow((w / 3) as i32));
                Some(HbarTerm(HbarExponent::from_int((w / 3) as i64), CoeffScalar::constant(v)))
            } else {
                // (1/16)^{w/3} is irrational: not representable, hence a failure
                None
            };
            Ok((lhs, rhs))
        })
        .collect::<Result<_>>()?;
    for (l, (lhs, rhs)) in lambdas.iter().zip(rows) {
        match rhs {
            Some(rhs) => report.check(l.to_string(), &rhs, &lhs),
            None => report.push(l.to_string(), "irrational power of 16", &lhs, false),
        }
    }
    Ok(report)
}

/// Virasoro constraints `L̂ᵏ_α τ_α = 0` for `k ≥ −α` and the weight grading of
/// every component, on the cut-and-join series (`ν = 0`) up to weight `cap`.
///
/// At order ħⁿ the constraint reads
/// `½L̂_{2k}τ_n − ½∂_{t_{2k+1+2α}}τ_{n+1} + δ_{k,0}τ_n/16 = 0`, checked for
/// every `n` with `τ_{n+1}` inside the weight cap.
pub fn verify_virasoro(model: Model, cap: u32) -> Result<VerificationReport> {
    let mut report = VerificationReport::new(format!("virasoro-{model}"));
    report.param("max_weight", cap);
    let order = model.order_for_weight(cap);
    let w = order * model.weight_per_order();
    let tau = tau_cutjoin(model, &int(0), order)?;
    let alpha = model.alpha() as i64;

    for n in 0..=order {
        let comp = tau.component(HbarExponent::from_int(n as i64));
        let expected = Some(n * model.weight_per_order());
        report.push(
            format!("grading hbar^{n}"),
            format!("{expected:?}"),
            format!("{:?}", comp.homogeneous_weight()),
            comp.homogeneous_weight() == expected,
        );
    }

    let k_max = w as i64 / 2;
    for k in -alpha..=k_max {
        let l2k = build_virasoro_odd::<Rational>(2 * k, w)?;
        let var = (2 * k + 1 + 2 * alpha) as u32;
        for n in 0..order {
            let tn = tau.component(HbarExponent::from_int(n as i64));
            let next = tau.component(HbarExponent::from_int(n as i64 + 1));
            let mut res = l2k.apply(&tn).scale_rational(&rat(1, 2));
            res.add_assign_truncated(&next.derivative(var, 1).scale_rational(&rat(-1, 2)));
            if k == 0 {
                res.add_assign_truncated(&tn.scale_rational(&rat(1, 16)));
            }
            report.check_poly(&format!("k={k} hbar^{n}"), &Poly::zero(w), &res);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::Monomial;
    use crate::qschur::q_mac_at;

    fn h(n: i64) -> HbarExponent {
        HbarExponent::from_int(n)
    }

    fn sp(s: &str) -> StrictPartition {
        s.parse().unwrap()
    }

    #[test]
    fn cutjoin_leading_terms() {
        let bgw = tau_cutjoin(Model::Bgw, &int(0), 1).unwrap();
        assert_eq!(bgw.to_string(), "(1) + (1/8*t1)*hbar^1");
        let kw = tau_cutjoin(Model::Kw, &int(0), 1).unwrap();
        assert_eq!(kw.to_string(), "(1) + (1/6*t1^3 + 1/8*t3)*hbar^1");
        let nu = CoeffScalar::nu();
        let g = tau_cutjoin(Model::Bgw, &nu, 1).unwrap();
        let mut c = CoeffScalar::from_rational(rat(1, 8));
        c.sub_assign_ref(&nu.scale(&rat(1, 2)));
        assert_eq!(g.component(h(1)), Poly::monomial(Monomial::var(1), c, 1));
    }

    #[test]
    fn half_integer_n_is_trivial() {
        let s = tau_cutjoin(Model::Bgw, &rat(1, 4), 8).unwrap();
        assert_eq!(s, HbarSeries::one(8, h(8)));
    }

    #[test]
    fn bgw_expansion_low_terms() {
        let store = QStore::new(6);
        let s = q_expansion_bgw(&store, 1).unwrap();
        assert_eq!(s.component(h(1)).to_string(), "1/8*t1");
    }

    #[test]
    fn r_function_values() {
        let kw = RFunction::kw(&CoeffScalar::beta(), 6).unwrap();
        assert_eq!(kw.xi(3), &(h(1), CoeffScalar::from_rational(rat(5, 16))));
        // λ = (2,1): β cancels and the exponent is 1
        let (e, c) = kw.r_lambda(&sp("2,1")).unwrap();
        assert_eq!(e, h(1));
        assert_eq!(c, CoeffScalar::from_rational(rat(-1, 16)));
        let bgw = RFunction::bgw(&CoeffScalar::zero(), 2);
        assert_eq!(bgw.xi(2), &(h(2), CoeffScalar::from_rational(rat(9, 256))));
        assert!(RFunction::kw(&CoeffScalar::zero(), 3).is_err());
    }

    #[test]
    fn hypergeometric_single_terms() {
        let store = QStore::new(3);
        let bgw = tau_hypergeometric(&store, &RFunction::bgw(&CoeffScalar::zero(), 1), &Point::Delta1, 1).unwrap();
        assert_eq!(bgw.component(h(1)).to_string(), "1/16*t1");
        let kw = RFunction::kw(&CoeffScalar::beta(), 3).unwrap();
        let s = tau_hypergeometric(&store, &kw, &Point::Delta3Over3, 3).unwrap();
        assert_eq!(s.component(h(1)).to_string(), "1/48*t1^3 + 1/16*t3");
    }

    #[test]
    fn small_campaigns_pass() {
        let store = QStore::new(6);
        let sym = SymbolValues::default();
        for (which, cap) in [(Conjecture::BgwQ, 4), (Conjecture::Mm, 6), (Conjecture::C2, 3), (Conjecture::C3, 6)] {
            let r = verify_conjecture(which, &store, cap, &sym).unwrap();
            assert!(r.passed(), "{which}: {:?}", r.failures().collect::<Vec<_>>());
        }
        let p = verify_perpart_relation(6, &CoeffScalar::beta()).unwrap();
        assert!(p.passed(), "{:?}", p.failures().collect::<Vec<_>>());
        for model in [Model::Bgw, Model::Kw] {
            let v = verify_virasoro(model, 6).unwrap();
            assert!(v.passed(), "{model}: {:?}", v.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn perpart_examples() {
        let r = verify_perpart_relation(3, &CoeffScalar::beta()).unwrap();
        let item = |l: &str| r.items.iter().find(|i| i.label == l).unwrap().clone();
        assert_eq!(item("3").actual, "(5/48*sqrt2)*hbar^1");
        assert_eq!(item("2,1").actual, "(1/24)*hbar^1");
        assert_eq!(item("1").actual, "0");
    }

    #[test]
    fn delta1_value_of_two_row_partition() {
        assert_eq!(q_mac_at(&sp("2,1"), &Point::Delta1), rat(4, 3));
    }
}
