//! Schur Q-functions as explicit polynomials in the odd times.
//!
//! Everything is built from the one-row functions `q_n`, the coefficients of
//! `exp(2 Σ_{k odd} t_k z^k)`. Two-row functions are quadratic in the `q_n`
//! and a general `Q^Mac_λ` is the Pfaffian of the two-row matrix. Internally
//! everything is Macdonald-normalized and rational; the normalization
//! `Q_λ = 2^{−ℓ(λ)/2} Q^Mac_λ` is applied only when a [`QFunction`] is
//! specialized or lifted.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, RwLock};

use rayon::prelude::*;

use crate::cache::CacheStore;
use crate::error::{usage, Error, Result};
use crate::partitions::{enumerate_strict_up_to, hook_eval_delta1, StrictPartition};
use crate::polyring::{Monomial, Poly, TwoSetPolynomial, PRIMED};
use crate::report::VerificationReport;
use crate::scalars::{int, rat, Coeff, Rational, Root2Number};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Normalization {
    /// Macdonald's `Q^Mac_λ`.
    Mac,
    /// `Q_λ = 2^{−ℓ(λ)/2} Q^Mac_λ`.
    Mm,
}

impl FromStr for Normalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mac" => Ok(Normalization::Mac),
            "mm" => Ok(Normalization::Mm),
            _ => Err(Error::Parse(format!("unknown normalization '{s}' (expected mac or mm)"))),
        }
    }
}

/// A specialization point for the time variables.
#[derive(Clone, PartialEq, Debug)]
pub enum Point {
    /// `t_k = δ_{k,1}`.
    Delta1,
    /// `t_k = δ_{k,3}/3`.
    Delta3Over3,
    /// Arbitrary finitely supported rational point.
    Custom(BTreeMap<u32, Rational>),
}

impl Point {
    pub fn values(&self) -> BTreeMap<u32, Rational> {
        match self {
            Point::Delta1 => BTreeMap::from([(1, int(1))]),
            Point::Delta3Over3 => BTreeMap::from([(3, rat(1, 3))]),
            Point::Custom(m) => m.clone(),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Delta1 => write!(f, "delta1"),
            Point::Delta3Over3 => write!(f, "delta3over3"),
            Point::Custom(m) => {
                let parts: Vec<String> = m.iter().map(|(k, v)| format!("t{k}={v}")).collect();
                write!(f, "{{{}}}", parts.join(", "))
            }
        }
    }
}

/// `2^{−ℓ/2}`, the Macdonald-to-MM factor for a partition of length `len`.
pub fn mm_factor(len: usize) -> Root2Number {
    Root2Number::two_pow_half(-(len as i64))
}

/// A Q-function with its normalization; the polynomial is stored
/// Macdonald-normalized.
#[derive(Clone, PartialEq, Debug)]
pub struct QFunction {
    pub partition: StrictPartition,
    pub normalization: Normalization,
    mac: Arc<Poly<Rational>>,
}

impl QFunction {
    /// The Macdonald polynomial regardless of the normalization tag.
    pub fn mac_poly(&self) -> &Poly<Rational> {
        &self.mac
    }

    /// The scalar factor relating this function to `Q^Mac_λ`.
    pub fn factor(&self) -> Root2Number {
        match self.normalization {
            Normalization::Mac => Coeff::one(),
            Normalization::Mm => mm_factor(self.partition.len()),
        }
    }

    /// The polynomial in its own normalization.
    pub fn poly(&self) -> Poly<Root2Number> {
        let f = self.factor();
        self.mac.map_coeffs(|c| f.scale(c))
    }

    /// Exact value at a rational point.
    pub fn specialize(&self, point: &Point) -> Root2Number {
        self.factor().scale(&self.mac.specialize_times(&point.values()))
    }
}

impl fmt::Display for QFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.normalization {
            Normalization::Mac => write!(f, "{}", self.mac),
            Normalization::Mm => write!(f, "{}", self.poly()),
        }
    }
}

/// Ring operations needed by [`pfaffian`].
pub trait PfaffianEntry: Clone + Send + Sync {
    fn pf_mul(&self, rhs: &Self) -> Self;
    /// `self ± rhs`.
    fn pf_add(&mut self, rhs: &Self, negate: bool);
}

impl PfaffianEntry for Rational {
    fn pf_mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn pf_add(&mut self, rhs: &Self, negate: bool) {
        if negate {
            *self -= rhs;
        } else {
            *self += rhs;
        }
    }
}

impl PfaffianEntry for Poly<Rational> {
    fn pf_mul(&self, rhs: &Self) -> Self {
        self.mul_truncated(rhs, self.weight_cap())
    }
    fn pf_add(&mut self, rhs: &Self, negate: bool) {
        if negate {
            self.add_assign_truncated(&rhs.neg());
        } else {
            self.add_assign_truncated(rhs);
        }
    }
}

/// Pfaffian of an antisymmetric matrix of even size (only the upper triangle
/// is read), by expansion along the first row with memoization on the set of
/// remaining indices.
pub fn pfaffian<T: PfaffianEntry>(matrix: &[Vec<T>], zero: &T, one: &T) -> T {
    let n = matrix.len();
    assert!(n.is_multiple_of(2) && n < 32, "pfaffian needs an even size below 32");
    let mut memo: HashMap<u32, T> = HashMap::new();
    fn go<T: PfaffianEntry>(mask: u32, m: &[Vec<T>], zero: &T, one: &T, memo: &mut HashMap<u32, T>) -> T {
        if mask == 0 {
            return one.clone();
        }
        if let Some(v) = memo.get(&mask) {
            return v.clone();
        }
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut acc = zero.clone();
        let mut negate = false;
        let mut bits = rest;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let minor = go(rest & !(1 << j), m, zero, one, memo);
            acc.pf_add(&m[i][j].pf_mul(&minor), negate);
            negate = !negate;
        }
        memo.insert(mask, acc.clone());
        acc
    }
    let full = if n == 0 { 0 } else { (1u32 << n) - 1 };
    go(full, matrix, zero, one, &mut memo)
}

/// The one-row functions `q_0, …, q_cap` via `n q_n = Σ_{k odd} 2k t_k q_{n−k}`.
pub fn q_rows(cap: u32) -> Vec<Poly<Rational>> {
    let mut rows = vec![Poly::one(cap)];
    for n in 1..=cap {
        let mut acc = Poly::zero(cap);
        for k in (1..=n).step_by(2) {
            let tk = Poly::monomial(Monomial::var(k), int(2 * k as i64), cap);
            acc.add_assign_truncated(&tk.mul_truncated(&rows[(n - k) as usize], cap));
        }
        rows.push(acc.scale_rational(&rat(1, n as i64)));
    }
    rows
}

/// `q_n` at a rational point, by the same recurrence.
pub fn q_values(point: &BTreeMap<u32, Rational>, max_n: u32) -> Vec<Rational> {
    let mut vals = vec![int(1)];
    for n in 1..=max_n {
        let mut acc = int(0);
        for (&k, tk) in point.range(1..=n) {
            if k % 2 == 1 {
                acc += tk * int(2 * k as i64) * &vals[(n - k) as usize];
            }
        }
        vals.push(acc / int(n as i64));
    }
    vals
}

/// Coefficient of `zⁿ` in `exp(2 Σ_{k odd} t_k z^k)`.
pub fn q_one_row(n: u32, cap: u32) -> Result<Poly<Rational>> {
    if cap < n {
        return usage(format!("q_one_row: cap {cap} below n = {n}"));
    }
    Ok(q_rows(n).pop().expect("rows start at q_0").with_cap_unchecked(cap))
}

/// The alternating two-row combination over any sequence of one-row values.
fn two_row_from<T: PfaffianEntry>(q: &[T], a: u32, b: u32, zero: &T) -> T {
    if a < b {
        let mut out = zero.clone();
        out.pf_add(&two_row_from(q, b, a, zero), true);
        return out;
    }
    let (a, b) = (a as usize, b as usize);
    let mut acc = q[a].pf_mul(&q[b]);
    for i in 1..=b {
        let term = q[a + i].pf_mul(&q[b - i]);
        // 2·(−1)^i
        acc.pf_add(&term, i % 2 == 1);
        acc.pf_add(&term, i % 2 == 1);
    }
    acc
}

/// `Q^Mac_{(a,b)} = q_a q_b + 2 Σ_{i=1}^{b} (−1)^i q_{a+i} q_{b−i}`, antisymmetric in `(a, b)`.
pub fn q_two_row(a: u32, b: u32, cap: u32) -> Result<Poly<Rational>> {
    if cap < a + b {
        return usage(format!("q_two_row: cap {cap} below a + b = {}", a + b));
    }
    let rows = q_rows(a + b);
    Ok(two_row_from(&rows, a, b, &Poly::zero(a + b)).with_cap_unchecked(cap))
}

/// Parts padded with a zero to even length.
fn padded_parts(lambda: &StrictPartition) -> Vec<u32> {
    let mut parts = lambda.parts().to_vec();
    if parts.len() % 2 == 1 {
        parts.push(0);
    }
    parts
}

fn mac_from_rows<T: PfaffianEntry>(rows: &[T], lambda: &StrictPartition, zero: &T, one: &T) -> T {
    let parts = padded_parts(lambda);
    let matrix: Vec<Vec<T>> = parts
        .iter()
        .map(|&a| parts.iter().map(|&b| if a == b { zero.clone() } else { two_row_from(rows, a, b, zero) }).collect())
        .collect();
    pfaffian(&matrix, zero, one)
}

/// `Q^Mac_λ(point)` computed by specializing the one-row functions first.
pub fn q_mac_at(lambda: &StrictPartition, point: &Point) -> Rational {
    let vals = q_values(&point.values(), lambda.weight());
    mac_from_rows(&vals, lambda, &int(0), &int(1))
}

/// `Q_λ(point)` in the given normalization, via [`q_mac_at`].
pub fn q_at(lambda: &StrictPartition, point: &Point, norm: Normalization) -> Root2Number {
    let v = q_mac_at(lambda, point);
    match norm {
        Normalization::Mac => Root2Number::from_rational(v),
        Normalization::Mm => mm_factor(lambda.len()).scale(&v),
    }
}

/// `Q^Mac_λ` as a polynomial with weight cap `cap`.
pub fn q_mac(lambda: &StrictPartition, cap: u32) -> Result<QFunction> {
    QStore::new(cap).q_function(lambda, Normalization::Mac)
}

/// Memoizing source of Macdonald Q-polynomials at a fixed weight cap, with an
/// optional persistent cache.
pub struct QStore {
    cap: u32,
    rows: Vec<Poly<Rational>>,
    memo: RwLock<HashMap<StrictPartition, Arc<Poly<Rational>>>>,
    disk: Option<RwLock<CacheStore>>,
    pfaffian_evaluations: AtomicU64,
}

impl QStore {
    pub fn new(cap: u32) -> Self {
        QStore {
            cap,
            rows: q_rows(cap),
            memo: RwLock::new(HashMap::new()),
            disk: None,
            pfaffian_evaluations: AtomicU64::new(0),
        }
    }

    /// A store backed by a cache directory; call [`QStore::flush`] to persist.
    pub fn with_cache(cap: u32, dir: impl AsRef<Path>) -> Result<Self> {
        let mut s = Self::new(cap);
        s.disk = Some(RwLock::new(CacheStore::open(dir)?));
        Ok(s)
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    /// How many Pfaffians this store has evaluated (cache hits excluded).
    pub fn pfaffian_evaluations(&self) -> u64 {
        self.pfaffian_evaluations.load(Ordering::Relaxed)
    }

    pub fn q_row(&self, n: u32) -> &Poly<Rational> {
        &self.rows[n as usize]
    }

    fn compute(&self, lambda: &StrictPartition) -> Poly<Rational> {
        let w = lambda.weight();
        self.pfaffian_evaluations.fetch_add(1, Ordering::Relaxed);
        // work at the exact weight: the result is homogeneous, so raising the
        // cap afterwards is exact
        let rows: Vec<Poly<Rational>> =
            self.rows[..=w as usize].iter().map(|r| r.clone().with_cap_unchecked(w)).collect();
        mac_from_rows(&rows, lambda, &Poly::zero(w), &Poly::one(w)).with_cap_unchecked(self.cap)
    }

    /// `Q^Mac_λ`; memoized, and read from / written to the cache if present.
    pub fn mac(&self, lambda: &StrictPartition) -> Result<Arc<Poly<Rational>>> {
        if lambda.weight() > self.cap {
            return usage(format!("|{lambda}| = {} exceeds the weight cap {}", lambda.weight(), self.cap));
        }
        if let Some(p) = self.memo.read().expect("memo lock").get(lambda) {
            return Ok(p.clone());
        }
        let key = CacheStore::key(lambda, self.cap);
        let cached = match &self.disk {
            Some(d) => d.read().expect("cache lock").get::<Rational>(&key)?,
            None => None,
        };
        let p = match cached {
            Some(p) => p,
            None => {
                let p = self.compute(lambda);
                if let Some(d) = &self.disk {
                    d.write().expect("cache lock").put(&key, &p);
                }
                p
            }
        };
        let p = Arc::new(p);
        self.memo.write().expect("memo lock").entry(lambda.clone()).or_insert(p.clone());
        Ok(p)
    }

    /// Computes many partitions in parallel (results are order-independent).
    pub fn prefetch(&self, lambdas: &[StrictPartition]) -> Result<()> {
        lambdas.par_iter().try_for_each(|l| self.mac(l).map(|_| ()))
    }

    pub fn q_function(&self, lambda: &StrictPartition, norm: Normalization) -> Result<QFunction> {
        Ok(QFunction { partition: lambda.clone(), normalization: norm, mac: self.mac(lambda)? })
    }

    /// Persists new cache entries.
    pub fn flush(&self) -> Result<()> {
        match &self.disk {
            Some(d) => d.write().expect("cache lock").flush(),
            None => Ok(()),
        }
    }
}

/// `Σ_{λ} Q_λ(t) Q_λ(t′) = exp(2 Σ_{k odd} k t_k t′_k)` up to joint weight `cap`.
pub fn verify_cauchy(cap: u32) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("cauchy");
    report.param("max_weight", cap);
    let store = QStore::new(cap / 2);
    let lambdas = enumerate_strict_up_to(cap / 2);
    store.prefetch(&lambdas)?;

    let terms: Vec<TwoSetPolynomial<Rational>> = lambdas
        .par_iter()
        .map(|l| {
            let q = store.mac(l)?.as_ref().clone().with_cap_unchecked(cap);
            // 2^{−ℓ/2}·2^{−ℓ/2} = 2^{−ℓ}
            let scale = Rational::new(1.into(), num_bigint::BigInt::from(1) << l.len());
            Ok(q.mul_truncated(&q.prime(), cap).scale_rational(&scale))
        })
        .collect::<Result<_>>()?;
    let mut lhs = Poly::zero(cap);
    for t in &terms {
        lhs.add_assign_truncated(t);
    }

    let mut arg = Poly::zero(cap);
    for k in (1..=cap).step_by(2) {
        arg.add_term(Monomial::from_pairs([(k, 1), (k | PRIMED, 1)]), int(2 * k as i64));
    }
    let rhs = arg.exp()?;
    for w in 0..=cap {
        report.check_poly(&format!("weight {w}"), &rhs.component(w), &lhs.component(w));
    }
    Ok(report)
}

/// Closed-form hook values against polynomial specialization at `δ_{k,1}`.
pub fn verify_hook(cap: u32) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("hook");
    report.param("max_weight", cap);
    let store = QStore::new(cap);
    let lambdas = enumerate_strict_up_to(cap);
    store.prefetch(&lambdas)?;
    for l in &lambdas {
        let q = store.q_function(l, Normalization::Mm)?;
        report.check(l.to_string(), &hook_eval_delta1(l), &q.specialize(&Point::Delta1));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(s: &str) -> StrictPartition {
        s.parse().unwrap()
    }

    #[test]
    fn one_row_examples() {
        assert_eq!(q_one_row(0, 4).unwrap(), Poly::one(4));
        assert_eq!(q_one_row(1, 4).unwrap().to_string(), "2*t1");
        assert_eq!(q_one_row(3, 3).unwrap().to_string(), "4/3*t1^3 + 2*t3");
        assert!(q_one_row(3, 2).is_err());
    }

    /// Independent oracle: the coefficients of `exp(2 Σ t_k z^k)` read off the
    /// truncated exponential with `z` folded into the weight.
    #[test]
    fn one_row_matches_exponential() {
        let cap = 9;
        let arg = Poly::<Rational>::linear((1..=cap).step_by(2).map(|k| (k, int(2))), cap);
        let e = arg.exp().unwrap();
        let rows = q_rows(cap);
        for n in 0..=cap {
            assert_eq!(e.component(n), rows[n as usize], "q_{n}");
        }
    }

    #[test]
    fn two_row_examples() {
        assert_eq!(q_two_row(1, 0, 1).unwrap().to_string(), "2*t1");
        assert_eq!(q_two_row(2, 1, 3).unwrap().to_string(), "4/3*t1^3 - 4*t3");
        assert_eq!(q_two_row(1, 2, 3).unwrap(), q_two_row(2, 1, 3).unwrap().neg());
        // the alternating sum vanishes on the diagonal for a > 0
        assert!(q_two_row(3, 3, 6).unwrap().is_zero());
    }

    #[test]
    fn mac_examples() {
        assert_eq!(q_mac(&StrictPartition::empty(), 3).unwrap().mac_poly(), &Poly::one(3));
        assert_eq!(q_mac(&sp("2,1"), 3).unwrap().to_string(), "4/3*t1^3 - 4*t3");
        let q3 = q_mac(&sp("3"), 3).unwrap();
        assert_eq!(q3.specialize(&Point::Delta3Over3), Root2Number::from_rational(rat(2, 3)));
        let mm = QFunction { normalization: Normalization::Mm, ..q3 };
        assert_eq!(mm.specialize(&Point::Delta3Over3), Root2Number::new(int(0), rat(1, 3)));
        assert!(q_mac(&sp("3,1"), 3).is_err());
    }

    #[test]
    fn pfaffian_of_small_matrices() {
        let m = |v: [[i64; 4]; 4]| -> Vec<Vec<Rational>> {
            v.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
        };
        // Pf = a12 a34 − a13 a24 + a14 a23
        let a = m([[0, 2, 3, 5], [-2, 0, 7, 11], [-3, -7, 0, 13], [-5, -11, -13, 0]]);
        assert_eq!(pfaffian(&a, &int(0), &int(1)), int(2 * 13 - 3 * 11 + 5 * 7));
        assert_eq!(pfaffian::<Rational>(&[], &int(0), &int(1)), int(1));
    }

    #[test]
    fn homogeneous_and_cap_independent() {
        let big = QStore::new(14);
        for l in enumerate_strict_up_to(10) {
            let p = big.mac(&l).unwrap();
            assert_eq!(p.homogeneous_weight(), Some(l.weight()), "{l}");
            let minimal = q_mac(&l, l.weight()).unwrap();
            assert_eq!(p.as_ref().clone().truncate(l.weight()).unwrap(), *minimal.mac_poly(), "{l}");
        }
    }

    #[test]
    fn scalar_route_matches_polynomial_route() {
        let store = QStore::new(12);
        let odd = Point::Custom(BTreeMap::from([(1, rat(1, 2)), (3, int(-2)), (5, rat(3, 7))]));
        for l in enumerate_strict_up_to(12) {
            let q = store.q_function(&l, Normalization::Mac).unwrap();
            for pt in [Point::Delta1, Point::Delta3Over3, odd.clone()] {
                assert_eq!(Root2Number::from_rational(q_mac_at(&l, &pt)), q.specialize(&pt), "{l} at {pt}");
            }
        }
    }

    #[test]
    fn delta3_vanishes_off_multiples_of_three() {
        for l in enumerate_strict_up_to(16) {
            if l.weight() % 3 != 0 {
                assert!(Coeff::is_zero(&q_mac_at(&l, &Point::Delta3Over3)), "{l}");
            }
        }
    }

    #[test]
    fn hook_and_cauchy_small() {
        assert!(verify_hook(8).unwrap().passed());
        let c = verify_cauchy(2).unwrap();
        assert!(c.passed());
        let c0 = verify_cauchy(0).unwrap();
        assert!(c0.passed());
        assert_eq!(c0.items[0].expected, "1");
        assert!(c.items.iter().any(|i| i.expected == "2*t1*s1"));
    }

    #[test]
    fn store_counts_and_caches() {
        let dir = tempfile::tempdir().unwrap();
        let lambdas = enumerate_strict_up_to(8);
        let cold = QStore::with_cache(8, dir.path()).unwrap();
        cold.prefetch(&lambdas).unwrap();
        cold.flush().unwrap();
        assert_eq!(cold.pfaffian_evaluations(), lambdas.len() as u64);
        let warm = QStore::with_cache(8, dir.path()).unwrap();
        warm.prefetch(&lambdas).unwrap();
        assert_eq!(warm.pfaffian_evaluations(), 0);
        for l in &lambdas {
            assert_eq!(warm.mac(l).unwrap(), cold.mac(l).unwrap());
        }
    }
}
