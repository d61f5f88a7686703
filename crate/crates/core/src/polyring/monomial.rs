use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use smallvec::SmallVec;

/// Flag bit marking a variable of the second time family `t′`.
pub const PRIMED: u32 = 1 << 31;

/// Weight (= index `k`) of a variable id.
#[inline]
pub fn var_weight(var: u32) -> u32 {
    var & !PRIMED
}

/// A monomial `∏ t_k^{e_k}` stored as `(variable, exponent)` pairs sorted by variable.
///
/// Variable ids are the time index `k`; ids of the second family carry
/// [`PRIMED`]. Ordering is graded by weight, then lexicographic on the dense
/// exponent vector `(e₁, e₃, e₅, …)` with larger exponents first, so that
/// `t₁³` precedes `t₃`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial {
    weight: u32,
    exps: SmallVec<[(u32, u32); 4]>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(var: u32) -> Self {
        Self::var_pow(var, 1)
    }

    pub fn var_pow(var: u32, exp: u32) -> Self {
        if exp == 0 {
            return Monomial::one();
        }
        let mut exps = SmallVec::new();
        exps.push((var, exp));
        Monomial { weight: var_weight(var) * exp, exps }
    }

    /// Builds from arbitrary pairs, merging repeats and dropping zero exponents.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let mut v: Vec<(u32, u32)> = pairs.into_iter().filter(|&(_, e)| e > 0).collect();
        v.sort_unstable();
        let mut exps: SmallVec<[(u32, u32); 4]> = SmallVec::new();
        for (var, e) in v {
            match exps.last_mut() {
                Some(last) if last.0 == var => last.1 += e,
                _ => exps.push((var, e)),
            }
        }
        let weight = exps.iter().map(|&(v, e)| var_weight(v) * e).sum();
        Monomial { weight, exps }
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    /// Number of variables counted with multiplicity.
    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&(_, e)| e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exps(&self) -> &[(u32, u32)] {
        &self.exps
    }

    pub fn exponent(&self, var: u32) -> u32 {
        self.exps.binary_search_by_key(&var, |&(v, _)| v).map(|i| self.exps[i].1).unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps: SmallVec<[(u32, u32); 4]> = SmallVec::with_capacity(self.exps.len() + other.exps.len());
        let (mut i, mut j) = (0, 0);
        while i < self.exps.len() && j < other.exps.len() {
            let (a, b) = (self.exps[i], other.exps[j]);
            match a.0.cmp(&b.0) {
                Ordering::Less => {
                    exps.push(a);
                    i += 1;
                }
                Ordering::Greater => {
                    exps.push(b);
                    j += 1;
                }
                Ordering::Equal => {
                    exps.push((a.0, a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        exps.extend_from_slice(&self.exps[i..]);
        exps.extend_from_slice(&other.exps[j..]);
        Monomial { weight: self.weight + other.weight, exps }
    }

    /// Applies `∂^ann` to this monomial: `Some((falling-factorial factor, quotient))`,
    /// or `None` when the derivative vanishes.
    pub fn differentiate(&self, ann: &Monomial) -> Option<(BigInt, Monomial)> {
        let mut factor = BigInt::from(1);
        let mut exps = self.exps.clone();
        for &(var, d) in ann.exps() {
            let idx = exps.binary_search_by_key(&var, |&(v, _)| v).ok()?;
            let e = exps[idx].1;
            if e < d {
                return None;
            }
            for j in 0..d {
                factor *= e - j;
            }
            exps[idx].1 = e - d;
        }
        exps.retain(|&mut (_, e)| e > 0);
        Some((factor, Monomial { weight: self.weight - ann.weight, exps }))
    }

    /// Renames every variable through `f`.
    pub fn map_vars(&self, f: impl Fn(u32) -> u32) -> Monomial {
        Monomial::from_pairs(self.exps.iter().map(|&(v, e)| (f(v), e)))
    }

    /// Splits into the unprimed and primed factors.
    pub fn split_families(&self) -> (Monomial, Monomial) {
        let t = Monomial::from_pairs(self.exps.iter().copied().filter(|&(v, _)| v & PRIMED == 0));
        let tp = Monomial::from_pairs(self.exps.iter().copied().filter(|&(v, _)| v & PRIMED != 0));
        (t, tp)
    }

    /// Index-exponent pairs with the family flag stripped.
    pub fn index_pairs(&self) -> Vec<[u32; 2]> {
        self.exps.iter().map(|&(v, e)| [var_weight(v), e]).collect()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight.cmp(&other.weight).then_with(|| {
            // lexicographic on dense exponent vectors, larger first
            let (a, b) = (&self.exps, &other.exps);
            for (x, y) in a.iter().zip(b.iter()) {
                if x.0 != y.0 {
                    // the smaller variable id is present in one and absent in the other
                    return x.0.cmp(&y.0);
                }
                if x.1 != y.1 {
                    return y.1.cmp(&x.1);
                }
            }
            b.len().cmp(&a.len())
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return write!(f, "1");
        }
        for (i, &(v, e)) in self.exps.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if v & PRIMED != 0 {
                write!(f, "s{}", var_weight(v))?;
            } else {
                write!(f, "t{v}")?;
            }
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_then_larger_exponent_first() {
        let t1_3 = Monomial::var_pow(1, 3);
        let t3 = Monomial::var(3);
        let t1 = Monomial::var(1);
        assert!(t1 < t3);
        assert!(t1_3 < t3);
        let t1t5 = Monomial::from_pairs([(1, 1), (5, 1)]);
        let t3_2 = Monomial::var_pow(3, 2);
        let t1_3t3 = Monomial::from_pairs([(1, 3), (3, 1)]);
        assert!(t1_3t3 < t1t5);
        assert!(t1t5 < t3_2);
    }

    #[test]
    fn differentiate_counts_falling_factorials() {
        let m = Monomial::from_pairs([(1, 3), (3, 1)]);
        let (f, q) = m.differentiate(&Monomial::var_pow(1, 2)).unwrap();
        assert_eq!(f, BigInt::from(6));
        assert_eq!(q, Monomial::from_pairs([(1, 1), (3, 1)]));
        assert!(m.differentiate(&Monomial::var(5)).is_none());
        assert!(m.differentiate(&Monomial::var_pow(3, 2)).is_none());
    }

    #[test]
    fn primed_weight_and_display() {
        let m = Monomial::from_pairs([(1, 2), (3 | PRIMED, 1)]);
        assert_eq!(m.weight(), 5);
        assert_eq!(m.to_string(), "t1^2*s3");
        let (t, s) = m.split_families();
        assert_eq!(t, Monomial::var_pow(1, 2));
        assert_eq!(s, Monomial::var(3 | PRIMED));
    }
}
