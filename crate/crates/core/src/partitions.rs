//! Strict partitions and the closed-form hook specialization.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalars::{int, Coeff, Rational, Root2Number};

/// A partition with strictly decreasing positive parts.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct StrictPartition {
    parts: Vec<u32>,
}

impl StrictPartition {
    pub fn empty() -> Self {
        StrictPartition::default()
    }

    /// Validates strictness and positivity.
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::Parse(format!("{parts:?}: parts must be positive")));
        }
        if parts.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::Parse(format!("{parts:?}: parts must be strictly decreasing")));
        }
        Ok(StrictPartition { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `(2λ₁, …, 2λ_ℓ)`.
    pub fn double(&self) -> StrictPartition {
        StrictPartition { parts: self.parts.iter().map(|p| 2 * p).collect() }
    }
}

impl Ord for StrictPartition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight().cmp(&other.weight()).then_with(|| self.parts.cmp(&other.parts))
    }
}

impl PartialOrd for StrictPartition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for StrictPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "-");
        }
        let joined: Vec<String> = self.parts.iter().map(u32::to_string).collect();
        write!(f, "{}", joined.join(","))
    }
}

impl FromStr for StrictPartition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "-" || s.is_empty() {
            return Ok(StrictPartition::empty());
        }
        let parts = s
            .split(',')
            .map(|p| p.trim().parse::<u32>().map_err(|e| Error::Parse(format!("{s}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        StrictPartition::new(parts)
    }
}

impl Serialize for StrictPartition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for StrictPartition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// All strict partitions of `weight`, lexicographically descending.
pub fn enumerate_strict(weight: u32) -> Vec<StrictPartition> {
    fn go(remaining: u32, max_part: u32, prefix: &mut Vec<u32>, out: &mut Vec<StrictPartition>) {
        if remaining == 0 {
            out.push(StrictPartition { parts: prefix.clone() });
            return;
        }
        for p in (1..=max_part.min(remaining)).rev() {
            prefix.push(p);
            go(remaining - p, p - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(weight, weight, &mut Vec::new(), &mut out);
    out
}

/// All strict partitions with `|λ| ≤ max_weight`, by weight then as in [`enumerate_strict`].
pub fn enumerate_strict_up_to(max_weight: u32) -> Vec<StrictPartition> {
    (0..=max_weight).flat_map(enumerate_strict).collect()
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, k| acc * k)
}

/// `Q_λ(δ_{k,1})` in the normalization `Q_λ = 2^{-ℓ/2} Q^Mac_λ`:
///
/// `2^{|λ|−ℓ/2} · ∏ 1/λⱼ! · ∏_{k<m} (λ_k−λ_m)/(λ_k+λ_m)`.
pub fn hook_eval_delta1(lambda: &StrictPartition) -> Root2Number {
    let parts = lambda.parts();
    let mut r = Rational::from_integer(1.into());
    for &p in parts {
        r /= Rational::from_integer(factorial(p));
    }
    for (i, &a) in parts.iter().enumerate() {
        for &b in &parts[i + 1..] {
            r *= Rational::new((a - b).into(), (a + b).into());
        }
    }
    let half_power = 2 * lambda.weight() as i64 - lambda.len() as i64;
    Root2Number::two_pow_half(half_power).scale(&r)
}

/// `∏ (2λⱼ − 1)!!`, the ratio `Q_λ(δ_{k,1}) / Q_{2λ}(δ_{k,1})`.
pub fn double_factorial_ratio(lambda: &StrictPartition) -> Rational {
    lambda.parts().iter().fold(int(1), |acc, &p| {
        let df = (1..=p).fold(BigInt::from(1), |a, j| a * (2 * j - 1));
        acc * Rational::from_integer(df)
    })
}
