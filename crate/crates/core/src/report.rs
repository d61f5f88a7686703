//! Machine-readable results of verification campaigns.

use std::collections::BTreeMap;
use std::fmt::Display;

use serde::{Deserialize, Serialize};

use crate::polyring::{HbarSeries, Poly};
use crate::scalars::Coeff;

/// One compared quantity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportItem {
    pub label: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

/// Wall-clock data, kept apart from the report body so that reports of
/// identical campaigns compare equal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub wall_seconds: f64,
}

/// Outcome of a verification campaign; passes iff every item passes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub campaign: String,
    pub parameters: BTreeMap<String, String>,
    pub items: Vec<ReportItem>,
    pub summary: Summary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl VerificationReport {
    pub fn new(campaign: impl Into<String>) -> Self {
        VerificationReport {
            campaign: campaign.into(),
            parameters: BTreeMap::new(),
            items: Vec::new(),
            summary: Summary::default(),
            timing: None,
        }
    }

    pub fn param(&mut self, key: &str, value: impl Display) -> &mut Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn push(&mut self, label: impl Into<String>, expected: impl Display, actual: impl Display, pass: bool) {
        self.summary.total += 1;
        if pass {
            self.summary.passed += 1;
        } else {
            self.summary.failed += 1;
        }
        self.items.push(ReportItem {
            label: label.into(),
            expected: expected.to_string(),
            actual: actual.to_string(),
            pass,
        });
    }

    /// Records a comparison whose verdict is plain equality.
    pub fn check<T: PartialEq + Display>(&mut self, label: impl Into<String>, expected: &T, actual: &T) {
        self.push(label, expected, actual, expected == actual);
    }

    /// Compares two polynomials as one item, adding one extra failing item
    /// per mismatched monomial.
    pub fn check_poly<C: Coeff>(&mut self, label: &str, expected: &Poly<C>, actual: &Poly<C>) {
        self.check(label, expected, actual);
        if expected == actual {
            return;
        }
        let mut monomials: Vec<_> = expected.terms().map(|(m, _)| m.clone()).collect();
        monomials.extend(actual.terms().map(|(m, _)| m.clone()));
        monomials.sort();
        monomials.dedup();
        for m in monomials {
            let (e, a) = (expected.coeff(&m), actual.coeff(&m));
            if e != a {
                self.push(format!("{label}: {m}"), e, a, false);
            }
        }
    }

    /// Compares two ħ-series component by component.
    pub fn check_series<C: Coeff>(&mut self, expected: &HbarSeries<C>, actual: &HbarSeries<C>) {
        let mut exps: Vec<_> = expected.components().map(|(e, _)| e).collect();
        exps.extend(actual.components().map(|(e, _)| e));
        exps.sort();
        exps.dedup();
        for e in exps {
            self.check_poly(&format!("hbar^{e}"), &expected.component(e), &actual.component(e));
        }
    }

    /// Absorbs another report's items under a label prefix.
    pub fn merge(&mut self, prefix: &str, other: VerificationReport) {
        for item in other.items {
            self.push(format!("{prefix}{}", item.label), item.expected, item.actual, item.pass);
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportItem> {
        self.items.iter().filter(|i| !i.pass)
    }

    /// The report without its timing field.
    pub fn body(&self) -> VerificationReport {
        VerificationReport { timing: None, ..self.clone() }
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    /// One-line human summary.
    pub fn headline(&self) -> String {
        format!(
            "{}: {} ({} items, {} passed, {} failed)",
            self.campaign,
            if self.passed() { "PASS" } else { "FAIL" },
            self.summary.total,
            self.summary.passed,
            self.summary.failed
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::Monomial;
    use crate::scalars::{int, Rational};

    #[test]
    fn summary_tracks_items() {
        let mut r = VerificationReport::new("demo");
        r.param("cap", 3);
        r.check("a", &1, &1);
        r.check("b", &1, &2);
        assert_eq!(r.summary, Summary { total: 2, passed: 1, failed: 1 });
        assert!(!r.passed());
        assert_eq!(r.failures().count(), 1);
    }

    #[test]
    fn poly_mismatch_lists_monomials() {
        let p = Poly::<Rational>::t(1, 3);
        let q = Poly::from_terms([(Monomial::var(1), int(1)), (Monomial::var(3), int(2))], 3);
        let mut r = VerificationReport::new("demo");
        r.check_poly("w", &p, &q);
        assert_eq!(r.summary.failed, 2);
        assert_eq!(r.items[1].label, "w: t3");
    }

    #[test]
    fn json_round_trip_and_body() {
        let mut r = VerificationReport::new("demo");
        r.check("x", &"1/2", &"1/2");
        r.timing = Some(Timing { wall_seconds: 0.5 });
        let back: VerificationReport = serde_json::from_str(&r.to_json_pretty()).unwrap();
        assert_eq!(back, r);
        assert!(!r.body().to_json_pretty().contains("wall_seconds"));
    }
}
