//! Verification reports and the deviation accumulator behind them.

use num_traits::{Signed, Zero};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, Rational, Scalar};

const MAX_LISTED_FAILURES: usize = 20;

/// Running maximum of `|lhs − rhs|` over many comparisons.
///
/// The maximum stays an exact rational for as long as every difference is one.
#[derive(Clone, Debug)]
pub struct Deviation {
    exact: bool,
    max_exact: Rational,
    max_float: f64,
    compared: u64,
    failed: u64,
    failures: Vec<String>,
}

impl Default for Deviation {
    fn default() -> Self {
        Deviation {
            exact: true,
            max_exact: Rational::zero(),
            max_float: 0.0,
            compared: 0,
            failed: 0,
            failures: Vec::new(),
        }
    }
}

impl Deviation {
    pub fn new() -> Self {
        Self::default()
    }

    /// Compares two values. Symbolic differences must vanish exactly when
    /// `tol == 0`; otherwise `|lhs − rhs| ≤ tol` is required.
    pub fn record(&mut self, label: impl FnOnce() -> String, lhs: &Scalar, rhs: &Scalar, tol: f64) -> bool {
        let diff = (lhs - rhs).abs();
        let mag = diff.to_f64();
        self.compared += 1;
        match &diff {
            Scalar::Exact(r) => {
                if r > &self.max_exact {
                    self.max_exact = r.clone();
                }
            }
            _ => self.exact = false,
        }
        if mag > self.max_float || mag.is_nan() {
            self.max_float = mag;
        }
        let ok = if diff.is_symbolic() && tol == 0.0 {
            diff.is_zero()
        } else {
            mag <= tol
        };
        if !ok {
            self.fail(format!("{}: {} vs {}", label(), lhs, rhs));
        }
        ok
    }

    /// Records a failed condition that is not a numeric comparison.
    pub fn fail(&mut self, message: String) {
        self.failed += 1;
        if self.failures.len() < MAX_LISTED_FAILURES {
            self.failures.push(message);
        }
    }

    /// Records a boolean condition.
    pub fn require(&mut self, ok: bool, message: impl FnOnce() -> String) -> bool {
        self.compared += 1;
        if !ok {
            self.fail(message());
        }
        ok
    }

    pub fn merge(mut self, other: Deviation) -> Deviation {
        self.exact &= other.exact;
        if other.max_exact > self.max_exact {
            self.max_exact = other.max_exact;
        }
        if other.max_float > self.max_float || other.max_float.is_nan() {
            self.max_float = other.max_float;
        }
        self.compared += other.compared;
        self.failed += other.failed;
        for f in other.failures {
            if self.failures.len() < MAX_LISTED_FAILURES {
                self.failures.push(f);
            }
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    pub fn compared(&self) -> u64 {
        self.compared
    }

    pub fn failed(&self) -> u64 {
        self.failed
    }

    pub fn failures(&self) -> &[String] {
        &self.failures
    }

    pub fn max_abs_error(&self) -> f64 {
        self.max_float
    }

    /// Exact rational string when every difference was exact, otherwise a float.
    pub fn max_abs_error_string(&self) -> String {
        if self.exact {
            format_rational(&self.max_exact.abs())
        } else {
            format!("{:e}", self.max_float)
        }
    }

    pub fn into_report(self, check: &str) -> Report {
        let mut r = Report::new(check, self.passed());
        r.set("max_abs_error", self.max_abs_error_string());
        r.set("compared", self.compared);
        r.set("failed", self.failed);
        if !self.failures.is_empty() {
            r.set("failures", self.failures);
        }
        r
    }
}

/// Outcome of one verification: a name, a verdict and free-form details.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub check: String,
    pub pass: bool,
    pub details: Map<String, Value>,
}

impl Report {
    pub fn new(check: &str, pass: bool) -> Self {
        Report {
            check: check.to_string(),
            pass,
            details: Map::new(),
        }
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.details.insert(key.to_string(), value.into());
        self
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.set(key, value);
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.details.get(key)
    }

    /// Flat JSON object; keys come out sorted.
    pub fn to_json(&self) -> Value {
        let mut m = self.details.clone();
        m.insert("check".into(), Value::String(self.check.clone()));
        m.insert("pass".into(), Value::Bool(self.pass));
        Value::Object(m)
    }

    pub fn from_json(v: &Value) -> Result<Report> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("report must be a JSON object".into()))?;
        let check = obj
            .get("check")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("report lacks a \"check\" string".into()))?;
        let pass = obj
            .get("pass")
            .and_then(Value::as_bool)
            .ok_or_else(|| Error::Parse("report lacks a \"pass\" boolean".into()))?;
        let mut details = obj.clone();
        details.remove("check");
        details.remove("pass");
        Ok(Report {
            check: check.to_string(),
            pass,
            details,
        })
    }

    /// Combines reports into one whose verdict is the conjunction.
    pub fn combine(check: &str, parts: Vec<Report>) -> Report {
        let pass = parts.iter().all(|r| r.pass);
        let mut r = Report::new(check, pass);
        r.set(
            "reports",
            Value::Array(parts.iter().map(Report::to_json).collect()),
        );
        r
    }
}

impl std::fmt::Display for Report {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", serde_json::to_string_pretty(&self.to_json()).unwrap())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    #[test]
    fn exact_deviation_stays_exact() {
        let mut d = Deviation::new();
        d.record(|| "a".into(), &int(1).into(), &int(1).into(), 0.0);
        d.record(|| "b".into(), &rat(1, 3).into(), &rat(1, 2).into(), 0.0);
        assert!(!d.passed());
        assert_eq!(d.max_abs_error_string(), "1/6");
        assert_eq!(d.failures().len(), 1);
    }

    #[test]
    fn float_tolerance() {
        let mut d = Deviation::new();
        d.record(|| "x".into(), &Scalar::Float(1.0), &int(1).into(), 1e-9);
        d.record(|| "y".into(), &Scalar::Float(1.0 + 1e-12), &int(1).into(), 1e-9);
        assert!(d.passed());
        assert!(d.max_abs_error() < 1e-11);
    }

    #[test]
    fn report_json_round_trip() {
        let r = Deviation::new()
            .into_report("stochastic")
            .with("family", "beta-")
            .with("n", 2);
        let v = r.to_json();
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert_eq!(Report::from_json(&v).unwrap(), r);
        assert_eq!(v["max_abs_error"], "0");
    }
}
