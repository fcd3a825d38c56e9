//! Report fragments and verdicts shared by every module.

use serde::{Deserialize, Serialize};

/// Which side of an uncomputable extremum a sampled value certifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    LowerBound,
    UpperBound,
}

/// A reported quantity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Count(u64),
    Real(f64),
    Exact(String),
}

impl From<u64> for Value {
    fn from(v: u64) -> Self {
        Value::Count(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Count(v as u64)
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Real(v)
    }
}

impl From<&crate::Rational> for Value {
    fn from(q: &crate::Rational) -> Self {
        Value::Exact(q.to_string())
    }
}

impl Value {
    pub fn as_f64(&self) -> f64 {
        match self {
            Value::Count(c) => *c as f64,
            Value::Real(r) => *r,
            Value::Exact(s) => match s.split_once('/') {
                Some((n, d)) => n.parse::<f64>().unwrap_or(f64::NAN) / d.parse::<f64>().unwrap_or(f64::NAN),
                None => s.parse().unwrap_or(f64::NAN),
            },
        }
    }
}

pub const NO_ASSERT: &str = "no-assert (implicit constant)";

/// One computed quantity compared against a bound expression.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fragment {
    pub quantity: String,
    pub value: Value,
    pub bound_expression: String,
    pub bound_value: f64,
    pub ratio: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certifies: Option<Side>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub label: Option<String>,
}

impl Fragment {
    /// A ratio row for an asymptotic statement; never asserted.
    pub fn ratio(quantity: &str, value: impl Into<Value>, bound_expression: &str, bound_value: f64) -> Self {
        let value = value.into();
        Fragment {
            quantity: quantity.to_string(),
            ratio: value.as_f64() / bound_value,
            value,
            bound_expression: bound_expression.to_string(),
            bound_value,
            certifies: None,
            label: Some(NO_ASSERT.to_string()),
        }
    }

    pub fn with_side(mut self, side: Side) -> Self {
        self.certifies = Some(side);
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }
}

/// Outcome of an asserted check, tied to the assertion that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub id: String,
    pub pass: bool,
    pub witness: String,
}

impl Verdict {
    pub fn new(id: impl Into<String>, pass: bool, witness: impl Into<String>) -> Self {
        Verdict { id: id.into(), pass, witness: witness.into() }
    }
}
