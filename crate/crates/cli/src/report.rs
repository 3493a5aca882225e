//! Serializable reports. Rationals are strings in lowest terms.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use dsigma_core::logic::{Algebra, QuasiOutcome, Verdict};

use crate::model_file::ModelFile;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub arguments: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signature: Option<String>,
    pub seed: u64,
    pub trials: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compiled: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub agree: Option<bool>,
    #[serde(default)]
    pub results: Vec<CheckResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pipeline: Option<PipelineReport>,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

/// A value in ℝ or a tuple over a model's support.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Scalar(String),
    Tuple(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub trial: u64,
    pub valuation: BTreeMap<String, Value>,
    pub lhs: Value,
    pub rhs: Value,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    /// Re-parseable statement that was checked.
    pub statement: String,
    /// `"R"` or `"model"`.
    pub algebra: String,
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub premises_held: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub x: Vec<String>,
    pub ideal: Vec<Vec<String>>,
    pub rho: Vec<String>,
    pub m_iso: Vec<String>,
    pub eta: Vec<String>,
    pub phi: Vec<String>,
    pub unit_image: Vec<String>,
    pub unit_image_is_all_ones: bool,
    pub injective: bool,
    pub criterion: String,
    pub kernel: Vec<String>,
    pub sigma_continuity: String,
    pub homomorphism: String,
}

/// Element types that can be written into a report.
pub trait Render {
    fn value(&self) -> Value;
}

impl Render for dsigma_core::rational::Q {
    fn value(&self) -> Value {
        Value::Scalar(dsigma_core::rational::format(self))
    }
}

impl Render for dsigma_core::models::ModelElement {
    fn value(&self) -> Value {
        Value::Tuple(self.values().iter().map(dsigma_core::rational::format).collect())
    }
}

impl Value {
    pub fn text(&self) -> String {
        match self {
            Value::Scalar(s) => s.clone(),
            Value::Tuple(t) => format!("({})", t.join(", ")),
        }
    }
}

impl CheckResult {
    pub fn from_verdict<A: Algebra>(
        name: String,
        statement: String,
        algebra: &str,
        verdict: &Verdict<A::Element>,
    ) -> CheckResult
    where
        A::Element: Render,
    {
        let mut r = CheckResult {
            name,
            statement,
            algebra: algebra.to_string(),
            verdict: verdict.kind().to_string(),
            trials: None,
            note: None,
            premises_held: None,
            counterexample: None,
        };
        match verdict {
            Verdict::NoCounterexampleFound { trials, .. } => r.trials = Some(*trials),
            Verdict::ExactlyVerified { note } => r.note = Some(note.clone()),
            Verdict::Counterexample { trial, valuation, lhs, rhs } => {
                r.counterexample = Some(Counterexample {
                    trial: *trial,
                    valuation: valuation.iter().map(|(x, e)| (x.clone(), e.value())).collect(),
                    lhs: lhs.value(),
                    rhs: rhs.value(),
                })
            }
        }
        r
    }

    pub fn from_quasi<A: Algebra>(
        name: String,
        statement: String,
        algebra: &str,
        out: &QuasiOutcome<A::Element>,
    ) -> CheckResult
    where
        A::Element: Render,
    {
        let mut r = CheckResult::from_verdict::<A>(name, statement, algebra, &out.verdict);
        r.premises_held = Some(out.premises_held);
        r
    }

    pub fn failed(&self) -> bool {
        self.counterexample.is_some()
    }

    pub fn text_line(&self) -> String {
        let status = if self.failed() { "FAIL" } else { "PASS" };
        let detail = match (&self.counterexample, self.trials, &self.note) {
            (Some(c), _, _) => {
                let vals: Vec<String> = c.valuation.iter().map(|(x, v)| format!("{x} = {}", v.text())).collect();
                format!(
                    "counterexample at trial {}: {}; lhs = {}, rhs = {}",
                    c.trial,
                    if vals.is_empty() { "no variables".to_string() } else { vals.join(", ") },
                    c.lhs.text(),
                    c.rhs.text()
                )
            }
            (None, Some(t), _) => format!("no counterexample in {t} trials"),
            (None, None, Some(note)) => format!("exactly verified: {note}"),
            (None, None, None) => String::new(),
        };
        let held = self.premises_held.map(|h| format!(" (premises held at {h} valuations)")).unwrap_or_default();
        format!("{status}  [{}] {}: {}{held}\n      {}", self.algebra, self.name, detail, self.statement)
    }
}
