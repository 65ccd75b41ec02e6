//! Verification campaigns: the Katz comparison, the layered `N = 3` oracle,
//! the cross-algorithm checks, and report plumbing.

mod campaign;
mod checks;
mod katz;

pub use campaign::{run_campaign, CampaignConfig, CampaignOutcome, CheckKind};
pub use checks::*;
pub use katz::{katz_check, psi2_weight_note, KatzOptions, KatzReport, KatzRow, Psi2Note, Skipped};

use serde::Serialize;
use serde_json::Value;
use std::collections::BTreeMap;

/// Which conjugate of the canonical table the eigentraces are compared to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Direct,
    Conjugate,
}

impl Orientation {
    pub fn as_str(self) -> &'static str {
        match self {
            Orientation::Direct => "direct",
            Orientation::Conjugate => "conjugate",
        }
    }
}

/// Frobenius conventions shared by every check.
#[derive(Clone, Debug, Serialize)]
pub struct FrobContext {
    pub q: u32,
    /// `ε(Frob_q) = q^{-1}` (geometric Frobenius).
    pub epsilon: String,
    /// Traces follow `#Fix = Σ(−1)^i Tr`.
    pub lefschetz: bool,
    pub orientation: Option<Orientation>,
}

impl FrobContext {
    pub fn new(q: u32) -> Self {
        FrobContext {
            q,
            epsilon: format!("1/{q}"),
            lefschetz: true,
            orientation: None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Adjudications {
    pub orientation: Option<String>,
    pub conv_sign: Option<String>,
    pub det_hcan_exponent: Option<String>,
}

/// One check's outcome in the common report schema.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub check: String,
    pub params: BTreeMap<String, Value>,
    pub pass: bool,
    pub adjudications: Adjudications,
    pub rows: Vec<Value>,
    pub notes: Vec<String>,
    pub runtime_ms: u64,
    pub seed: u64,
}

impl Report {
    pub fn new(check: &str) -> Self {
        Report {
            check: check.to_string(),
            params: BTreeMap::new(),
            pass: false,
            adjudications: Adjudications::default(),
            rows: Vec::new(),
            notes: Vec::new(),
            runtime_ms: 0,
            seed: 0,
        }
    }

    pub fn param(mut self, key: &str, v: impl Serialize) -> Self {
        self.params.insert(key.to_string(), json(v));
        self
    }

    pub fn row(&mut self, v: impl Serialize) {
        self.rows.push(json(v));
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn json(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("value serializes")
}

fn sign_str(s: i32) -> String {
    if s > 0 { "+1" } else { "-1" }.to_string()
}
