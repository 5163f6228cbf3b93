use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::involutions::{SignedTableau, SignedTableauDoc};
use crate::poly::{PolyDoc, Polynomial};

/// Evidence attached to a failing report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `LHS − RHS`, or the offending terms of a degree check.
    Difference {
        polynomial: PolyDoc,
    },
    Counterexample {
        tableau: SignedTableauDoc,
        message: String,
    },
    Message {
        message: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub claim: String,
    pub params: BTreeMap<String, String>,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, String>,
    /// Only filled in when timings are requested, so default output stays
    /// byte-stable.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl VerificationReport {
    pub fn new(claim: &str) -> Self {
        VerificationReport {
            claim: claim.to_string(),
            params: BTreeMap::new(),
            pass: true,
            witness: None,
            details: BTreeMap::new(),
            wall_time_ms: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn detail(&mut self, key: &str, value: impl ToString) {
        self.details.insert(key.to_string(), value.to_string());
    }

    /// Records a failure; the first witness wins.
    pub fn fail(&mut self, witness: Witness) {
        self.pass = false;
        if self.witness.is_none() {
            self.witness = Some(witness);
        }
    }

    pub fn fail_with(&mut self, message: impl Into<String>) {
        self.fail(Witness::Message {
            message: message.into(),
        });
    }

    pub fn fail_at(&mut self, x: &SignedTableau, message: impl Into<String>) {
        self.fail(Witness::Counterexample {
            tableau: x.to_doc(),
            message: message.into(),
        });
    }

    /// Passes iff `difference` is identically zero.
    pub fn expect_zero(&mut self, difference: &Polynomial) {
        self.detail("difference_terms", difference.len());
        if !difference.is_zero() {
            self.fail(Witness::Difference {
                polynomial: difference.to_doc(),
            });
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

const SHOWN_TERMS: usize = 8;

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        write!(
            f,
            "{} {} [{}]",
            if self.pass { "PASS" } else { "FAIL" },
            self.claim,
            params.join(" ")
        )?;
        for (k, v) in &self.details {
            write!(f, "\n  {k}: {v}")?;
        }
        if let Some(ms) = self.wall_time_ms {
            write!(f, "\n  wall_time_ms: {ms:.1}")?;
        }
        match &self.witness {
            None => {}
            Some(Witness::Difference { polynomial }) => {
                let shown = PolyDoc {
                    n: polynomial.n,
                    terms: polynomial.terms.iter().take(SHOWN_TERMS).cloned().collect(),
                };
                let p = Polynomial::from_doc(&shown).map_err(|_| fmt::Error)?;
                let more = polynomial.terms.len().saturating_sub(SHOWN_TERMS);
                write!(f, "\n  witness: {p}")?;
                if more > 0 {
                    write!(f, " + ({more} more terms)")?;
                }
            }
            Some(Witness::Counterexample { tableau, message }) => {
                write!(f, "\n  counterexample: {message}")?;
                write!(
                    f,
                    "\n    rows {:?} tau {:?} marked row {:?}",
                    tableau.rows, tableau.tau, tableau.marked_row
                )?;
            }
            Some(Witness::Message { message }) => write!(f, "\n  witness: {message}")?,
        }
        Ok(())
    }
}
