use serde::{Deserialize, Serialize};
use std::fmt;

/// Outcome of a check. Positive verdicts always travel with evidence that can
/// be re-verified independently.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "valid")]
    Valid,
    #[serde(rename = "invalid")]
    Invalid,
    #[serde(rename = "indecomposable")]
    Indecomposable,
    #[serde(rename = "inconclusive")]
    Inconclusive,
    #[serde(rename = "monodromy_is_Ad")]
    MonodromyIsAd,
    #[serde(rename = "infeasible")]
    Infeasible,
    #[serde(rename = "feasible")]
    Feasible,
}

impl Verdict {
    pub fn is_positive(self) -> bool {
        matches!(
            self,
            Verdict::Valid | Verdict::Indecomposable | Verdict::MonodromyIsAd | Verdict::Feasible
        )
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Valid => "valid",
            Verdict::Invalid => "invalid",
            Verdict::Indecomposable => "indecomposable",
            Verdict::Inconclusive => "inconclusive",
            Verdict::MonodromyIsAd => "monodromy_is_Ad",
            Verdict::Infeasible => "infeasible",
            Verdict::Feasible => "feasible",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A verdict together with the record that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate<E> {
    pub verdict: Verdict,
    pub evidence: E,
}

impl<E> Certificate<E> {
    pub fn new(verdict: Verdict, evidence: E) -> Self {
        Certificate { verdict, evidence }
    }

    pub fn is_positive(&self) -> bool {
        self.verdict.is_positive()
    }
}
