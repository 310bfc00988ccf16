//! Shared report vocabulary: verdicts and per-degree comparison cells.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Outcome of a single check.
///
/// `Vacuous` means the degree window cannot exercise the statement at all;
/// `Inconclusive` means the probe ran but the window was too small to force a
/// conclusion. Both are first-class outcomes, distinct from `Pass`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "VACUOUS")]
    Vacuous,
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
}

impl Verdict {
    /// Combines cell verdicts: any FAIL dominates, then INCONCLUSIVE, then
    /// VACUOUS; PASS only when every cell passes (or there are no cells).
    pub fn combine(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
        let mut out = Verdict::Pass;
        for v in verdicts {
            out = match (out, v) {
                (_, Verdict::Fail) | (Verdict::Fail, _) => Verdict::Fail,
                (_, Verdict::Inconclusive) | (Verdict::Inconclusive, _) => Verdict::Inconclusive,
                (_, Verdict::Vacuous) | (Verdict::Vacuous, _) => Verdict::Vacuous,
                (Verdict::Pass, Verdict::Pass) => Verdict::Pass,
            };
        }
        out
    }

    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Vacuous => "VACUOUS",
            Verdict::Inconclusive => "INCONCLUSIVE",
        };
        f.write_str(s)
    }
}

/// One degreewise comparison: isomorphism types on both sides as ascending
/// exponent lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportCell {
    pub degree: u32,
    pub bucket: Option<u32>,
    pub lhs: Vec<u32>,
    pub rhs: Vec<u32>,
    pub verdict: Verdict,
}

impl ReportCell {
    pub fn compare(degree: u32, bucket: Option<u32>, lhs: Vec<u32>, rhs: Vec<u32>) -> ReportCell {
        let verdict = if lhs == rhs { Verdict::Pass } else { Verdict::Fail };
        ReportCell { degree, bucket, lhs, rhs, verdict }
    }
}

/// A full verification run: named check, parameter echo, the degree window it
/// covered, per-cell outcomes, and extra notes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub name: String,
    pub params: Vec<(String, String)>,
    pub window: (u32, u32),
    pub cells: Vec<ReportCell>,
    pub notes: Vec<String>,
    pub verdict: Verdict,
}

impl VerificationReport {
    pub fn new(
        name: impl Into<String>,
        params: Vec<(String, String)>,
        window: (u32, u32),
        cells: Vec<ReportCell>,
        notes: Vec<String>,
    ) -> VerificationReport {
        let verdict = Verdict::combine(cells.iter().map(|c| c.verdict));
        VerificationReport { name: name.into(), params, window, cells, notes, verdict }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_combination_order() {
        use Verdict::*;
        assert_eq!(Verdict::combine([Pass, Pass]), Pass);
        assert_eq!(Verdict::combine([Pass, Vacuous]), Vacuous);
        assert_eq!(Verdict::combine([Vacuous, Inconclusive]), Inconclusive);
        assert_eq!(Verdict::combine([Inconclusive, Fail, Pass]), Fail);
        assert_eq!(Verdict::combine([]), Pass);
    }

    #[test]
    fn serializes_to_wire_names() {
        assert_eq!(serde_json::to_string(&Verdict::Pass).unwrap(), "\"PASS\"");
        assert_eq!(serde_json::to_string(&Verdict::Inconclusive).unwrap(), "\"INCONCLUSIVE\"");
    }
}
