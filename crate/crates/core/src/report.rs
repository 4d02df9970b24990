//! Verdicts and structured verification reports shared by every suite.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Inconclusive,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    /// Combined verdict: any failure dominates, then inconclusive.
    pub fn and(self, other: Verdict) -> Verdict {
        self.max(other)
    }

    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }

    /// Process exit code: 0 pass, 1 fail, 2 inconclusive.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Inconclusive => 2,
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub title: String,
    pub verdict: Verdict,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new(title: impl Into<String>) -> Self {
        Self { title: title.into(), verdict: Verdict::Pass, checks: Vec::new() }
    }

    pub fn push(&mut self, name: impl Into<String>, verdict: Verdict, detail: impl Into<String>) {
        self.verdict = self.verdict.and(verdict);
        self.checks.push(Check { name: name.into(), verdict, detail: detail.into() });
    }

    pub fn check(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.push(name, Verdict::from_bool(ok), detail);
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.verdict == Verdict::Fail)
    }

    /// Fold another report's checks in, prefixing their names.
    pub fn absorb(&mut self, prefix: &str, other: VerificationReport) {
        for c in other.checks {
            self.push(format!("{prefix}{}", c.name), c.verdict, c.detail);
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Floats in reports: fixed 12 fractional digits.
pub fn format_decimal(v: f64) -> String {
    format!("{v:.12}")
}
