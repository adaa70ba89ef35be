//! Residual reports produced by the verifiers.

use std::fmt;

use crate::tensor::{Tolerance, Word};

/// One checked identity.
#[derive(Debug, Clone, PartialEq)]
pub struct AxiomResult {
    pub axiom: String,
    pub residual: f64,
    pub passed: bool,
    /// Informational entries are reported but do not affect the verdict.
    pub required: bool,
}

/// Per-axiom residuals of a verifier run. The report passes iff every
/// required entry passes.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    entries: Vec<AxiomResult>,
    tol: Tolerance,
}

impl VerificationReport {
    pub fn new(tol: Tolerance) -> Self {
        Self {
            entries: Vec::new(),
            tol,
        }
    }

    /// Records a residual; it passes when `residual <= tol`. NaN never passes.
    pub fn record(&mut self, axiom: impl Into<String>, residual: f64) {
        let passed = residual <= self.tol.eps();
        self.entries.push(AxiomResult {
            axiom: axiom.into(),
            residual,
            passed,
            required: true,
        });
    }

    /// Records a residual that is reported but not required to pass.
    pub fn record_info(&mut self, axiom: impl Into<String>, residual: f64) {
        let passed = residual <= self.tol.eps();
        self.entries.push(AxiomResult {
            axiom: axiom.into(),
            residual,
            passed,
            required: false,
        });
    }

    /// Records an entry whose pass/fail status is decided by the caller
    /// (used for rank deficits and other non-metric outcomes).
    pub fn record_with(&mut self, axiom: impl Into<String>, residual: f64, passed: bool) {
        self.entries.push(AxiomResult {
            axiom: axiom.into(),
            residual,
            passed,
            required: true,
        });
    }

    /// Appends every entry of `other`, prefixing axiom names.
    pub fn merge(&mut self, prefix: &str, other: VerificationReport) {
        for mut e in other.entries {
            if !prefix.is_empty() {
                e.axiom = format!("{prefix}.{}", e.axiom);
            }
            self.entries.push(e);
        }
    }

    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed || !e.required)
    }

    pub fn entries(&self) -> &[AxiomResult] {
        &self.entries
    }

    pub fn tol(&self) -> Tolerance {
        self.tol
    }

    pub fn entry(&self, axiom: &str) -> Option<&AxiomResult> {
        self.entries.iter().find(|e| e.axiom == axiom)
    }

    /// Residual of the named entry. Panics if absent; intended for tests and
    /// callers that know the verifier's entry names.
    pub fn residual(&self, axiom: &str) -> f64 {
        self.entry(axiom)
            .unwrap_or_else(|| panic!("no entry `{axiom}` in report"))
            .residual
    }

    /// Largest residual over all entries (0 for an empty report).
    pub fn max_residual(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.residual)
            .fold(0.0, |a, b| if b.is_nan() || b > a { b } else { a })
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomResult> {
        self.entries.iter().filter(|e| !e.passed && e.required)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "passed" } else { "FAILED" };
        write!(f, "{verdict} (tol {:e})", self.tol.eps())?;
        for e in &self.entries {
            let mark = match (e.passed, e.required) {
                (true, _) => "ok",
                (false, true) => "FAIL",
                (false, false) => "fails (not required)",
            };
            write!(f, "; {} {:e} {}", e.axiom, e.residual, mark)?;
        }
        Ok(())
    }
}

/// Outcome of comparing two diagram expressions.
#[derive(Debug, Clone, PartialEq)]
pub struct EquationReport {
    pub domain: Word,
    pub codomain: Word,
    pub residual: f64,
    pub passed: bool,
    pub tol: Tolerance,
}

impl EquationReport {
    pub fn new(domain: Word, codomain: Word, residual: f64, tol: Tolerance) -> Self {
        Self {
            domain,
            codomain,
            residual,
            passed: residual <= tol.eps(),
            tol,
        }
    }
}

impl fmt::Display for EquationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} -> {}: residual {:e} ({} at tol {:e})",
            self.domain,
            self.codomain,
            self.residual,
            if self.passed { "passed" } else { "FAILED" },
            self.tol.eps()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overall_pass_requires_all_entries() {
        let mut r = VerificationReport::new(Tolerance::new(1e-9).unwrap());
        r.record("a", 0.0);
        assert!(r.passed());
        r.record("b", 1e-3);
        assert!(!r.passed());
        assert_eq!(r.failures().count(), 1);
        assert_eq!(r.max_residual(), 1e-3);
    }

    #[test]
    fn nan_residual_fails() {
        let mut r = VerificationReport::new(Tolerance::default());
        r.record("x", f64::NAN);
        assert!(!r.passed());
        assert!(r.max_residual().is_nan());
    }
}
