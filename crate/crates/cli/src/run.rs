//! Running checks and building the report.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use qsyslab_core::cqg::{verify_bimodule, verify_cqg, verify_intertwiner, verify_qsystem_in_g, verify_star_algebra};
use qsyslab_core::diagram::check_equation;
use qsyslab_core::frobenius::{
    ev_coev, split_dimension_obstruction, verify_qsys_bimodule, verify_qsys_intertwiner, verify_qsystem,
};
use qsyslab_core::qbe::{
    check_frobenius_identities, check_isometries, verify_qbe, verify_qbe_intertwiner, verify_quantum_function,
    QuantumFunction,
};
use qsyslab_core::tensor::compose;
use qsyslab_core::{Error, Tolerance, VerificationReport};

use crate::model::{Bimodule, Model};
use crate::workspace::{Check, CheckDecl, Expect};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualEntry {
    pub name: String,
    /// `null` when the residual is not finite.
    pub residual: Option<f64>,
    pub passed: bool,
    pub required: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub kind: String,
    pub tolerance: f64,
    pub expect: Expect,
    /// What the verifier concluded, before `expect` is applied.
    pub verifier_passed: bool,
    pub passed: bool,
    pub residuals: Vec<ResidualEntry>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub messages: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<Value>,
}

impl CheckResult {
    /// Largest finite residual among the required entries.
    pub fn max_residual(&self) -> Option<f64> {
        self.residuals
            .iter()
            .filter(|r| r.required)
            .filter_map(|r| r.residual)
            .reduce(f64::max)
    }
}

/// The deterministic part of a report: identical inputs give identical bodies.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportBody {
    pub tolerance: f64,
    pub passed: bool,
    pub total: usize,
    pub failed: usize,
    pub checks: Vec<CheckResult>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportHeader {
    pub tool: String,
    pub version: String,
    pub input: String,
    pub generated_at_unix: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub header: ReportHeader,
    pub body: ReportBody,
}

#[derive(Default)]
struct Outcome {
    residuals: Vec<ResidualEntry>,
    messages: Vec<String>,
    data: Option<Value>,
    passed: bool,
    errored: bool,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

impl Outcome {
    fn from_report(r: &VerificationReport) -> Self {
        let residuals = r
            .entries()
            .iter()
            .map(|e| ResidualEntry {
                name: e.axiom.clone(),
                residual: finite(e.residual),
                passed: e.passed,
                required: e.required,
            })
            .collect();
        let messages = r
            .failures()
            .map(|e| format!("{} failed: residual {:e} exceeds {:e}", e.axiom, e.residual, r.tol().eps()))
            .collect();
        Outcome {
            residuals,
            messages,
            data: None,
            passed: r.passed(),
            errored: false,
        }
    }

    fn error(e: Error) -> Self {
        Self::message(e.to_string())
    }

    fn message(msg: String) -> Self {
        Outcome {
            messages: vec![msg],
            errored: true,
            ..Outcome::default()
        }
    }
}

fn from_result(r: Result<VerificationReport, Error>) -> Outcome {
    match r {
        Ok(r) => Outcome::from_report(&r),
        Err(Error::VerificationFailed { report, .. }) => Outcome::from_report(&report),
        Err(e) => Outcome::error(e),
    }
}

fn evaluate(m: &Model, check: &Check, tol: Tolerance) -> Outcome {
    match check {
        Check::VerifyQsystem { qsystem } => Outcome::from_report(&verify_qsystem(&m.qsystems[qsystem], tol)),
        Check::Zigzag { qsystem } => Outcome::from_report(&ev_coev(&m.qsystems[qsystem], tol).2),
        Check::SplitObstruction {
            qsystem,
            expect_perfect_square,
        } => {
            let o = split_dimension_obstruction(&m.qsystems[qsystem]);
            let mut out = Outcome {
                data: Some(json!({ "dim": o.dim, "is_perfect_square": o.is_perfect_square })),
                passed: expect_perfect_square.is_none_or(|e| e == o.is_perfect_square),
                ..Outcome::default()
            };
            if !o.is_perfect_square {
                out.messages.push(format!(
                    "dimension {} is not a perfect square, so the Q-system does not split",
                    o.dim
                ));
            }
            if !out.passed {
                out.messages.push("perfect-square status differs from the expected one".into());
            }
            out
        }
        Check::VerifyStarAlgebra { algebra } => Outcome::from_report(&verify_star_algebra(&m.algebras[algebra], tol)),
        Check::VerifyCqg { quantum_group } => Outcome::from_report(&verify_cqg(&m.quantum_groups[quantum_group], tol)),
        Check::VerifyBimodule { bimodule } => match &m.bimodules[bimodule] {
            Bimodule::QSys(b) => Outcome::from_report(&verify_qsys_bimodule(b, tol)),
            Bimodule::Unitary(b) => Outcome::from_report(&verify_bimodule(b, tol)),
        },
        Check::VerifyIntertwiner {
            morphism,
            source,
            target,
        } => {
            let f = &m.morphisms[morphism];
            match (&m.bimodules[source], &m.bimodules[target]) {
                (Bimodule::QSys(x), Bimodule::QSys(y)) => from_result(verify_qsys_intertwiner(f, x, y, tol)),
                (Bimodule::Unitary(x), Bimodule::Unitary(y)) => from_result(verify_intertwiner(f, x, y, tol)),
                _ => Outcome::message(format!("`{source}` and `{target}` are bimodules of different kinds")),
            }
        }
        Check::VerifyQsystemInG { qsystem, bimodule } => match &m.bimodules[bimodule] {
            Bimodule::Unitary(b) => from_result(verify_qsystem_in_g(&m.qsystems[qsystem], b, tol)),
            Bimodule::QSys(_) => Outcome::message(format!("`{bimodule}` is not a bimodule of quantum groups")),
        },
        Check::VerifyQbe { qbielement } => Outcome::from_report(&verify_qbe(&m.qbielements[qbielement], tol)),
        Check::CheckIsometries { qbielement } => {
            Outcome::from_report(&check_isometries(&m.qbielements[qbielement], tol))
        }
        Check::CheckFrobeniusIdentities { qbielement } => {
            from_result(check_frobenius_identities(&m.qbielements[qbielement], tol))
        }
        Check::QuantumFunction { qbielement, unital } => {
            let e = &m.qbielements[qbielement];
            // P = Q₁ Q₂* : H ⊗ B → A ⊗ H, a quantum function from B to A.
            let f = compose(e.q1(), &e.q2().adjoint())
                .and_then(|p| QuantumFunction::new(e.right_q().clone(), e.left_q().clone(), e.space().clone(), p, *unital));
            match f {
                Ok(f) => Outcome::from_report(&verify_quantum_function(&f, tol)),
                Err(e) => Outcome::error(e),
            }
        }
        Check::VerifyQbeIntertwiner {
            morphism,
            source,
            target,
        } => from_result(verify_qbe_intertwiner(
            &m.morphisms[morphism],
            &m.qbielements[source],
            &m.qbielements[target],
            tol,
        )),
        Check::CheckEquation { equation } => {
            let (lhs, rhs) = &m.equations[equation];
            match check_equation(lhs, rhs, &m.env, tol) {
                Ok(r) => Outcome {
                    residuals: vec![ResidualEntry {
                        name: "equation".into(),
                        residual: finite(r.residual),
                        passed: r.passed,
                        required: true,
                    }],
                    messages: if r.passed { vec![] } else { vec![r.to_string()] },
                    data: None,
                    passed: r.passed,
                    errored: false,
                },
                Err(e) => Outcome::error(e),
            }
        }
    }
}

/// Runs one check. Errors raised by a verifier become a failed entry.
pub fn run_check(m: &Model, c: &CheckDecl, run_tol: Tolerance) -> CheckResult {
    let tol = c.tol.and_then(|t| Tolerance::new(t).ok()).unwrap_or(run_tol);
    let outcome = evaluate(m, &c.check, tol);
    let passed = if outcome.errored {
        false
    } else {
        outcome.passed == (c.expect == Expect::Pass)
    };
    CheckResult {
        name: c.display_name(),
        kind: c.check.kind().to_string(),
        tolerance: tol.eps(),
        expect: c.expect,
        verifier_passed: outcome.passed,
        passed,
        residuals: outcome.residuals,
        messages: outcome.messages,
        data: outcome.data,
    }
}

/// Runs every check in parallel, keeping declaration order.
pub fn run_all(m: &Model, tol: Tolerance) -> ReportBody {
    let checks: Vec<CheckResult> = m.checks.par_iter().map(|c| run_check(m, c, tol)).collect();
    let failed = checks.iter().filter(|c| !c.passed).count();
    ReportBody {
        tolerance: tol.eps(),
        passed: failed == 0,
        total: checks.len(),
        failed,
        checks,
    }
}

/// Human-readable summary, one line per check plus failure details.
pub fn summary(body: &ReportBody) -> String {
    let mut s = String::new();
    for c in &body.checks {
        let verdict = if c.passed { "PASS" } else { "FAIL" };
        let res = c
            .max_residual()
            .map(|r| format!("max residual {r:.3e}"))
            .unwrap_or_else(|| "no residuals".into());
        let expect = if c.expect == Expect::Fail { ", expected to fail" } else { "" };
        s.push_str(&format!("{verdict} {} [{}] {res}{expect}\n", c.name, c.kind));
        if !c.passed || c.expect == Expect::Fail {
            for msg in &c.messages {
                s.push_str(&format!("    {msg}\n"));
            }
        }
        if let Some(d) = &c.data {
            s.push_str(&format!("    data: {d}\n"));
        }
    }
    s.push_str(&format!(
        "{} checks, {} passed, {} failed (tol {:e})\n",
        body.total,
        body.total - body.failed,
        body.failed,
        body.tolerance
    ));
    s
}
