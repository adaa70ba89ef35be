use thiserror::Error;

use crate::report::VerificationReport;
use crate::tensor::Word;

/// Every failure the library can report.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("wire mismatch in {context}: expected {expected}, found {found}")]
    WireMismatch {
        context: String,
        expected: Word,
        found: Word,
    },

    #[error("matrix of shape {rows}x{cols} does not fit {cod} <- {dom}")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        dom: Word,
        cod: Word,
    },

    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("invalid dimension for space `{name}`: {dim}")]
    InvalidDimension { name: String, dim: usize },

    #[error("tolerance must be a finite non-negative number, got {0}")]
    InvalidTolerance(f64),

    #[error("not a projection: residual {residual:e}")]
    NotAProjection { residual: f64 },

    #[error("not an intertwiner: residual {residual:e}")]
    NotAnIntertwiner { residual: f64 },

    #[error("syntax error at {line}:{column} near `{token}`: {message}")]
    Syntax {
        line: usize,
        column: usize,
        token: String,
        message: String,
    },

    #[error("type error in {stage}: {left} does not match {right}")]
    Type {
        stage: String,
        left: Word,
        right: Word,
    },

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("unknown space `{0}`")]
    UnknownSpace(String),

    #[error("duplicate name `{0}`")]
    DuplicateName(String),

    #[error("signature mismatch: lhs is {lhs_dom} -> {lhs_cod}, rhs is {rhs_dom} -> {rhs_cod}")]
    SignatureMismatch {
        lhs_dom: Word,
        lhs_cod: Word,
        rhs_dom: Word,
        rhs_cod: Word,
    },

    #[error("not a group: {0} fails")]
    NotAGroup(GroupLaw),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("quantum group mismatch: {0}")]
    GroupMismatch(String),

    #[error("Q-system pair mismatch: {0}")]
    PairMismatch(String),

    #[error("verification of {what} failed: {report}")]
    VerificationFailed {
        what: String,
        report: Box<VerificationReport>,
    },
}

/// The group law a multiplication table violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupLaw {
    Closure,
    Associativity,
    Unit,
    Inverse,
}

impl std::fmt::Display for GroupLaw {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            GroupLaw::Closure => "closure",
            GroupLaw::Associativity => "associativity",
            GroupLaw::Unit => "unit",
            GroupLaw::Inverse => "inverse",
        };
        f.write_str(s)
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn wire_mismatch(context: impl Into<String>, expected: &Word, found: &Word) -> Error {
    Error::WireMismatch {
        context: context.into(),
        expected: expected.clone(),
        found: found.clone(),
    }
}
