//! Numerical verification of Q-systems, bimodules, finite quantum groups and
//! quantum bi-elements on finite-dimensional Hilbert spaces.

pub mod cqg;
pub mod diagram;
pub mod error;
pub mod frobenius;
pub mod group;
pub mod qbe;
pub mod random;
mod linalg;
pub mod report;
pub mod tensor;

pub use error::{Error, Result};
pub use report::{AxiomResult, EquationReport, VerificationReport};
pub use tensor::{LinearMap, Space, Tolerance, Word, C64};
