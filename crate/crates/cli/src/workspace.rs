//! On-disk workspace format.
//!
//! A workspace is one JSON document. Complex numbers are `[re, im]`,
//! matrices are arrays of rows, and wires (`dom`, `cod`, `space`) are arrays
//! of space names, with `[]` for the scalar wire.

use serde::{Deserialize, Serialize};

pub type Complex = [f64; 2];
pub type Matrix = Vec<Vec<Complex>>;

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Workspace {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub spaces: Vec<SpaceDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub algebras: Vec<AlgebraDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub quantum_groups: Vec<QuantumGroupDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub morphisms: Vec<MorphismDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub qsystems: Vec<QSystemDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bimodules: Vec<BimoduleDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub qbielements: Vec<QbeDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub equations: Vec<EquationDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<CheckDecl>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDecl {
    pub name: String,
    pub dim: usize,
}

/// A finite-dimensional *-algebra.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AlgebraDecl {
    /// Functions on a named finite group (`Z<n>` or `S<k>`).
    Functions { name: String, group: String },
    /// The group algebra with `star(g) = g⁻¹`.
    GroupAlgebra { name: String, group: String },
    /// Structure constants `structure[j][k][l]` (coefficient of `e_l` in
    /// `e_j e_k`), unit vector, and the matrix `S` with `star(x) = S·conj(x)`.
    StructureConstants {
        name: String,
        space: String,
        structure: Vec<Vec<Vec<Complex>>>,
        unit: Vec<Complex>,
        involution: Matrix,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum QuantumGroupDecl {
    /// `C(G)` with `Δ(δ_g) = Σ_{hk=g} δ_h⊗δ_k`. Its space is named `C(<name>)`.
    FunctionAlgebra { name: String, group: String },
    /// `C[G]` with `Δ(g) = g⊗g`. Its space is named `C[<name>]`.
    GroupAlgebra { name: String, group: String },
    /// A declared algebra with a declared comultiplication morphism.
    Explicit { name: String, algebra: String, comult: String },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MorphismDecl {
    Matrix(MatrixMorphism),
    Part(PartMorphism),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixMorphism {
    pub name: String,
    pub dom: Vec<String>,
    pub cod: Vec<String>,
    pub matrix: Matrix,
}

/// A structure map of a declared Q-system, exposed as a named morphism.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartMorphism {
    pub name: String,
    pub qsystem: String,
    pub part: QSystemPart,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum QSystemPart {
    Mult,
    Unit,
    Ev,
    Coev,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum QSystemDecl {
    /// `C^n` with pointwise product. The space is named after the Q-system.
    FunctionAlgebra { name: String, n: usize },
    /// `M_n` normalized to be separable.
    MatrixAlgebra { name: String, n: usize },
    /// `C[G]` normalized to be separable.
    GroupAlgebra { name: String, group: String },
    /// A declared space with declared multiplication and unit morphisms.
    Explicit { name: String, space: String, mult: String, unit: String },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BimoduleDecl {
    /// `(A, m, m)` over a Q-system.
    #[serde(rename = "self")]
    SelfBimodule { name: String, qsystem: String },
    /// `A ⊗ K ⊗ B` with actions by multiplication.
    Free {
        name: String,
        left: String,
        right: String,
        multiplicity: String,
    },
    /// A Q-system bimodule with declared actions.
    Qsys {
        name: String,
        left: String,
        right: String,
        space: Vec<String>,
        lambda: String,
        rho: String,
    },
    /// A unitary bimodule of quantum groups with trivial coactions.
    Trivial {
        name: String,
        left_group: String,
        right_group: String,
        space: Vec<String>,
    },
    /// A unitary bimodule with declared coactions.
    Unitary {
        name: String,
        left_group: String,
        right_group: String,
        space: Vec<String>,
        left_coaction: String,
        right_coaction: String,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum QbeDecl {
    /// `(A, m*, m*)`.
    SelfDual { name: String, qsystem: String },
    /// `(X, λ*, ρ*)` for a declared Q-system bimodule.
    FromBimodule { name: String, bimodule: String },
    Explicit {
        name: String,
        left: String,
        right: String,
        space: Vec<String>,
        q1: String,
        q2: String,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquationDecl {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Expect {
    #[default]
    Pass,
    Fail,
}

impl Expect {
    fn is_pass(&self) -> bool {
        *self == Expect::Pass
    }
}

/// One verifier invocation. `tol` overrides the run tolerance; with
/// `expect: "fail"` the check passes when the verifier rejects.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckDecl {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Expect::is_pass")]
    pub expect: Expect,
    #[serde(flatten)]
    pub check: Check,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Check {
    VerifyQsystem { qsystem: String },
    Zigzag { qsystem: String },
    SplitObstruction {
        qsystem: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect_perfect_square: Option<bool>,
    },
    VerifyStarAlgebra { algebra: String },
    VerifyCqg { quantum_group: String },
    VerifyBimodule { bimodule: String },
    VerifyIntertwiner { morphism: String, source: String, target: String },
    VerifyQsystemInG { qsystem: String, bimodule: String },
    VerifyQbe { qbielement: String },
    CheckIsometries { qbielement: String },
    CheckFrobeniusIdentities { qbielement: String },
    QuantumFunction {
        qbielement: String,
        #[serde(default)]
        unital: bool,
    },
    VerifyQbeIntertwiner { morphism: String, source: String, target: String },
    CheckEquation { equation: String },
}

impl Check {
    pub fn kind(&self) -> &'static str {
        match self {
            Check::VerifyQsystem { .. } => "verify_qsystem",
            Check::Zigzag { .. } => "zigzag",
            Check::SplitObstruction { .. } => "split_obstruction",
            Check::VerifyStarAlgebra { .. } => "verify_star_algebra",
            Check::VerifyCqg { .. } => "verify_cqg",
            Check::VerifyBimodule { .. } => "verify_bimodule",
            Check::VerifyIntertwiner { .. } => "verify_intertwiner",
            Check::VerifyQsystemInG { .. } => "verify_qsystem_in_g",
            Check::VerifyQbe { .. } => "verify_qbe",
            Check::CheckIsometries { .. } => "check_isometries",
            Check::CheckFrobeniusIdentities { .. } => "check_frobenius_identities",
            Check::QuantumFunction { .. } => "quantum_function",
            Check::VerifyQbeIntertwiner { .. } => "verify_qbe_intertwiner",
            Check::CheckEquation { .. } => "check_equation",
        }
    }

    /// The primary object the check refers to, used for default names.
    pub fn target(&self) -> &str {
        match self {
            Check::VerifyQsystem { qsystem }
            | Check::Zigzag { qsystem }
            | Check::SplitObstruction { qsystem, .. }
            | Check::VerifyQsystemInG { qsystem, .. } => qsystem,
            Check::VerifyStarAlgebra { algebra } => algebra,
            Check::VerifyCqg { quantum_group } => quantum_group,
            Check::VerifyBimodule { bimodule } => bimodule,
            Check::VerifyIntertwiner { morphism, .. } | Check::VerifyQbeIntertwiner { morphism, .. } => {
                morphism
            }
            Check::VerifyQbe { qbielement }
            | Check::CheckIsometries { qbielement }
            | Check::CheckFrobeniusIdentities { qbielement }
            | Check::QuantumFunction { qbielement, .. } => qbielement,
            Check::CheckEquation { equation } => equation,
        }
    }
}

impl CheckDecl {
    pub fn display_name(&self) -> String {
        self.name
            .clone()
            .unwrap_or_else(|| format!("{}:{}", self.check.kind(), self.check.target()))
    }
}

/// Parses a workspace, reporting the path of the offending key on error.
pub fn parse_workspace(text: &str) -> Result<Workspace, crate::CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| crate::CliError::Parse {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}
