//! Bundled example workspaces.

use crate::workspace::{
    AlgebraDecl, BimoduleDecl, Check, CheckDecl, EquationDecl, Expect, Matrix, MatrixMorphism, MorphismDecl,
    PartMorphism, QSystemDecl, QSystemPart, QbeDecl, QuantumGroupDecl, SpaceDecl, Workspace,
};

/// `(name, description)` for every bundled example.
pub const EXAMPLES: &[(&str, &str)] = &[
    ("fn_alg_2", "the function algebra C^2 as a Q-system, with its axioms written as equations"),
    ("matrix_alg_2", "the matrix algebra M_2 as a Q-system, its self-bimodule and a free bimodule"),
    ("cz2", "functions on Z2 and its group algebra as quantum groups, and C^2 as a Q-system in their bimodules"),
    ("s3_function_algebra", "functions on S3 and the group algebra of S3"),
    ("qbe_selfdual_2", "self-dual quantum bi-elements of C^2 and M_2 and one built from a free bimodule"),
    ("nonsplit_c3", "C^3, whose dimension rules out a splitting X (x) conj(X)"),
    ("mm_star_vs_id", "an unnormalized M_2 multiplication, for which m m* = 2 and not 1"),
];

pub fn example(name: &str) -> Option<Workspace> {
    Some(match name {
        "fn_alg_2" => fn_alg_2(),
        "matrix_alg_2" => matrix_alg_2(),
        "cz2" => cz2(),
        "s3_function_algebra" => s3_function_algebra(),
        "qbe_selfdual_2" => qbe_selfdual_2(),
        "nonsplit_c3" => nonsplit_c3(),
        "mm_star_vs_id" => mm_star_vs_id(),
        _ => return None,
    })
}

fn check(c: Check) -> CheckDecl {
    CheckDecl {
        name: None,
        tol: None,
        expect: Expect::Pass,
        check: c,
    }
}

fn expect_fail(c: Check) -> CheckDecl {
    CheckDecl {
        expect: Expect::Fail,
        ..check(c)
    }
}

fn part(name: &str, qsystem: &str, part: QSystemPart) -> MorphismDecl {
    MorphismDecl::Part(PartMorphism {
        name: name.into(),
        qsystem: qsystem.into(),
        part,
    })
}

fn parts(qsystem: &str, prefix: &str) -> Vec<MorphismDecl> {
    vec![
        part(&format!("{prefix}m"), qsystem, QSystemPart::Mult),
        part(&format!("{prefix}i"), qsystem, QSystemPart::Unit),
        part(&format!("{prefix}ev"), qsystem, QSystemPart::Ev),
        part(&format!("{prefix}coev"), qsystem, QSystemPart::Coev),
    ]
}

fn eq(name: &str, lhs: &str, rhs: &str) -> EquationDecl {
    EquationDecl {
        name: name.into(),
        lhs: lhs.into(),
        rhs: rhs.into(),
    }
}

/// Q-system axioms for generators `m`, `i` on the space `a`.
fn axiom_equations(a: &str) -> Vec<EquationDecl> {
    vec![
        eq("associativity", &format!("m * id[{a}] ; m"), &format!("id[{a}] * m ; m")),
        eq("unit_left", &format!("i * id[{a}] ; m"), &format!("id[{a}]")),
        eq("unit_right", &format!("id[{a}] * i ; m"), &format!("id[{a}]")),
        eq("frobenius_left", &format!("m^* * id[{a}] ; id[{a}] * m"), "m ; m^*"),
        eq("frobenius_right", &format!("id[{a}] * m^* ; m * id[{a}]"), "m ; m^*"),
        eq("separability", "m^* ; m", &format!("id[{a}]")),
        eq("zigzag_left", &format!("id[{a}] * coev ; ev * id[{a}]"), &format!("id[{a}]")),
        eq("zigzag_right", &format!("coev * id[{a}] ; id[{a}] * ev"), &format!("id[{a}]")),
    ]
}

fn equation_checks(eqs: &[EquationDecl]) -> Vec<CheckDecl> {
    eqs.iter()
        .map(|e| check(Check::CheckEquation { equation: e.name.clone() }))
        .collect()
}

fn real(rows: Vec<Vec<f64>>) -> Matrix {
    rows.into_iter()
        .map(|r| r.into_iter().map(|x| [x, 0.0]).collect())
        .collect()
}

fn identity_matrix(n: usize) -> Matrix {
    real((0..n).map(|r| (0..n).map(|c| if r == c { 1.0 } else { 0.0 }).collect()).collect())
}

fn matrix_morphism(name: &str, dom: &[&str], cod: &[&str], matrix: Matrix) -> MorphismDecl {
    MorphismDecl::Matrix(MatrixMorphism {
        name: name.into(),
        dom: dom.iter().map(|s| s.to_string()).collect(),
        cod: cod.iter().map(|s| s.to_string()).collect(),
        matrix,
    })
}

fn qsystem_checks(q: &str, perfect_square: bool) -> Vec<CheckDecl> {
    vec![
        check(Check::VerifyQsystem { qsystem: q.into() }),
        check(Check::Zigzag { qsystem: q.into() }),
        check(Check::SplitObstruction {
            qsystem: q.into(),
            expect_perfect_square: Some(perfect_square),
        }),
    ]
}

fn fn_alg_2() -> Workspace {
    let equations = axiom_equations("A");
    let mut checks = qsystem_checks("A", false);
    checks.extend(equation_checks(&equations));
    checks.push(check(Check::VerifyBimodule { bimodule: "A_A".into() }));
    Workspace {
        qsystems: vec![QSystemDecl::FunctionAlgebra { name: "A".into(), n: 2 }],
        morphisms: parts("A", ""),
        bimodules: vec![BimoduleDecl::SelfBimodule {
            name: "A_A".into(),
            qsystem: "A".into(),
        }],
        equations,
        checks,
        ..Workspace::default()
    }
}

fn matrix_alg_2() -> Workspace {
    let equations = axiom_equations("M");
    let mut checks = qsystem_checks("M", true);
    checks.extend(equation_checks(&equations));
    checks.extend([
        check(Check::VerifyBimodule { bimodule: "M_M".into() }),
        check(Check::VerifyBimodule { bimodule: "M_K_M".into() }),
        check(Check::VerifyIntertwiner {
            morphism: "id_M".into(),
            source: "M_M".into(),
            target: "M_M".into(),
        }),
    ]);
    let mut morphisms = parts("M", "");
    morphisms.push(matrix_morphism("id_M", &["M"], &["M"], identity_matrix(4)));
    Workspace {
        spaces: vec![SpaceDecl {
            name: "K".into(),
            dim: 2,
        }],
        qsystems: vec![QSystemDecl::MatrixAlgebra { name: "M".into(), n: 2 }],
        morphisms,
        bimodules: vec![
            BimoduleDecl::SelfBimodule {
                name: "M_M".into(),
                qsystem: "M".into(),
            },
            BimoduleDecl::Free {
                name: "M_K_M".into(),
                left: "M".into(),
                right: "M".into(),
                multiplicity: "K".into(),
            },
        ],
        equations,
        checks,
        ..Workspace::default()
    }
}

fn cz2() -> Workspace {
    Workspace {
        algebras: vec![AlgebraDecl::Functions {
            name: "F".into(),
            group: "Z2".into(),
        }],
        quantum_groups: vec![
            QuantumGroupDecl::FunctionAlgebra {
                name: "G".into(),
                group: "Z2".into(),
            },
            QuantumGroupDecl::GroupAlgebra {
                name: "H".into(),
                group: "Z2".into(),
            },
        ],
        qsystems: vec![QSystemDecl::FunctionAlgebra { name: "A".into(), n: 2 }],
        bimodules: vec![BimoduleDecl::Trivial {
            name: "B".into(),
            left_group: "G".into(),
            right_group: "G".into(),
            space: vec!["A".into()],
        }],
        checks: vec![
            check(Check::VerifyStarAlgebra { algebra: "F".into() }),
            check(Check::VerifyCqg { quantum_group: "G".into() }),
            check(Check::VerifyCqg { quantum_group: "H".into() }),
            check(Check::VerifyBimodule { bimodule: "B".into() }),
            check(Check::VerifyQsystemInG {
                qsystem: "A".into(),
                bimodule: "B".into(),
            }),
        ],
        ..Workspace::default()
    }
}

fn s3_function_algebra() -> Workspace {
    let mut checks = vec![
        check(Check::VerifyStarAlgebra { algebra: "F".into() }),
        check(Check::VerifyCqg { quantum_group: "G".into() }),
        check(Check::VerifyCqg { quantum_group: "H".into() }),
    ];
    checks.extend(qsystem_checks("CS3", false));
    Workspace {
        algebras: vec![AlgebraDecl::Functions {
            name: "F".into(),
            group: "S3".into(),
        }],
        quantum_groups: vec![
            QuantumGroupDecl::FunctionAlgebra {
                name: "G".into(),
                group: "S3".into(),
            },
            QuantumGroupDecl::GroupAlgebra {
                name: "H".into(),
                group: "S3".into(),
            },
        ],
        qsystems: vec![QSystemDecl::GroupAlgebra {
            name: "CS3".into(),
            group: "S3".into(),
        }],
        checks,
        ..Workspace::default()
    }
}

fn qbe_selfdual_2() -> Workspace {
    let mut checks = Vec::new();
    for e in ["EA", "EM", "EX"] {
        checks.extend([
            check(Check::VerifyQbe { qbielement: e.into() }),
            check(Check::CheckIsometries { qbielement: e.into() }),
            check(Check::CheckFrobeniusIdentities { qbielement: e.into() }),
            check(Check::QuantumFunction {
                qbielement: e.into(),
                unital: false,
            }),
        ]);
    }
    checks.push(check(Check::VerifyQbeIntertwiner {
        morphism: "id_X".into(),
        source: "EX".into(),
        target: "EX".into(),
    }));
    Workspace {
        spaces: vec![SpaceDecl {
            name: "K".into(),
            dim: 2,
        }],
        qsystems: vec![
            QSystemDecl::FunctionAlgebra { name: "A".into(), n: 2 },
            QSystemDecl::MatrixAlgebra { name: "M".into(), n: 2 },
        ],
        morphisms: vec![matrix_morphism("id_X", &["A", "K", "M"], &["A", "K", "M"], identity_matrix(16))],
        bimodules: vec![BimoduleDecl::Free {
            name: "X".into(),
            left: "A".into(),
            right: "M".into(),
            multiplicity: "K".into(),
        }],
        qbielements: vec![
            QbeDecl::SelfDual {
                name: "EA".into(),
                qsystem: "A".into(),
            },
            QbeDecl::SelfDual {
                name: "EM".into(),
                qsystem: "M".into(),
            },
            QbeDecl::FromBimodule {
                name: "EX".into(),
                bimodule: "X".into(),
            },
        ],
        checks,
        ..Workspace::default()
    }
}

fn nonsplit_c3() -> Workspace {
    Workspace {
        qsystems: vec![QSystemDecl::FunctionAlgebra { name: "A".into(), n: 3 }],
        checks: qsystem_checks("A", false),
        ..Workspace::default()
    }
}

fn mm_star_vs_id() -> Workspace {
    // Matrix units e_jk at index 2j + k; m(e_jk ⊗ e_lm) = δ_kl e_jm.
    let mult = (0..4)
        .map(|row| {
            let (j, m) = (row / 2, row % 2);
            (0..16)
                .map(|col| {
                    let (x, y) = (col / 4, col % 4);
                    let hit = x / 2 == j && x % 2 == y / 2 && y % 2 == m;
                    if hit {
                        1.0
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect();
    let unit = real(vec![vec![1.0], vec![0.0], vec![0.0], vec![1.0]]);
    Workspace {
        spaces: vec![SpaceDecl {
            name: "M".into(),
            dim: 4,
        }],
        morphisms: vec![
            matrix_morphism("m", &["M", "M"], &["M"], real(mult)),
            matrix_morphism("i", &[], &["M"], unit),
        ],
        qsystems: vec![QSystemDecl::Explicit {
            name: "Mraw".into(),
            space: "M".into(),
            mult: "m".into(),
            unit: "i".into(),
        }],
        equations: vec![
            eq("mm_star", "m^* ; m", "id[M]"),
            eq("associativity", "m * id[M] ; m", "id[M] * m ; m"),
        ],
        checks: vec![
            expect_fail(Check::CheckEquation {
                equation: "mm_star".into(),
            }),
            check(Check::CheckEquation {
                equation: "associativity".into(),
            }),
            expect_fail(Check::VerifyQsystem { qsystem: "Mraw".into() }),
        ],
        ..Workspace::default()
    }
}
