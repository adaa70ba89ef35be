//! Resolution of a parsed workspace into library objects.
//!
//! Spaces form one namespace (wire labels). Every other declared object
//! shares a second namespace, so a name refers to at most one thing.

use std::collections::{BTreeMap, BTreeSet};

use qsyslab_core::cqg::{FDStarAlgebra, FiniteQuantumGroup, UnitaryBimodule};
use qsyslab_core::diagram::{parse, typecheck, Environment, MorphismExpr};
use qsyslab_core::frobenius::{
    ev_coev, function_algebra, group_algebra_of, matrix_algebra, QSysBimodule, QSystem,
};
use qsyslab_core::group::FiniteGroup;
use qsyslab_core::qbe::QuantumBiElement;
use qsyslab_core::tensor::{adjoint, LinearMap, Space, Tolerance, Word, C64};

use crate::workspace::{
    AlgebraDecl, BimoduleDecl, Check, CheckDecl, Complex, Matrix, MorphismDecl, QSystemDecl,
    QSystemPart, QbeDecl, QuantumGroupDecl, Workspace,
};
use crate::CliError;

#[derive(Debug, Clone)]
pub enum Bimodule {
    QSys(QSysBimodule),
    Unitary(UnitaryBimodule),
}

/// A workspace with every name resolved.
#[derive(Debug, Clone)]
pub struct Model {
    pub spaces: BTreeMap<String, Space>,
    pub algebras: BTreeMap<String, FDStarAlgebra>,
    pub quantum_groups: BTreeMap<String, FiniteQuantumGroup>,
    pub morphisms: BTreeMap<String, LinearMap>,
    pub qsystems: BTreeMap<String, QSystem>,
    pub bimodules: BTreeMap<String, Bimodule>,
    pub qbielements: BTreeMap<String, QuantumBiElement>,
    pub equations: BTreeMap<String, (MorphismExpr, MorphismExpr)>,
    pub env: Environment,
    pub checks: Vec<CheckDecl>,
}

fn err(path: impl Into<String>, message: impl ToString) -> CliError {
    CliError::Resolve {
        path: path.into(),
        message: message.to_string(),
    }
}

fn c64(z: &Complex) -> C64 {
    C64::new(z[0], z[1])
}

struct Resolver {
    model: Model,
    names: BTreeSet<String>,
}

impl Resolver {
    fn claim(&mut self, path: &str, name: &str) -> Result<(), CliError> {
        if !self.names.insert(name.to_string()) {
            return Err(err(path, format!("duplicate name `{name}`")));
        }
        Ok(())
    }

    /// Registers a space, accepting a re-declaration of the same dimension.
    fn register_space(&mut self, path: &str, space: &Space) -> Result<(), CliError> {
        match self.model.spaces.get(space.name()) {
            Some(s) if s.dim() == space.dim() => Ok(()),
            Some(s) => Err(err(
                path,
                format!(
                    "space `{}` has dimension {} but is used with dimension {}",
                    s.name(),
                    s.dim(),
                    space.dim()
                ),
            )),
            None => {
                self.model.spaces.insert(space.name().to_string(), space.clone());
                Ok(())
            }
        }
    }

    fn space(&self, path: &str, name: &str) -> Result<Space, CliError> {
        self.model
            .spaces
            .get(name)
            .cloned()
            .ok_or_else(|| err(path, format!("unknown space `{name}`")))
    }

    fn word(&self, path: &str, names: &[String]) -> Result<Word, CliError> {
        names
            .iter()
            .enumerate()
            .map(|(k, n)| self.space(&format!("{path}[{k}]"), n))
            .collect()
    }

    fn lookup<'a, T>(
        map: &'a BTreeMap<String, T>,
        what: &str,
        path: &str,
        name: &str,
    ) -> Result<&'a T, CliError> {
        map.get(name).ok_or_else(|| err(path, format!("unknown {what} `{name}`")))
    }

    fn morphism(&self, path: &str, name: &str) -> Result<LinearMap, CliError> {
        Self::lookup(&self.model.morphisms, "morphism", path, name).cloned()
    }

    fn qsystem(&self, path: &str, name: &str) -> Result<QSystem, CliError> {
        Self::lookup(&self.model.qsystems, "qsystem", path, name).cloned()
    }

    fn quantum_group(&self, path: &str, name: &str) -> Result<FiniteQuantumGroup, CliError> {
        Self::lookup(&self.model.quantum_groups, "quantum group", path, name).cloned()
    }
}

fn group(path: &str, name: &str) -> Result<FiniteGroup, CliError> {
    FiniteGroup::named(name).map_err(|e| err(path, e))
}

fn matrix_rows(m: &Matrix) -> Vec<Vec<C64>> {
    m.iter().map(|row| row.iter().map(c64).collect()).collect()
}

/// Resolves every declaration, in the order spaces, algebras, quantum
/// groups, matrix morphisms, Q-systems, Q-system parts, bimodules,
/// bi-elements, equations and checks.
pub fn resolve(ws: &Workspace) -> Result<Model, CliError> {
    let mut r = Resolver {
        model: Model {
            spaces: BTreeMap::new(),
            algebras: BTreeMap::new(),
            quantum_groups: BTreeMap::new(),
            morphisms: BTreeMap::new(),
            qsystems: BTreeMap::new(),
            bimodules: BTreeMap::new(),
            qbielements: BTreeMap::new(),
            equations: BTreeMap::new(),
            env: Environment::new(),
            checks: ws.checks.clone(),
        },
        names: BTreeSet::new(),
    };

    for (k, s) in ws.spaces.iter().enumerate() {
        let path = format!("spaces[{k}]");
        if r.model.spaces.contains_key(&s.name) {
            return Err(err(path, format!("duplicate space `{}`", s.name)));
        }
        let space = Space::new(&s.name, s.dim).map_err(|e| err(format!("{path}.dim"), e))?;
        r.model.spaces.insert(s.name.clone(), space);
    }

    for (k, a) in ws.algebras.iter().enumerate() {
        let path = format!("algebras[{k}]");
        let (name, alg) = match a {
            AlgebraDecl::Functions { name, group: g } => {
                let g = group(&format!("{path}.group"), g)?;
                let space = Space::new(name, g.order()).map_err(|e| err(&path, e))?;
                (name, FDStarAlgebra::functions(space))
            }
            AlgebraDecl::GroupAlgebra { name, group: g } => {
                let g = group(&format!("{path}.group"), g)?;
                let qg = FiniteQuantumGroup::group_algebra(&g, name).map_err(|e| err(&path, e))?;
                let base = qg.algebra();
                let space = Space::new(name, g.order()).map_err(|e| err(&path, e))?;
                let alg = FDStarAlgebra::new(
                    space,
                    base.structure().to_vec(),
                    base.unit_vector().to_vec(),
                    base.involution().clone(),
                )
                .map_err(|e| err(&path, e))?;
                (name, alg)
            }
            AlgebraDecl::StructureConstants {
                name,
                space,
                structure,
                unit,
                involution,
            } => {
                let space = r.space(&format!("{path}.space"), space)?;
                let structure = structure
                    .iter()
                    .map(|j| j.iter().map(|k| k.iter().map(c64).collect()).collect())
                    .collect();
                let unit = unit.iter().map(c64).collect();
                let n = space.dim();
                let rows = matrix_rows(involution);
                if rows.len() != n || rows.iter().any(|row| row.len() != n) {
                    return Err(err(
                        format!("{path}.involution"),
                        format!("involution must be {n}x{n}"),
                    ));
                }
                let s = nalgebra::DMatrix::from_fn(n, n, |i, j| rows[i][j]);
                let alg = FDStarAlgebra::new(space, structure, unit, s).map_err(|e| err(&path, e))?;
                (name, alg)
            }
        };
        r.claim(&path, name)?;
        r.register_space(&path, alg.space())?;
        r.model.algebras.insert(name.clone(), alg);
    }

    // Explicit quantum groups need morphisms, so they wait until after the
    // matrix morphisms below.
    for (k, q) in ws.quantum_groups.iter().enumerate() {
        let path = format!("quantum_groups[{k}]");
        let qg = match q {
            QuantumGroupDecl::FunctionAlgebra { name, group: g } => {
                let g = group(&format!("{path}.group"), g)?;
                FiniteQuantumGroup::function_algebra(&g, name).map_err(|e| err(&path, e))?
            }
            QuantumGroupDecl::GroupAlgebra { name, group: g } => {
                let g = group(&format!("{path}.group"), g)?;
                FiniteQuantumGroup::group_algebra(&g, name).map_err(|e| err(&path, e))?
            }
            QuantumGroupDecl::Explicit { .. } => continue,
        };
        let name = quantum_group_name(q);
        r.claim(&path, name)?;
        r.register_space(&path, qg.algebra().space())?;
        r.model.quantum_groups.insert(name.to_string(), qg);
    }

    // Built-in Q-systems register a space named after themselves.
    for (k, q) in ws.qsystems.iter().enumerate() {
        let path = format!("qsystems[{k}]");
        let built = match q {
            QSystemDecl::FunctionAlgebra { name, n } => Some((name, function_algebra(*n))),
            QSystemDecl::MatrixAlgebra { name, n } => Some((name, matrix_algebra(*n))),
            QSystemDecl::GroupAlgebra { name, group: g } => {
                let g = group(&format!("{path}.group"), g)?;
                Some((name, group_algebra_of(&g)))
            }
            QSystemDecl::Explicit { .. } => None,
        };
        if let Some((name, q)) = built {
            let q = q
                .and_then(|q| q.renamed(name))
                .map_err(|e| err(&path, e))?;
            r.register_space(&path, q.space())?;
            r.model.qsystems.insert(name.clone(), q);
        }
    }

    for (k, m) in ws.morphisms.iter().enumerate() {
        let MorphismDecl::Matrix(m) = m else { continue };
        let path = format!("morphisms[{k}]");
        r.claim(&path, &m.name)?;
        let dom = r.word(&format!("{path}.dom"), &m.dom)?;
        let cod = r.word(&format!("{path}.cod"), &m.cod)?;
        let map = LinearMap::from_rows(dom, cod, &matrix_rows(&m.matrix))
            .map_err(|e| err(format!("{path}.matrix"), e))?;
        r.model.morphisms.insert(m.name.clone(), map);
    }

    for (k, q) in ws.quantum_groups.iter().enumerate() {
        let QuantumGroupDecl::Explicit {
            name,
            algebra,
            comult,
        } = q
        else {
            continue;
        };
        let path = format!("quantum_groups[{k}]");
        r.claim(&path, name)?;
        let alg = Resolver::lookup(&r.model.algebras, "algebra", &format!("{path}.algebra"), algebra)?
            .clone();
        let d = r.morphism(&format!("{path}.comult"), comult)?;
        let qg = FiniteQuantumGroup::new(alg, d).map_err(|e| err(&path, e))?;
        r.model.quantum_groups.insert(name.clone(), qg);
    }

    for (k, q) in ws.qsystems.iter().enumerate() {
        let path = format!("qsystems[{k}]");
        let name = qsystem_name(q);
        r.claim(&path, name)?;
        if let QSystemDecl::Explicit {
            name,
            space,
            mult,
            unit,
        } = q
        {
            let space = r.space(&format!("{path}.space"), space)?;
            let m = r.morphism(&format!("{path}.mult"), mult)?;
            let i = r.morphism(&format!("{path}.unit"), unit)?;
            let q = QSystem::new(space, m, i).map_err(|e| err(&path, e))?;
            r.model.qsystems.insert(name.clone(), q);
        }
    }

    for (k, m) in ws.morphisms.iter().enumerate() {
        let MorphismDecl::Part(p) = m else { continue };
        let path = format!("morphisms[{k}]");
        r.claim(&path, &p.name)?;
        let q = r.qsystem(&format!("{path}.qsystem"), &p.qsystem)?;
        let map = match p.part {
            QSystemPart::Mult => q.mult().clone(),
            QSystemPart::Unit => q.unit().clone(),
            QSystemPart::Ev | QSystemPart::Coev => {
                let (ev, coev, _) = ev_coev(&q, Tolerance::default());
                if p.part == QSystemPart::Ev {
                    ev
                } else {
                    coev
                }
            }
        };
        r.model.morphisms.insert(p.name.clone(), map);
    }

    for (k, b) in ws.bimodules.iter().enumerate() {
        let path = format!("bimodules[{k}]");
        let (name, bimodule) = match b {
            BimoduleDecl::SelfBimodule { name, qsystem } => {
                let q = r.qsystem(&format!("{path}.qsystem"), qsystem)?;
                (name, Bimodule::QSys(QSysBimodule::self_bimodule(&q)))
            }
            BimoduleDecl::Free {
                name,
                left,
                right,
                multiplicity,
            } => {
                let l = r.qsystem(&format!("{path}.left"), left)?;
                let rq = r.qsystem(&format!("{path}.right"), right)?;
                let k = r.space(&format!("{path}.multiplicity"), multiplicity)?;
                (name, Bimodule::QSys(QSysBimodule::free(&l, &k, &rq)))
            }
            BimoduleDecl::Qsys {
                name,
                left,
                right,
                space,
                lambda,
                rho,
            } => {
                let l = r.qsystem(&format!("{path}.left"), left)?;
                let rq = r.qsystem(&format!("{path}.right"), right)?;
                let x = r.word(&format!("{path}.space"), space)?;
                let lam = r.morphism(&format!("{path}.lambda"), lambda)?;
                let rho = r.morphism(&format!("{path}.rho"), rho)?;
                let m = QSysBimodule::new(l, rq, x, lam, rho).map_err(|e| err(&path, e))?;
                (name, Bimodule::QSys(m))
            }
            BimoduleDecl::Trivial {
                name,
                left_group,
                right_group,
                space,
            } => {
                let g = r.quantum_group(&format!("{path}.left_group"), left_group)?;
                let h = r.quantum_group(&format!("{path}.right_group"), right_group)?;
                let x = r.word(&format!("{path}.space"), space)?;
                (name, Bimodule::Unitary(UnitaryBimodule::trivial(&g, &h, x)))
            }
            BimoduleDecl::Unitary {
                name,
                left_group,
                right_group,
                space,
                left_coaction,
                right_coaction,
            } => {
                let g = r.quantum_group(&format!("{path}.left_group"), left_group)?;
                let h = r.quantum_group(&format!("{path}.right_group"), right_group)?;
                let x = r.word(&format!("{path}.space"), space)?;
                let lc = r.morphism(&format!("{path}.left_coaction"), left_coaction)?;
                let rc = r.morphism(&format!("{path}.right_coaction"), right_coaction)?;
                let v = UnitaryBimodule::new(g, h, x, lc, rc).map_err(|e| err(&path, e))?;
                (name, Bimodule::Unitary(v))
            }
        };
        r.claim(&path, name)?;
        r.model.bimodules.insert(name.clone(), bimodule);
    }

    for (k, e) in ws.qbielements.iter().enumerate() {
        let path = format!("qbielements[{k}]");
        // Built without verification: checks report on them.
        let (name, qbe) = match e {
            QbeDecl::SelfDual { name, qsystem } => {
                let a = r.qsystem(&format!("{path}.qsystem"), qsystem)?;
                let ms = adjoint(a.mult());
                let e = QuantumBiElement::new(a.clone(), a.clone(), a.word(), ms.clone(), ms);
                (name, e)
            }
            QbeDecl::FromBimodule { name, bimodule } => {
                let b = Resolver::lookup(&r.model.bimodules, "bimodule", &format!("{path}.bimodule"), bimodule)?;
                let Bimodule::QSys(m) = b else {
                    return Err(err(
                        format!("{path}.bimodule"),
                        format!("`{bimodule}` is not a Q-system bimodule"),
                    ));
                };
                let e = QuantumBiElement::new(
                    m.left().clone(),
                    m.right().clone(),
                    m.space().clone(),
                    adjoint(m.lambda()),
                    adjoint(m.rho()),
                );
                (name, e)
            }
            QbeDecl::Explicit {
                name,
                left,
                right,
                space,
                q1,
                q2,
            } => {
                let a = r.qsystem(&format!("{path}.left"), left)?;
                let b = r.qsystem(&format!("{path}.right"), right)?;
                let h = r.word(&format!("{path}.space"), space)?;
                let q1 = r.morphism(&format!("{path}.q1"), q1)?;
                let q2 = r.morphism(&format!("{path}.q2"), q2)?;
                (name, QuantumBiElement::new(a, b, h, q1, q2))
            }
        };
        r.claim(&path, name)?;
        let qbe = qbe.map_err(|e| err(&path, e))?;
        r.model.qbielements.insert(name.clone(), qbe);
    }

    for space in r.model.spaces.values() {
        r.model.env.add_space(space.clone()).expect("space names are unique");
    }
    for (name, m) in &r.model.morphisms {
        r.model
            .env
            .add_generator(name.clone(), m.clone())
            .expect("morphism wires use registered spaces");
    }

    for (k, eq) in ws.equations.iter().enumerate() {
        let path = format!("equations[{k}]");
        r.claim(&path, &eq.name)?;
        let lhs = parse(&eq.lhs).map_err(|e| err(format!("{path}.lhs"), e))?;
        let rhs = parse(&eq.rhs).map_err(|e| err(format!("{path}.rhs"), e))?;
        let ls = typecheck(&lhs, &r.model.env).map_err(|e| err(format!("{path}.lhs"), e))?;
        let rs = typecheck(&rhs, &r.model.env).map_err(|e| err(format!("{path}.rhs"), e))?;
        if ls != rs {
            return Err(err(
                &path,
                format!(
                    "sides have different signatures: {} -> {} and {} -> {}",
                    ls.0, ls.1, rs.0, rs.1
                ),
            ));
        }
        r.model.equations.insert(eq.name.clone(), (lhs, rhs));
    }

    let mut check_names = BTreeSet::new();
    for (k, c) in ws.checks.iter().enumerate() {
        let path = format!("checks[{k}]");
        if !check_names.insert(c.display_name()) {
            return Err(err(&path, format!("duplicate check name `{}`", c.display_name())));
        }
        if let Some(t) = c.tol {
            Tolerance::new(t).map_err(|e| err(format!("{path}.tol"), e))?;
        }
        validate_check(&r.model, &path, &c.check)?;
    }

    Ok(r.model)
}

fn quantum_group_name(q: &QuantumGroupDecl) -> &str {
    match q {
        QuantumGroupDecl::FunctionAlgebra { name, .. }
        | QuantumGroupDecl::GroupAlgebra { name, .. }
        | QuantumGroupDecl::Explicit { name, .. } => name,
    }
}

fn qsystem_name(q: &QSystemDecl) -> &str {
    match q {
        QSystemDecl::FunctionAlgebra { name, .. }
        | QSystemDecl::MatrixAlgebra { name, .. }
        | QSystemDecl::GroupAlgebra { name, .. }
        | QSystemDecl::Explicit { name, .. } => name,
    }
}

fn need<T>(map: &BTreeMap<String, T>, what: &str, path: &str, field: &str, name: &str) -> Result<(), CliError> {
    if map.contains_key(name) {
        Ok(())
    } else {
        Err(err(format!("{path}.{field}"), format!("unknown {what} `{name}`")))
    }
}

fn validate_check(m: &Model, path: &str, c: &Check) -> Result<(), CliError> {
    match c {
        Check::VerifyQsystem { qsystem } | Check::Zigzag { qsystem } | Check::SplitObstruction { qsystem, .. } => {
            need(&m.qsystems, "qsystem", path, "qsystem", qsystem)
        }
        Check::VerifyStarAlgebra { algebra } => need(&m.algebras, "algebra", path, "algebra", algebra),
        Check::VerifyCqg { quantum_group } => {
            need(&m.quantum_groups, "quantum group", path, "quantum_group", quantum_group)
        }
        Check::VerifyBimodule { bimodule } => need(&m.bimodules, "bimodule", path, "bimodule", bimodule),
        Check::VerifyIntertwiner {
            morphism,
            source,
            target,
        } => {
            need(&m.morphisms, "morphism", path, "morphism", morphism)?;
            need(&m.bimodules, "bimodule", path, "source", source)?;
            need(&m.bimodules, "bimodule", path, "target", target)
        }
        Check::VerifyQsystemInG { qsystem, bimodule } => {
            need(&m.qsystems, "qsystem", path, "qsystem", qsystem)?;
            need(&m.bimodules, "bimodule", path, "bimodule", bimodule)
        }
        Check::VerifyQbe { qbielement }
        | Check::CheckIsometries { qbielement }
        | Check::CheckFrobeniusIdentities { qbielement }
        | Check::QuantumFunction { qbielement, .. } => {
            need(&m.qbielements, "qbielement", path, "qbielement", qbielement)
        }
        Check::VerifyQbeIntertwiner {
            morphism,
            source,
            target,
        } => {
            need(&m.morphisms, "morphism", path, "morphism", morphism)?;
            need(&m.qbielements, "qbielement", path, "source", source)?;
            need(&m.qbielements, "qbielement", path, "target", target)
        }
        Check::CheckEquation { equation } => need(&m.equations, "equation", path, "equation", equation),
    }
}
