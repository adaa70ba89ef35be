//! Q-systems in finite-dimensional Hilbert spaces and their bimodules.
//!
//! A Q-system is an object `A` with multiplication `m: A⊗A → A` and unit
//! `i: C → A` such that
//!
//! * `m ∘ (1⊗m) = m ∘ (m⊗1)`,
//! * `m ∘ (i⊗1) = 1 = m ∘ (1⊗i)`,
//! * `(1⊗m) ∘ (m*⊗1) = m* ∘ m = (m⊗1) ∘ (1⊗m*)`,
//! * `m ∘ m* = 1`.

use crate::error::{wire_mismatch, Error, Result};
use crate::group::FiniteGroup;
use crate::report::VerificationReport;
use crate::tensor::{
    self, adjoint, compose, identity, max_abs_diff, tensor, LinearMap, Space, Tolerance, Word, C64,
    ZERO,
};

/// An algebra object `(A, m, i)`. The `verified` flag is only set by
/// [`QSystem::certify`].
#[derive(Debug, Clone)]
pub struct QSystem {
    space: Space,
    mult: LinearMap,
    unit: LinearMap,
    verified: bool,
}

impl PartialEq for QSystem {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.mult == other.mult && self.unit == other.unit
    }
}

impl QSystem {
    /// Builds an unverified candidate, checking only the wire types.
    pub fn new(space: Space, mult: LinearMap, unit: LinearMap) -> Result<Self> {
        let a = Word::from(&space);
        let aa = a.concat(&a);
        if mult.dom() != &aa {
            return Err(wire_mismatch("multiplication domain", &aa, mult.dom()));
        }
        if mult.cod() != &a {
            return Err(wire_mismatch("multiplication codomain", &a, mult.cod()));
        }
        if !unit.dom().is_unit() {
            return Err(wire_mismatch("unit domain", &Word::unit(), unit.dom()));
        }
        if unit.cod() != &a {
            return Err(wire_mismatch("unit codomain", &a, unit.cod()));
        }
        Ok(Self {
            space,
            mult,
            unit,
            verified: false,
        })
    }

    /// Runs [`verify_qsystem`] and sets the verified flag from its outcome.
    pub fn certify(mut self, tol: Tolerance) -> (Self, VerificationReport) {
        let report = verify_qsystem(&self, tol);
        self.verified = report.passed();
        (self, report)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn word(&self) -> Word {
        Word::from(&self.space)
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn mult(&self) -> &LinearMap {
        &self.mult
    }

    pub fn unit(&self) -> &LinearMap {
        &self.unit
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    /// The same structure on a space with a different name.
    pub fn renamed(&self, name: &str) -> Result<Self> {
        let s = Space::new(name, self.space.dim())?;
        let a = Word::from(&s);
        Ok(Self {
            mult: self.mult.retype(a.concat(&a), a.clone())?,
            unit: self.unit.retype(Word::unit(), a)?,
            space: s,
            verified: self.verified,
        })
    }

    /// Transports the structure along a unitary `u: A → A`:
    /// `m' = u m (u*⊗u*)`, `i' = u i`. The result is unverified.
    pub fn conjugate(&self, u: &LinearMap) -> Result<Self> {
        let a = self.word();
        if u.dom() != &a || u.cod() != &a {
            return Err(wire_mismatch("conjugating unitary", &a, u.dom()));
        }
        let ud = adjoint(u);
        let mult = compose(u, &compose(&self.mult, &tensor(&ud, &ud))?)?;
        let unit = compose(u, &self.unit)?;
        Self::new(self.space.clone(), mult, unit)
    }
}

fn residual(a: &LinearMap, b: &LinearMap) -> f64 {
    max_abs_diff(a, b).expect("verifier compares maps of equal signature")
}

/// Checks associativity (Q1), unitality (Q2), the Frobenius condition (Q3)
/// and separability (Q4).
pub fn verify_qsystem(q: &QSystem, tol: Tolerance) -> VerificationReport {
    let mut r = VerificationReport::new(tol);
    let a = q.word();
    let id = identity(&a);
    let m = q.mult();
    let i = q.unit();
    let ms = adjoint(m);
    let c = |g: &LinearMap, f: &LinearMap| compose(g, f).expect("well-typed Q-system composite");

    r.record("Q1", residual(&c(m, &tensor(&id, m)), &c(m, &tensor(m, &id))));
    r.record("Q2.left", residual(&c(m, &tensor(i, &id)), &id));
    r.record("Q2.right", residual(&c(m, &tensor(&id, i)), &id));
    let mid = c(&ms, m);
    r.record("Q3.left", residual(&c(&tensor(&id, m), &tensor(&ms, &id)), &mid));
    r.record("Q3.right", residual(&c(&tensor(m, &id), &tensor(&id, &ms)), &mid));
    r.record("Q4", residual(&c(m, &ms), &id));
    r
}

/// Self-duality pairing `ev = i* ∘ m` and copairing `coev = m* ∘ i`, with a
/// report on the two zig-zag identities.
pub fn ev_coev(q: &QSystem, tol: Tolerance) -> (LinearMap, LinearMap, VerificationReport) {
    let a = q.word();
    let id = identity(&a);
    let ev = compose(&adjoint(q.unit()), q.mult()).expect("unit and mult share A");
    let coev = compose(&adjoint(q.mult()), q.unit()).expect("unit and mult share A");
    let mut r = VerificationReport::new(tol);
    let z1 = compose(&tensor(&ev, &id), &tensor(&id, &coev)).expect("zig-zag");
    let z2 = compose(&tensor(&id, &ev), &tensor(&coev, &id)).expect("zig-zag");
    r.record("zigzag.left", residual(&z1, &id));
    r.record("zigzag.right", residual(&z2, &id));
    (ev, coev, r)
}

/// `ev ∘ ev* = 1` for a pairing into the unit.
pub fn is_unitarily_separable(ev: &LinearMap, tol: Tolerance) -> Result<bool> {
    if !ev.cod().is_unit() {
        return Err(wire_mismatch("pairing codomain", &Word::unit(), ev.cod()));
    }
    let e = compose(ev, &adjoint(ev))?;
    Ok((e.entry(0, 0) - C64::new(1.0, 0.0)).norm() <= tol.eps())
}

fn certified(q: QSystem) -> QSystem {
    q.certify(Tolerance::new(1e-10).expect("valid")).0
}

/// Functions on `n` points: `m(e_j⊗e_k) = δ_jk e_j`, `i(1) = Σ_j e_j`.
/// The space is named `C<n>`.
pub fn function_algebra(n: usize) -> Result<QSystem> {
    let space = Space::new(format!("C{n}"), n)?;
    let a = Word::from(&space);
    let mult = LinearMap::from_fn(a.concat(&a), a.clone(), |r, c| {
        let (j, k) = (c / n, c % n);
        if j == k && r == j {
            C64::new(1.0, 0.0)
        } else {
            ZERO
        }
    })?;
    let unit = LinearMap::ket(a, &vec![C64::new(1.0, 0.0); n])?;
    Ok(certified(QSystem::new(space, mult, unit)?))
}

/// `n×n` matrices in the orthonormal matrix-unit basis `f_jk` (flat index
/// `j·n + k`), normalized so that unitality and separability both hold:
/// `m(f_jk ⊗ f_lm) = δ_kl f_jm / √n` and `i(1) = √n Σ_j f_jj`.
/// The space is named `M<n>`.
pub fn matrix_algebra(n: usize) -> Result<QSystem> {
    let space = Space::new(format!("M{n}"), n * n)?;
    let a = Word::from(&space);
    let d = n * n;
    let s = (n as f64).sqrt();
    let mult = LinearMap::from_fn(a.concat(&a), a.clone(), |r, c| {
        let (x, y) = (c / d, c % d);
        let (j, k) = (x / n, x % n);
        let (l, m) = (y / n, y % n);
        if k == l && r == j * n + m {
            C64::new(1.0 / s, 0.0)
        } else {
            ZERO
        }
    })?;
    let mut u = vec![ZERO; d];
    for j in 0..n {
        u[j * n + j] = C64::new(s, 0.0);
    }
    let unit = LinearMap::ket(a, &u)?;
    Ok(certified(QSystem::new(space, mult, unit)?))
}

/// Group algebra from a multiplication table; validates the group laws.
pub fn group_algebra(
    mult_table: Vec<Vec<usize>>,
    unit_index: usize,
    inverse_table: Vec<usize>,
) -> Result<QSystem> {
    group_algebra_of(&FiniteGroup::new(mult_table, unit_index, inverse_table)?)
}

/// `C[G]` with orthonormal basis `ĝ`, normalized so that unitality and
/// separability both hold: `m(ĝ⊗ĥ) = (gh)^ / √|G|`, `i(1) = √|G| ê`.
/// The space is named `CG<|G|>`.
pub fn group_algebra_of(g: &FiniteGroup) -> Result<QSystem> {
    let n = g.order();
    let space = Space::new(format!("CG{n}"), n)?;
    let a = Word::from(&space);
    let s = (n as f64).sqrt();
    let mult = LinearMap::from_fn(a.concat(&a), a.clone(), |r, c| {
        if r == g.mul(c / n, c % n) {
            C64::new(1.0 / s, 0.0)
        } else {
            ZERO
        }
    })?;
    let mut u = vec![ZERO; n];
    u[g.unit()] = C64::new(s, 0.0);
    let unit = LinearMap::ket(a, &u)?;
    Ok(certified(QSystem::new(space, mult, unit)?))
}

/// Dimension of a Q-system's object and whether it is a perfect square.
/// A split Q-system `X ⊗ X̄` has dimension `dim(X)²`, so a non-square
/// dimension certifies that the Q-system does not split.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitObstruction {
    pub dim: usize,
    pub is_perfect_square: bool,
}

pub fn split_dimension_obstruction(q: &QSystem) -> SplitObstruction {
    let dim = q.dim();
    let r = (dim as f64).sqrt().round() as usize;
    let is_perfect_square = (r.saturating_sub(1)..=r + 1).any(|k| k * k == dim);
    SplitObstruction {
        dim,
        is_perfect_square,
    }
}

/// A `Q`–`P` bimodule `(X, λ, ρ)` with `λ: Q⊗X → X` and `ρ: X⊗P → X`.
#[derive(Debug, Clone)]
pub struct QSysBimodule {
    left: QSystem,
    right: QSystem,
    space: Word,
    lambda: LinearMap,
    rho: LinearMap,
    verified: bool,
}

impl QSysBimodule {
    pub fn new(
        left: QSystem,
        right: QSystem,
        space: Word,
        lambda: LinearMap,
        rho: LinearMap,
    ) -> Result<Self> {
        let qx = left.word().concat(&space);
        let xp = space.concat(&right.word());
        if lambda.dom() != &qx || lambda.cod() != &space {
            return Err(wire_mismatch("left action", &qx, lambda.dom()));
        }
        if lambda.cod() != &space {
            return Err(wire_mismatch("left action codomain", &space, lambda.cod()));
        }
        if rho.dom() != &xp {
            return Err(wire_mismatch("right action", &xp, rho.dom()));
        }
        if rho.cod() != &space {
            return Err(wire_mismatch("right action codomain", &space, rho.cod()));
        }
        Ok(Self {
            left,
            right,
            space,
            lambda,
            rho,
            verified: false,
        })
    }

    /// A Q-system as a bimodule over itself: `(A, m, m)`.
    pub fn self_bimodule(q: &QSystem) -> Self {
        Self::new(q.clone(), q.clone(), q.word(), q.mult().clone(), q.mult().clone())
            .expect("multiplication has bimodule wires")
    }

    /// The free bimodule `Q ⊗ K ⊗ P` with `λ = m_Q ⊗ 1 ⊗ 1` and
    /// `ρ = 1 ⊗ 1 ⊗ m_P`.
    pub fn free(left: &QSystem, multiplicity: &Space, right: &QSystem) -> Self {
        let q = left.word();
        let k = Word::from(multiplicity);
        let p = right.word();
        let x = q.concat(&k).concat(&p);
        let lambda = tensor(&tensor(left.mult(), &identity(&k)), &identity(&p));
        let rho = tensor(&tensor(&identity(&q), &identity(&k)), right.mult());
        Self::new(left.clone(), right.clone(), x, lambda, rho).expect("free bimodule wires")
    }

    pub fn certify(mut self, tol: Tolerance) -> (Self, VerificationReport) {
        let report = verify_qsys_bimodule(&self, tol);
        self.verified = report.passed();
        (self, report)
    }

    pub fn left(&self) -> &QSystem {
        &self.left
    }

    pub fn right(&self) -> &QSystem {
        &self.right
    }

    pub fn space(&self) -> &Word {
        &self.space
    }

    pub fn lambda(&self) -> &LinearMap {
        &self.lambda
    }

    pub fn rho(&self) -> &LinearMap {
        &self.rho
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    /// Pulls the actions back along an isometry `v: Y → X`:
    /// `λ_Y = v* λ (1⊗v)`, `ρ_Y = v* ρ (v⊗1)`. When `v v*` is an intertwining
    /// projection this is the sub-bimodule cut out by it.
    pub fn restrict(&self, v: &LinearMap) -> Result<Self> {
        if v.cod() != &self.space {
            return Err(wire_mismatch("restriction isometry", &self.space, v.cod()));
        }
        let vs = adjoint(v);
        let lambda = tensor::chain(&[
            &tensor(&identity(&self.left.word()), v),
            &self.lambda,
            &vs,
        ])?;
        let rho = tensor::chain(&[&tensor(v, &identity(&self.right.word())), &self.rho, &vs])?;
        Self::new(self.left.clone(), self.right.clone(), v.dom().clone(), lambda, rho)
    }

    /// Splits an intertwining projection `p` on `X`: returns the
    /// sub-bimodule on its range and the inclusion isometry.
    pub fn split(&self, p: &LinearMap, tol: Tolerance) -> Result<(Self, LinearMap)> {
        let check = verify_qsys_intertwiner(p, self, self, tol)?;
        if !check.passed() {
            return Err(Error::NotAnIntertwiner {
                residual: check.max_residual(),
            });
        }
        let iso = tensor::range_factorize(p, tol)?;
        Ok((self.restrict(&iso)?, iso))
    }
}

/// Checks the bimodule axioms: associativity (B1, three equations),
/// unitality (B2), the Frobenius condition (B3, four equations) and
/// separability (B4).
pub fn verify_qsys_bimodule(mb: &QSysBimodule, tol: Tolerance) -> VerificationReport {
    let mut r = VerificationReport::new(tol);
    let (q, p) = (&mb.left, &mb.right);
    let x = &mb.space;
    let (qw, pw, u) = (q.word(), p.word(), Word::unit());
    let idx = identity(x);
    let (l, rh) = (&mb.lambda, &mb.rho);
    let (ls, rs) = (adjoint(l), adjoint(rh));
    let (mq, mp) = (q.mult(), p.mult());
    let (mqs, mps) = (adjoint(mq), adjoint(mp));
    let c = |g: &LinearMap, f: &LinearMap| compose(g, f).expect("well-typed bimodule composite");
    // g ∘ (1_a ⊗ f ⊗ 1_b) and (1_a ⊗ f ⊗ 1_b) ∘ g
    let after = |g: &LinearMap, a: &Word, f: &LinearMap, b: &Word| {
        tensor::whisker_into(g, a, f, b).expect("well-typed bimodule composite")
    };
    let before = |a: &Word, f: &LinearMap, b: &Word, g: &LinearMap| {
        tensor::whisker(a, f, b, g).expect("well-typed bimodule composite")
    };

    r.record("B1.left", residual(&after(l, &qw, l, &u), &after(l, &u, mq, x)));
    r.record("B1.right", residual(&after(rh, &u, rh, &pw), &after(rh, x, mp, &u)));
    r.record("B1.middle", residual(&after(rh, &u, l, &pw), &after(l, &qw, rh, &u)));
    r.record("B2.left", residual(&after(l, &u, q.unit(), x), &idx));
    r.record("B2.right", residual(&after(rh, x, p.unit(), &u), &idx));
    let lmid = c(&ls, l);
    let start = identity(&qw.concat(x));
    r.record("B3.left.1", residual(&before(&u, mq, x, &before(&qw, &ls, &u, &start)), &lmid));
    r.record("B3.left.2", residual(&before(&qw, l, &u, &before(&u, &mqs, x, &start)), &lmid));
    let rmid = c(&rs, rh);
    let start = identity(&x.concat(&pw));
    r.record("B3.right.1", residual(&before(x, mp, &u, &before(&u, &rs, &pw, &start)), &rmid));
    r.record("B3.right.2", residual(&before(&u, rh, &pw, &before(x, &mps, &u, &start)), &rmid));
    r.record("B4.left", residual(&c(l, &ls), &idx));
    r.record("B4.right", residual(&c(rh, &rs), &idx));
    r
}

fn check_same_pair(m: &QSysBimodule, n: &QSysBimodule) -> Result<()> {
    if m.left != n.left || m.right != n.right {
        return Err(Error::PairMismatch(format!(
            "bimodules over ({}, {}) and ({}, {})",
            m.left.space, m.right.space, n.left.space, n.right.space
        )));
    }
    Ok(())
}

/// Checks `f ∘ λ_X = λ_Y ∘ (1⊗f)` and `f ∘ ρ_X = ρ_Y ∘ (f⊗1)` for `f: X → Y`.
pub fn verify_qsys_intertwiner(
    f: &LinearMap,
    m: &QSysBimodule,
    n: &QSysBimodule,
    tol: Tolerance,
) -> Result<VerificationReport> {
    check_same_pair(m, n)?;
    if f.dom() != &m.space {
        return Err(wire_mismatch("intertwiner domain", &m.space, f.dom()));
    }
    if f.cod() != &n.space {
        return Err(wire_mismatch("intertwiner codomain", &n.space, f.cod()));
    }
    let mut r = VerificationReport::new(tol);
    let (lhs, rhs) = qsys_intertwiner_sides(f, m, n)?;
    r.record("left", residual(&lhs[0], &rhs[0]));
    r.record("right", residual(&lhs[1], &rhs[1]));
    Ok(r)
}

fn qsys_intertwiner_sides(
    f: &LinearMap,
    m: &QSysBimodule,
    n: &QSysBimodule,
) -> Result<([LinearMap; 2], [LinearMap; 2])> {
    let u = Word::unit();
    let l1 = compose(f, &m.lambda)?;
    let r1 = tensor::whisker_into(&n.lambda, &m.left.word(), f, &u)?;
    let l2 = compose(f, &m.rho)?;
    let r2 = tensor::whisker_into(&n.rho, &u, f, &m.right.word())?;
    Ok(([l1, l2], [r1, r2]))
}

/// Orthonormal basis of the intertwiner space `X → Y`.
pub fn qsys_intertwiner_space(m: &QSysBimodule, n: &QSysBimodule) -> Result<Vec<LinearMap>> {
    check_same_pair(m, n)?;
    tensor::linear_solutions(&m.space, &n.space, |t| {
        let ([a, b], [c, d]) = qsys_intertwiner_sides(t, m, n)?;
        Ok(vec![a.sub(&c)?, b.sub(&d)?])
    })
}
