//! Quantum bi-elements of a pair of Q-systems, quantum functions, and the
//! embedding of Q-system bimodules as bi-elements.
//!
//! A bi-element of `(A, B)` is a space `H` with `Q₁: H → A⊗H` and
//! `Q₂: H → H⊗B`. The defining conditions are read as
//!
//! * (1a) `(1_A⊗Q₁)Q₁ = (m_A*⊗1_H)Q₁`
//! * (1b) `(Q₂⊗1_B)Q₂ = (1_H⊗m_B*)Q₂`
//! * (1c) `(1_A⊗Q₂)Q₁ = (Q₁⊗1_B)Q₂`
//! * (2)  `(i_A*⊗1_H)Q₁ = 1_H = (1_H⊗i_B*)Q₂`
//! * (3a) `Q₁* = (i_A* m_A ⊗ 1_H)(1_A⊗Q₁)`
//! * (3b) `Q₂* = (1_H ⊗ i_B* m_B)(Q₂⊗1_B)`
//!
//! This reading is pinned by two facts: `(A, m*, m*)` satisfies it, and so
//! does `(X, λ*, ρ*)` for every bimodule `(X, λ, ρ)`.

use crate::error::{wire_mismatch, Error, Result};
use crate::frobenius::{verify_qsys_bimodule, verify_qsystem, QSysBimodule, QSystem};
use crate::report::{EquationReport, VerificationReport};
use crate::tensor::{
    self, adjoint, compose, identity, isometry_residual, max_abs_diff, tensor, LinearMap, Tolerance,
    Word, C64, ZERO,
};

fn residual(a: &LinearMap, b: &LinearMap) -> f64 {
    max_abs_diff(a, b).expect("verifier compares maps of equal signature")
}

fn c(g: &LinearMap, f: &LinearMap) -> LinearMap {
    compose(g, f).expect("well-typed composite")
}

/// `(1_l ⊗ f ⊗ 1_r) ∘ x`.
fn w(l: &Word, f: &LinearMap, r: &Word, x: &LinearMap) -> LinearMap {
    tensor::whisker(l, f, r, x).expect("well-typed composite")
}

fn failed(what: &str, report: VerificationReport) -> Error {
    Error::VerificationFailed {
        what: what.to_string(),
        report: Box::new(report),
    }
}

/// A triple `(H, Q₁, Q₂)` over the pair `(A, B)`.
#[derive(Debug, Clone)]
pub struct QuantumBiElement {
    left_q: QSystem,
    right_q: QSystem,
    space: Word,
    q1: LinearMap,
    q2: LinearMap,
    verified: bool,
}

impl QuantumBiElement {
    pub fn new(
        left_q: QSystem,
        right_q: QSystem,
        space: Word,
        q1: LinearMap,
        q2: LinearMap,
    ) -> Result<Self> {
        let ah = left_q.word().concat(&space);
        let hb = space.concat(&right_q.word());
        if q1.dom() != &space {
            return Err(wire_mismatch("Q1 domain", &space, q1.dom()));
        }
        if q1.cod() != &ah {
            return Err(wire_mismatch("Q1 codomain", &ah, q1.cod()));
        }
        if q2.dom() != &space {
            return Err(wire_mismatch("Q2 domain", &space, q2.dom()));
        }
        if q2.cod() != &hb {
            return Err(wire_mismatch("Q2 codomain", &hb, q2.cod()));
        }
        Ok(Self {
            left_q,
            right_q,
            space,
            q1,
            q2,
            verified: false,
        })
    }

    pub fn certify(mut self, tol: Tolerance) -> (Self, VerificationReport) {
        let report = verify_qbe(&self, tol);
        self.verified = report.passed();
        (self, report)
    }

    pub fn left_q(&self) -> &QSystem {
        &self.left_q
    }

    pub fn right_q(&self) -> &QSystem {
        &self.right_q
    }

    pub fn space(&self) -> &Word {
        &self.space
    }

    pub fn q1(&self) -> &LinearMap {
        &self.q1
    }

    pub fn q2(&self) -> &LinearMap {
        &self.q2
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }
}

/// Checks conditions (1a)–(3b).
pub fn verify_qbe(e: &QuantumBiElement, tol: Tolerance) -> VerificationReport {
    let (a, b) = (&e.left_q, &e.right_q);
    let (aw, hw, bw, u) = (a.word(), &e.space, b.word(), Word::unit());
    let ih = identity(hw);
    let (q1, q2) = (&e.q1, &e.q2);
    let mut r = VerificationReport::new(tol);
    r.record("1a", residual(&w(&aw, q1, &u, q1), &w(&u, &adjoint(a.mult()), hw, q1)));
    r.record("1b", residual(&w(&u, q2, &bw, q2), &w(hw, &adjoint(b.mult()), &u, q2)));
    r.record("1c", residual(&w(&aw, q2, &u, q1), &w(&u, q1, &bw, q2)));
    r.record("2.left", residual(&w(&u, &adjoint(a.unit()), hw, q1), &ih));
    r.record("2.right", residual(&w(hw, &adjoint(b.unit()), &u, q2), &ih));
    let ev_a = c(&adjoint(a.unit()), a.mult());
    let ev_b = c(&adjoint(b.unit()), b.mult());
    let q1_right = w(&aw, q1, &u, &identity(&aw.concat(hw)));
    r.record("3a", residual(&adjoint(q1), &w(&u, &ev_a, hw, &q1_right)));
    let q2_left = w(&u, q2, &bw, &identity(&hw.concat(&bw)));
    r.record("3b", residual(&adjoint(q2), &w(hw, &ev_b, &u, &q2_left)));
    r
}

/// The conditions on `Q₁` alone that define a quantum element of `A`:
/// (1a), the left half of (2) and (3a).
pub fn verify_quantum_element(
    a: &QSystem,
    space: &Word,
    q1: &LinearMap,
    tol: Tolerance,
) -> Result<VerificationReport> {
    let ah = a.word().concat(space);
    if q1.dom() != space || q1.cod() != &ah {
        return Err(wire_mismatch("quantum element", &ah, q1.cod()));
    }
    let (aw, u) = (a.word(), Word::unit());
    let mut r = VerificationReport::new(tol);
    r.record("1a", residual(&w(&aw, q1, &u, q1), &w(&u, &adjoint(a.mult()), space, q1)));
    r.record("2.left", residual(&w(&u, &adjoint(a.unit()), space, q1), &identity(space)));
    let ev_a = c(&adjoint(a.unit()), a.mult());
    let q1_right = w(&aw, q1, &u, &identity(&ah));
    r.record("3a", residual(&adjoint(q1), &w(&u, &ev_a, space, &q1_right)));
    Ok(r)
}

/// The two equality chains
/// `(m_A⊗1)(1⊗Q₁) = Q₁Q₁* = (1⊗Q₁*)(m_A*⊗1)` and
/// `(1⊗m_B)(Q₂⊗1) = Q₂Q₂* = (Q₂*⊗1)(1⊗m_B*)`,
/// reported as four residuals against the middle terms.
///
/// These are consequences of the axioms. If `e` was never verified and an
/// identity fails, the report is returned inside `VerificationFailed`.
pub fn check_frobenius_identities(
    e: &QuantumBiElement,
    tol: Tolerance,
) -> Result<VerificationReport> {
    let (a, b) = (&e.left_q, &e.right_q);
    let (aw, hw, bw, u) = (a.word(), &e.space, b.word(), Word::unit());
    let (iah, ihb) = (identity(&aw.concat(hw)), identity(&hw.concat(&bw)));
    let (q1, q2) = (&e.q1, &e.q2);
    let mut r = VerificationReport::new(tol);
    let mid1 = c(q1, &adjoint(q1));
    let lhs = w(&u, a.mult(), hw, &w(&aw, q1, &u, &iah));
    r.record("left.1", residual(&lhs, &mid1));
    let lhs = w(&aw, &adjoint(q1), &u, &w(&u, &adjoint(a.mult()), hw, &iah));
    r.record("left.2", residual(&lhs, &mid1));
    let mid2 = c(q2, &adjoint(q2));
    let lhs = w(hw, b.mult(), &u, &w(&u, q2, &bw, &ihb));
    r.record("right.1", residual(&lhs, &mid2));
    let lhs = w(&u, &adjoint(q2), &bw, &w(hw, &adjoint(b.mult()), &u, &ihb));
    r.record("right.2", residual(&lhs, &mid2));
    if !e.verified && !r.passed() {
        return Err(failed("Frobenius identities of an unverified bi-element", r));
    }
    Ok(r)
}

/// `Q₁*Q₁ = 1` and `Q₂*Q₂ = 1`.
pub fn check_isometries(e: &QuantumBiElement, tol: Tolerance) -> VerificationReport {
    let mut r = VerificationReport::new(tol);
    r.record("Q1", isometry_residual(&e.q1));
    r.record("Q2", isometry_residual(&e.q2));
    r
}

/// `Q₁Q₂* = (1_A⊗Q₂*)(Q₁⊗1_B)` as maps `H⊗B → A⊗H`.
pub fn check_exchange_identity(e: &QuantumBiElement, tol: Tolerance) -> EquationReport {
    let (aw, bw, u) = (e.left_q.word(), e.right_q.word(), Word::unit());
    let lhs = c(&e.q1, &adjoint(&e.q2));
    let start = identity(&e.space.concat(&bw));
    let rhs = w(&aw, &adjoint(&e.q2), &u, &w(&u, &e.q1, &bw, &start));
    EquationReport::new(lhs.dom().clone(), lhs.cod().clone(), residual(&lhs, &rhs), tol)
}

/// A process `P: H⊗S → T⊗H` from the Q-system `S` (source) to `T`
/// (target). The unit condition QF2 is required only when `unital` is set.
#[derive(Debug, Clone)]
pub struct QuantumFunction {
    source_q: QSystem,
    target_q: QSystem,
    space: Word,
    p: LinearMap,
    unital: bool,
    verified: bool,
}

impl QuantumFunction {
    pub fn new(
        source_q: QSystem,
        target_q: QSystem,
        space: Word,
        p: LinearMap,
        unital: bool,
    ) -> Result<Self> {
        let hs = space.concat(&source_q.word());
        let th = target_q.word().concat(&space);
        if p.dom() != &hs {
            return Err(wire_mismatch("quantum function domain", &hs, p.dom()));
        }
        if p.cod() != &th {
            return Err(wire_mismatch("quantum function codomain", &th, p.cod()));
        }
        Ok(Self {
            source_q,
            target_q,
            space,
            p,
            unital,
            verified: false,
        })
    }

    pub fn certify(mut self, tol: Tolerance) -> (Self, VerificationReport) {
        let report = verify_quantum_function(&self, tol);
        self.verified = report.passed();
        (self, report)
    }

    pub fn source_q(&self) -> &QSystem {
        &self.source_q
    }

    pub fn target_q(&self) -> &QSystem {
        &self.target_q
    }

    pub fn space(&self) -> &Word {
        &self.space
    }

    pub fn p(&self) -> &LinearMap {
        &self.p
    }

    pub fn is_unital(&self) -> bool {
        self.unital
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }
}

/// Checks, for `P: H⊗S → T⊗H`,
///
/// * QF1 `(m_T*⊗1)P = (1_T⊗P)(P⊗1_S)(1_H⊗m_S*)`,
/// * QF2 `(i_T*⊗1)P = 1_H⊗i_S*` (informational unless the function is unital),
/// * QF3 `P* = (ev_T⊗1⊗1)(1_T⊗P⊗1_S)(1_{T⊗H}⊗coev_S)`.
pub fn verify_quantum_function(f: &QuantumFunction, tol: Tolerance) -> VerificationReport {
    let (s, t) = (&f.source_q, &f.target_q);
    let (sw, hw, tw, u) = (s.word(), &f.space, t.word(), Word::unit());
    let p = &f.p;
    let mut r = VerificationReport::new(tol);

    let lhs = w(&u, &adjoint(t.mult()), hw, p);
    let split = w(hw, &adjoint(s.mult()), &u, &identity(&hw.concat(&sw)));
    let rhs = w(&tw, p, &u, &w(&u, p, &sw, &split));
    r.record("QF1", residual(&lhs, &rhs));

    let lhs = w(&u, &adjoint(t.unit()), hw, p);
    let rhs = tensor(&identity(hw), &adjoint(s.unit()));
    if f.unital {
        r.record("QF2", residual(&lhs, &rhs));
    } else {
        r.record_info("QF2", residual(&lhs, &rhs));
    }

    let ev_t = c(&adjoint(t.unit()), t.mult());
    let coev_s = c(&adjoint(s.mult()), s.unit());
    let rhs = bend_p(p, &ev_t, &coev_s, &tw, hw, &sw);
    r.record("QF3", residual(&adjoint(p), &rhs));
    r
}

/// `(ev_T⊗1⊗1)(1_T⊗P⊗1_S)(1_{T⊗H}⊗coev_S)` contracted index by index:
/// `out[(h', s₂), (t₁, h)] = Σ ev[t₁, t₂] P[(t₂, h'), (h, s₁)] coev[s₁, s₂]`.
fn bend_p(p: &LinearMap, ev: &LinearMap, coev: &LinearMap, tw: &Word, hw: &Word, sw: &Word) -> LinearMap {
    let (nt, nh, ns) = (tw.dim(), hw.dim(), sw.dim());
    let pm = p.matrix();
    // half[(t₁, h'), (h, s₁)] = Σ_t₂ ev[t₁, t₂] P[(t₂, h'), (h, s₁)]
    let mut half = nalgebra::DMatrix::<C64>::zeros(nt * nh, nh * ns);
    for t1 in 0..nt {
        for t2 in 0..nt {
            let e = ev.entry(0, t1 * nt + t2);
            if e == ZERO {
                continue;
            }
            for hp in 0..nh {
                for col in 0..nh * ns {
                    half[(t1 * nh + hp, col)] += e * pm[(t2 * nh + hp, col)];
                }
            }
        }
    }
    LinearMap::from_fn(tw.concat(hw), hw.concat(sw), |row, col| {
        let (hp, s2) = (row / ns, row % ns);
        let (t1, h) = (col / nh, col % nh);
        (0..ns)
            .map(|s1| half[(t1 * nh + hp, h * ns + s1)] * coev.entry(s1 * ns + s2, 0))
            .sum()
    })
    .expect("finite contraction")
}

fn ensure_verified(e: &QuantumBiElement, tol: Tolerance) -> Result<()> {
    if e.verified {
        return Ok(());
    }
    let report = verify_qbe(e, tol);
    if report.passed() {
        Ok(())
    } else {
        Err(failed("quantum bi-element", report))
    }
}

/// `P = Q₁Q₂*: H⊗B → A⊗H`, a non-unital quantum function from `B` to `A`.
/// QF1 and QF3 are checked on the result.
pub fn qbe_to_quantum_function(e: &QuantumBiElement, tol: Tolerance) -> Result<QuantumFunction> {
    ensure_verified(e, tol)?;
    let p = c(&e.q1, &adjoint(&e.q2));
    let f = QuantumFunction::new(e.right_q.clone(), e.left_q.clone(), e.space.clone(), p, false)?;
    let (f, report) = f.certify(tol);
    if !f.verified {
        return Err(failed("quantum function from bi-element", report));
    }
    Ok(f)
}

fn qbe_intertwiner_sides(
    f: &LinearMap,
    e: &QuantumBiElement,
    g: &QuantumBiElement,
) -> Result<[LinearMap; 2]> {
    let ia = identity(&e.left_q.word());
    let ib = identity(&e.right_q.word());
    let d1 = compose(&tensor(&ia, f), &e.q1)?.sub(&compose(&g.q1, f)?)?;
    let d2 = compose(&tensor(f, &ib), &e.q2)?.sub(&compose(&g.q2, f)?)?;
    Ok([d1, d2])
}

fn check_same_pair(e: &QuantumBiElement, g: &QuantumBiElement) -> Result<()> {
    if e.left_q != g.left_q || e.right_q != g.right_q {
        return Err(Error::PairMismatch(format!(
            "bi-elements over ({}, {}) and ({}, {})",
            e.left_q.space(),
            e.right_q.space(),
            g.left_q.space(),
            g.right_q.space()
        )));
    }
    Ok(())
}

/// Checks `(1_A⊗f)Q₁ᴱ = Q₁ᶠ f` (entry `1`) and `(f⊗1_B)Q₂ᴱ = Q₂ᶠ f`
/// (entry `2`) for `f: H → K`.
pub fn verify_qbe_intertwiner(
    f: &LinearMap,
    e: &QuantumBiElement,
    g: &QuantumBiElement,
    tol: Tolerance,
) -> Result<VerificationReport> {
    check_same_pair(e, g)?;
    if f.dom() != &e.space {
        return Err(wire_mismatch("intertwiner domain", &e.space, f.dom()));
    }
    if f.cod() != &g.space {
        return Err(wire_mismatch("intertwiner codomain", &g.space, f.cod()));
    }
    let [d1, d2] = qbe_intertwiner_sides(f, e, g)?;
    let norm = |m: &LinearMap| m.matrix().iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut r = VerificationReport::new(tol);
    r.record("1", norm(&d1));
    r.record("2", norm(&d2));
    Ok(r)
}

/// Orthonormal basis of the intertwiners `H → K`.
pub fn qbe_intertwiner_space(e: &QuantumBiElement, g: &QuantumBiElement) -> Result<Vec<LinearMap>> {
    check_same_pair(e, g)?;
    tensor::linear_solutions(&e.space, &g.space, |f| Ok(qbe_intertwiner_sides(f, e, g)?.to_vec()))
}

/// `(X, λ*, ρ*)` for a bimodule `(X, λ, ρ)`.
pub fn bimodule_to_qbe(m: &QSysBimodule, tol: Tolerance) -> Result<QuantumBiElement> {
    if !m.is_verified() {
        let report = verify_qsys_bimodule(m, tol);
        if !report.passed() {
            return Err(failed("Q-system bimodule", report));
        }
    }
    let e = QuantumBiElement::new(
        m.left().clone(),
        m.right().clone(),
        m.space().clone(),
        adjoint(m.lambda()),
        adjoint(m.rho()),
    )?;
    let (e, report) = e.certify(tol);
    if !e.verified {
        return Err(failed("bi-element of a bimodule", report));
    }
    Ok(e)
}

/// `(A, m*, m*)` over the pair `(A, A)`.
pub fn qbe_from_qsystem(a: &QSystem, tol: Tolerance) -> Result<QuantumBiElement> {
    if !a.is_verified() {
        let report = verify_qsystem(a, tol);
        if !report.passed() {
            return Err(failed("Q-system", report));
        }
    }
    let ms = adjoint(a.mult());
    let e = QuantumBiElement::new(a.clone(), a.clone(), a.word(), ms.clone(), ms)?;
    let (e, report) = e.certify(tol);
    if !e.verified {
        return Err(failed("self-dual bi-element", report));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::{
        function_algebra, group_algebra, matrix_algebra, qsys_intertwiner_space,
        verify_qsys_intertwiner,
    };
    use crate::tensor::{is_isometry, C64, ONE, ZERO};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn tight() -> Tolerance {
        Tolerance::new(1e-12).unwrap()
    }

    #[test]
    fn self_dual_triples_verify() {
        let a = function_algebra(2).unwrap();
        let e = qbe_from_qsystem(&a, tol()).unwrap();
        assert_eq!(verify_qbe(&e, tol()).max_residual(), 0.0);

        let one = qbe_from_qsystem(&function_algebra(1).unwrap(), tol()).unwrap();
        assert_eq!(one.q1().entry(0, 0), ONE);
        assert_eq!(one.q2().entry(0, 0), ONE);
        assert_eq!(verify_qbe(&one, tol()).max_residual(), 0.0);

        let e3 = qbe_from_qsystem(&function_algebra(3).unwrap(), tol()).unwrap();
        assert_eq!(verify_qbe(&e3, tol()).max_residual(), 0.0);
        let z2 = group_algebra(vec![vec![0, 1], vec![1, 0]], 0, vec![0, 1]).unwrap();
        assert!(verify_qbe(&qbe_from_qsystem(&z2, tol()).unwrap(), tight()).passed());
        assert!(verify_qbe(&qbe_from_qsystem(&matrix_algebra(2).unwrap(), tol()).unwrap(), tight()).passed());
    }

    #[test]
    fn scaled_q1_breaks_counit() {
        let a = function_algebra(2).unwrap();
        let e = qbe_from_qsystem(&a, tol()).unwrap();
        let bad = QuantumBiElement::new(
            a.clone(),
            a.clone(),
            a.word(),
            e.q1().scale(C64::new(2.0, 0.0)),
            e.q2().clone(),
        )
        .unwrap();
        let r = verify_qbe(&bad, tol());
        assert_eq!(r.residual("2.left"), 1.0);
        // Both sides of (3a) are linear in Q₁, so a rescaling cannot break it;
        // (1a) is quadratic against linear and does.
        assert_eq!(r.residual("3a"), 0.0);
        assert!(!r.entry("1a").unwrap().passed);
        assert!(r.entry("2.right").unwrap().passed);
    }

    #[test]
    fn quantum_elements_are_bi_elements_over_the_scalars() {
        let a = function_algebra(2).unwrap();
        let c1 = function_algebra(1).unwrap();
        let h = a.word();
        let q1 = adjoint(a.mult());
        let q2 = identity(&h).retype(h.clone(), h.concat(&c1.word())).unwrap();
        let e = QuantumBiElement::new(a.clone(), c1, h.clone(), q1.clone(), q2).unwrap();
        let full = verify_qbe(&e, tol());
        let elem = verify_quantum_element(&a, &h, &q1, tol()).unwrap();
        for name in ["1b", "1c", "2.right", "3b"] {
            assert_eq!(full.residual(name), 0.0, "{name}");
        }
        for name in ["1a", "2.left", "3a"] {
            assert_eq!(full.residual(name), elem.residual(name), "{name}");
        }
        let (e, _) = e.certify(tol());
        let f = qbe_to_quantum_function(&e, tol()).unwrap();
        assert_eq!(f.p().matrix(), q1.matrix());
    }

    #[test]
    fn frobenius_identities_and_isometries() {
        for a in [function_algebra(2).unwrap(), function_algebra(3).unwrap(), matrix_algebra(2).unwrap()] {
            let e = qbe_from_qsystem(&a, tol()).unwrap();
            assert!(check_frobenius_identities(&e, tight()).unwrap().passed());
            let iso = check_isometries(&e, tight());
            assert!(iso.passed(), "{iso}");
            assert!(check_exchange_identity(&e, tight()).passed);
        }
        let e = qbe_from_qsystem(&function_algebra(2).unwrap(), tol()).unwrap();
        assert_eq!(check_isometries(&e, tol()).max_residual(), 0.0);
        assert_eq!(check_exchange_identity(&e, tol()).residual, 0.0);
    }

    #[test]
    fn broken_triples_are_localized() {
        let a = function_algebra(2).unwrap();
        let h = a.word();
        let r2 = std::f64::consts::FRAC_1_SQRT_2;
        // Q₁(e_j) = u⊗e_j with u = (e_0+e_1)/√2 is not comultiplicative.
        let q1 = LinearMap::from_fn(h.clone(), a.word().concat(&h), |r, c| {
            if r % 2 == c {
                C64::new(r2, 0.0)
            } else {
                ZERO
            }
        })
        .unwrap();
        let e = QuantumBiElement::new(a.clone(), a.clone(), h.clone(), q1, adjoint(a.mult())).unwrap();
        let r = verify_qbe(&e, tol());
        assert!(!r.entry("1a").unwrap().passed);
        assert!(r.entry("1b").unwrap().passed);
        match check_frobenius_identities(&e, tol()) {
            Err(Error::VerificationFailed { report, .. }) => {
                assert!(!report.entry("left.1").unwrap().passed);
                assert!(report.entry("right.1").unwrap().passed);
                assert!(report.entry("right.2").unwrap().passed);
            }
            other => panic!("expected a localized failure, got {other:?}"),
        }

        // Q₂ = m*∘swap violates (1c) and the exchange identity.
        let swap = LinearMap::from_real_rows(h.clone(), h.clone(), &[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let q2 = compose(&adjoint(a.mult()), &swap).unwrap();
        let e = QuantumBiElement::new(a.clone(), a.clone(), h, adjoint(a.mult()), q2).unwrap();
        let r = verify_qbe(&e, tol());
        assert!(!r.entry("1c").unwrap().passed);
        assert!(r.entry("1a").unwrap().passed);
        assert!(!check_exchange_identity(&e, tol()).passed);
    }

    #[test]
    fn quantum_function_examples() {
        let c1 = function_algebra(1).unwrap();
        let h = Word::unit();
        let p = LinearMap::from_real_rows(c1.word(), c1.word(), &[&[1.0]]).unwrap();
        let f = QuantumFunction::new(c1.clone(), c1.clone(), h, p, true).unwrap();
        assert!(verify_quantum_function(&f, tol()).passed());

        let a = function_algebra(2).unwrap();
        let e = qbe_from_qsystem(&a, tol()).unwrap();
        let f = qbe_to_quantum_function(&e, tol()).unwrap();
        assert!(!f.is_unital());
        let mm = compose(&adjoint(a.mult()), a.mult()).unwrap();
        assert_eq!(f.p().matrix(), mm.matrix());
        for i in 0..2 {
            for j in 0..2 {
                for r in 0..4 {
                    let expect = if i == j && r == i * 2 + i { 1.0 } else { 0.0 };
                    assert_eq!(f.p().entry(r, i * 2 + j), C64::new(expect, 0.0));
                }
            }
        }
        let r = verify_quantum_function(&f, tol());
        assert!(r.passed());
        assert_eq!(r.residual("QF1"), 0.0);
        assert_eq!(r.residual("QF3"), 0.0);
        assert_eq!(r.residual("QF2"), 1.0);
        assert!(!r.entry("QF2").unwrap().passed);

        let scaled = QuantumFunction::new(
            a.clone(),
            a.clone(),
            a.word(),
            f.p().scale(C64::new(2.0, 0.0)),
            false,
        )
        .unwrap();
        assert!(!verify_quantum_function(&scaled, tol()).entry("QF1").unwrap().passed);

        let m2 = qbe_from_qsystem(&matrix_algebra(2).unwrap(), tol()).unwrap();
        let f = qbe_to_quantum_function(&m2, tol()).unwrap();
        let r = verify_quantum_function(&f, tight());
        assert!(r.entry("QF1").unwrap().passed && r.entry("QF3").unwrap().passed);
    }

    #[test]
    fn qbe_intertwiners_of_the_self_dual_triple() {
        let a = function_algebra(2).unwrap();
        let e = qbe_from_qsystem(&a, tol()).unwrap();
        let h = a.word();
        assert!(verify_qbe_intertwiner(&identity(&h), &e, &e, tol()).unwrap().passed());
        assert!(verify_qbe_intertwiner(&LinearMap::zero(h.clone(), h.clone()), &e, &e, tol()).unwrap().passed());
        let diag = LinearMap::from_real_rows(h.clone(), h.clone(), &[&[2.0, 0.0], &[0.0, -1.0]]).unwrap();
        assert!(verify_qbe_intertwiner(&diag, &e, &e, tol()).unwrap().passed());
        let swap = LinearMap::from_real_rows(h.clone(), h.clone(), &[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let r = verify_qbe_intertwiner(&swap, &e, &e, tol()).unwrap();
        assert!(!r.entry("1").unwrap().passed);

        let other = qbe_from_qsystem(&function_algebra(3).unwrap(), tol()).unwrap();
        assert!(matches!(
            verify_qbe_intertwiner(&identity(&h), &e, &other, tol()),
            Err(Error::PairMismatch(_))
        ));
        assert_eq!(qbe_intertwiner_space(&e, &e).unwrap().len(), 2);
    }

    #[test]
    fn bimodules_embed_as_bi_elements() {
        for a in [function_algebra(2).unwrap(), matrix_algebra(2).unwrap()] {
            let b = QSysBimodule::self_bimodule(&a);
            let e = bimodule_to_qbe(&b, tol()).unwrap();
            assert!(verify_qbe(&e, tight()).passed());
            for f in qsys_intertwiner_space(&b, &b).unwrap() {
                assert!(verify_qsys_intertwiner(&f, &b, &b, tol()).unwrap().passed());
                assert!(verify_qbe_intertwiner(&f, &e, &e, tol()).unwrap().passed());
            }
        }
        let a = function_algebra(2).unwrap();
        let e = bimodule_to_qbe(&QSysBimodule::self_bimodule(&a), tol()).unwrap();
        assert_eq!(e.q1().matrix(), adjoint(a.mult()).matrix());
        assert!(is_isometry(e.q1(), tol()));

        let bad = QSysBimodule::new(a.clone(), a.clone(), a.word(), a.mult().scale(C64::new(2.0, 0.0)), a.mult().clone())
            .unwrap();
        assert!(matches!(bimodule_to_qbe(&bad, tol()), Err(Error::VerificationFailed { .. })));
    }
}
