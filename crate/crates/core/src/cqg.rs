//! Finite quantum groups, unitary corepresentations, and unitary bimodules
//! with their intertwiners, direct sums, tensor products and idempotent
//! splitting.
//!
//! A finite-dimensional *-algebra is stored by structure constants in a fixed
//! basis `b_0..b_{n-1}`. Elements are coefficient vectors.

use nalgebra::DMatrix;

use crate::error::{wire_mismatch, Error, Result};
use crate::frobenius::{verify_qsystem, QSystem};
use crate::group::FiniteGroup;
use crate::linalg;
use crate::report::VerificationReport;
use crate::tensor::{
    self, adjoint, compose, identity, matrix_max_abs_diff, max_abs_diff, tensor, LinearMap, Space,
    Tolerance, Word, C64, ONE, ZERO,
};

/// A finite-dimensional unital *-algebra.
///
/// `structure[j][k][l]` is the coefficient of `b_l` in `b_j·b_k`; the
/// involution is `star(x) = S·conj(x)` with `S = involution`.
#[derive(Debug, Clone, PartialEq)]
pub struct FDStarAlgebra {
    space: Space,
    structure: Vec<Vec<Vec<C64>>>,
    unit: Vec<C64>,
    involution: DMatrix<C64>,
}

impl FDStarAlgebra {
    pub fn new(
        space: Space,
        structure: Vec<Vec<Vec<C64>>>,
        unit: Vec<C64>,
        involution: DMatrix<C64>,
    ) -> Result<Self> {
        let n = space.dim();
        let cube_ok = structure.len() == n
            && structure
                .iter()
                .all(|p| p.len() == n && p.iter().all(|q| q.len() == n));
        if !cube_ok {
            return Err(Error::Shape(format!(
                "structure constants must be {n}×{n}×{n}"
            )));
        }
        if unit.len() != n {
            return Err(Error::Shape(format!("unit vector must have length {n}")));
        }
        if involution.nrows() != n || involution.ncols() != n {
            return Err(Error::Shape(format!("involution must be {n}×{n}")));
        }
        let finite = structure.iter().flatten().flatten().chain(&unit).chain(involution.iter());
        if finite.into_iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Shape("algebra data contains non-finite entries".into()));
        }
        Ok(Self {
            space,
            structure,
            unit,
            involution,
        })
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

    pub fn structure(&self) -> &[Vec<Vec<C64>>] {
        &self.structure
    }

    pub fn unit_vector(&self) -> &[C64] {
        &self.unit
    }

    pub fn involution(&self) -> &DMatrix<C64> {
        &self.involution
    }

    pub fn basis(&self, j: usize) -> Vec<C64> {
        let mut v = vec![ZERO; self.dim()];
        v[j] = ONE;
        v
    }

    pub fn product(&self, x: &[C64], y: &[C64]) -> Vec<C64> {
        let n = self.dim();
        let mut out = vec![ZERO; n];
        for (j, &xj) in x.iter().enumerate() {
            if xj == ZERO {
                continue;
            }
            for (k, &yk) in y.iter().enumerate() {
                if yk == ZERO {
                    continue;
                }
                let w = xj * yk;
                for (l, o) in out.iter_mut().enumerate() {
                    *o += w * self.structure[j][k][l];
                }
            }
        }
        out
    }

    pub fn star(&self, x: &[C64]) -> Vec<C64> {
        let n = self.dim();
        (0..n)
            .map(|l| (0..n).map(|j| self.involution[(l, j)] * x[j].conj()).sum())
            .collect()
    }

    /// Multiplication as a linear map `A⊗A → A`.
    pub fn mult_map(&self) -> LinearMap {
        let n = self.dim();
        let a = self.word();
        LinearMap::from_fn(a.concat(&a), a, |l, c| self.structure[c / n][c % n][l])
            .expect("structure constants are finite")
    }

    /// The unit as a linear map `C → A`.
    pub fn unit_map(&self) -> LinearMap {
        LinearMap::ket(self.word(), &self.unit).expect("unit vector has length dim")
    }

    /// Functions on a finite set of `n` points with pointwise product and
    /// complex conjugation.
    pub fn functions(space: Space) -> Self {
        let n = space.dim();
        let structure = (0..n)
            .map(|j| {
                (0..n)
                    .map(|k| (0..n).map(|l| if j == k && k == l { ONE } else { ZERO }).collect())
                    .collect()
            })
            .collect();
        Self::new(space, structure, vec![ONE; n], DMatrix::identity(n, n))
            .expect("function algebra data is well-shaped")
    }
}

fn vec_diff(x: &[C64], y: &[C64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
}

/// Checks associativity, unitality, `star∘star = id` and
/// `star(xy) = star(y) star(x)` on basis elements. Positivity is not checked.
pub fn verify_star_algebra(alg: &FDStarAlgebra, tol: Tolerance) -> VerificationReport {
    let n = alg.dim();
    let basis: Vec<Vec<C64>> = (0..n).map(|j| alg.basis(j)).collect();
    let prods: Vec<Vec<Vec<C64>>> = (0..n)
        .map(|j| (0..n).map(|k| alg.product(&basis[j], &basis[k])).collect())
        .collect();
    let stars: Vec<Vec<C64>> = basis.iter().map(|b| alg.star(b)).collect();

    let mut assoc = 0f64;
    for j in 0..n {
        for k in 0..n {
            for l in 0..n {
                let left = alg.product(&prods[j][k], &basis[l]);
                let right = alg.product(&basis[j], &prods[k][l]);
                assoc = assoc.max(vec_diff(&left, &right));
            }
        }
    }
    let mut unit_l = 0f64;
    let mut unit_r = 0f64;
    let mut invol = 0f64;
    let mut anti = 0f64;
    for j in 0..n {
        unit_l = unit_l.max(vec_diff(&alg.product(alg.unit_vector(), &basis[j]), &basis[j]));
        unit_r = unit_r.max(vec_diff(&alg.product(&basis[j], alg.unit_vector()), &basis[j]));
        invol = invol.max(vec_diff(&alg.star(&stars[j]), &basis[j]));
        for k in 0..n {
            let lhs = alg.star(&prods[j][k]);
            let rhs = alg.product(&stars[k], &stars[j]);
            anti = anti.max(vec_diff(&lhs, &rhs));
        }
    }
    let mut r = VerificationReport::new(tol);
    r.record("associativity", assoc);
    r.record("unit.left", unit_l);
    r.record("unit.right", unit_r);
    r.record("star.involutive", invol);
    r.record("star.antimultiplicative", anti);
    r
}

/// A finite quantum group: a *-algebra with comultiplication `Δ: A → A⊗A`.
#[derive(Debug, Clone)]
pub struct FiniteQuantumGroup {
    algebra: FDStarAlgebra,
    comult: LinearMap,
    verified: bool,
}

impl PartialEq for FiniteQuantumGroup {
    fn eq(&self, other: &Self) -> bool {
        self.algebra == other.algebra && self.comult == other.comult
    }
}

impl FiniteQuantumGroup {
    pub fn new(algebra: FDStarAlgebra, comult: LinearMap) -> Result<Self> {
        let a = algebra.word();
        if comult.dom() != &a {
            return Err(wire_mismatch("comultiplication domain", &a, comult.dom()));
        }
        let aa = a.concat(&a);
        if comult.cod() != &aa {
            return Err(wire_mismatch("comultiplication codomain", &aa, comult.cod()));
        }
        Ok(Self {
            algebra,
            comult,
            verified: false,
        })
    }

    pub fn certify(mut self, tol: Tolerance) -> (Self, VerificationReport) {
        let mut report = verify_star_algebra(&self.algebra, tol);
        report.merge("", verify_cqg(&self, tol));
        self.verified = report.passed();
        (self, report)
    }

    /// Functions on a finite group, `Δδ_g = Σ_{hk=g} δ_h⊗δ_k`. The space is
    /// named `C(<name>)`.
    pub fn function_algebra(group: &FiniteGroup, name: &str) -> Result<Self> {
        let n = group.order();
        let space = Space::new(format!("C({name})"), n)?;
        let algebra = FDStarAlgebra::functions(space);
        let a = algebra.word();
        let comult = LinearMap::from_fn(a.clone(), a.concat(&a), |r, g| {
            if group.mul(r / n, r % n) == g {
                ONE
            } else {
                ZERO
            }
        })?;
        Ok(certify_canonical(Self::new(algebra, comult)?))
    }

    /// The group algebra with `star(g) = g⁻¹` and `Δ(g) = g⊗g`. The space is
    /// named `C[<name>]`.
    pub fn group_algebra(group: &FiniteGroup, name: &str) -> Result<Self> {
        let n = group.order();
        let space = Space::new(format!("C[{name}]"), n)?;
        let structure = (0..n)
            .map(|j| {
                (0..n)
                    .map(|k| {
                        let jk = group.mul(j, k);
                        (0..n).map(|l| if l == jk { ONE } else { ZERO }).collect()
                    })
                    .collect()
            })
            .collect();
        let mut unit = vec![ZERO; n];
        unit[group.unit()] = ONE;
        let involution =
            DMatrix::from_fn(n, n, |l, j| if l == group.inv(j) { ONE } else { ZERO });
        let algebra = FDStarAlgebra::new(space, structure, unit, involution)?;
        let a = algebra.word();
        let comult = LinearMap::from_fn(a.clone(), a.concat(&a), |r, g| {
            if r == g * n + g {
                ONE
            } else {
                ZERO
            }
        })?;
        Ok(certify_canonical(Self::new(algebra, comult)?))
    }

    /// Looks up `Z<n>`/`S<k>` and builds its function algebra.
    pub fn named_function_algebra(name: &str) -> Result<Self> {
        Self::function_algebra(&FiniteGroup::named(name)?, name)
    }

    pub fn algebra(&self) -> &FDStarAlgebra {
        &self.algebra
    }

    pub fn comult(&self) -> &LinearMap {
        &self.comult
    }

    pub fn word(&self) -> Word {
        self.algebra.word()
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }
}

fn certify_canonical(g: FiniteQuantumGroup) -> FiniteQuantumGroup {
    g.certify(Tolerance::new(1e-10).expect("valid")).0
}

/// Function algebra of the group given by a multiplication table.
pub fn function_algebra_of_group(
    mult_table: Vec<Vec<usize>>,
    unit_index: usize,
    inverse_table: Vec<usize>,
) -> Result<FiniteQuantumGroup> {
    let g = FiniteGroup::new(mult_table, unit_index, inverse_table)?;
    FiniteQuantumGroup::function_algebra(&g, &format!("G{}", g.order()))
}

/// Group algebra of the group given by a multiplication table.
pub fn group_algebra_qg(
    mult_table: Vec<Vec<usize>>,
    unit_index: usize,
    inverse_table: Vec<usize>,
) -> Result<FiniteQuantumGroup> {
    let g = FiniteGroup::new(mult_table, unit_index, inverse_table)?;
    FiniteQuantumGroup::group_algebra(&g, &format!("G{}", g.order()))
}

/// Multiplication of `A⊗A` as a map `(A⊗A)⊗(A⊗A) → A⊗A`.
fn pair_mult(alg: &FDStarAlgebra) -> LinearMap {
    let n = alg.dim();
    let a = alg.word();
    let aa = a.concat(&a);
    let c = alg.structure();
    // (a⊗b)⊗(c⊗d) ↦ ac⊗bd
    LinearMap::from_fn(aa.concat(&aa), aa, |r, col| {
        let (x, y) = (col / (n * n), col % (n * n));
        let (a0, b0, c0, d0) = (x / n, x % n, y / n, y % n);
        c[a0][c0][r / n] * c[b0][d0][r % n]
    })
    .expect("finite structure constants")
}

/// Checks coassociativity, that `Δ` is a unital *-homomorphism, and the
/// cancellation (density) condition as a full-rank test. The cancellation
/// residuals are rank deficits `n² − rank`.
pub fn verify_cqg(g: &FiniteQuantumGroup, tol: Tolerance) -> VerificationReport {
    let alg = &g.algebra;
    let n = alg.dim();
    let a = alg.word();
    let id = identity(&a);
    let d = &g.comult;
    let mut r = VerificationReport::new(tol);

    let lhs = compose(&tensor(d, &id), d).expect("coassociativity wires");
    let rhs = compose(&tensor(&id, d), d).expect("coassociativity wires");
    r.record("coassociativity", max_abs_diff(&lhs, &rhs).expect("same signature"));

    let unit = alg.unit_map();
    let d1 = compose(d, &unit).expect("unit wires");
    r.record(
        "homomorphism.unital",
        max_abs_diff(&d1, &tensor(&unit, &unit)).expect("same signature"),
    );

    let pm = pair_mult(alg);
    let lhs = compose(d, &alg.mult_map()).expect("multiplicativity wires");
    let rhs = compose(&pm, &tensor(d, d)).expect("multiplicativity wires");
    r.record(
        "homomorphism.multiplicative",
        max_abs_diff(&lhs, &rhs).expect("same signature"),
    );

    // Δ(S conj x) = (S⊗S) conj(Δ x) for all x, i.e. D·S = (S⊗S)·conj(D).
    let s = alg.involution();
    let ss = s.kronecker(s);
    let lhs = d.matrix() * s;
    let rhs = ss * d.matrix().map(|z| z.conj());
    r.record("homomorphism.star", matrix_max_abs_diff(&lhs, &rhs));

    let full = n * n;
    let left = compose(&pm, &tensor(&tensor(&id, &unit), d)).expect("cancellation wires");
    let right = compose(&pm, &tensor(&tensor(&unit, &id), d)).expect("cancellation wires");
    for (name, m) in [("cancellation.left", left), ("cancellation.right", right)] {
        let deficit = full - linalg::rank(m.matrix(), tol.eps());
        r.record_with(name, deficit as f64, deficit == 0);
    }
    r
}

/// The algebra-valued inner product `Σ_v star(a_v^p) a_v^q` for the family of
/// elements `elems[p][v] = a_v^p`, compared against `δ_pq · 1`.
fn inner_product_residual(alg: &FDStarAlgebra, elems: &[Vec<Vec<C64>>]) -> f64 {
    let stars: Vec<Vec<Vec<C64>>> = elems
        .iter()
        .map(|fam| fam.iter().map(|x| alg.star(x)).collect())
        .collect();
    let n = alg.dim();
    let mut worst = 0f64;
    for (p, sp) in stars.iter().enumerate() {
        for (q, eq) in elems.iter().enumerate() {
            let mut acc = vec![ZERO; n];
            for (x, y) in sp.iter().zip(eq) {
                for (o, z) in acc.iter_mut().zip(alg.product(x, y)) {
                    *o += z;
                }
            }
            let target: Vec<C64> = if p == q {
                alg.unit_vector().to_vec()
            } else {
                vec![ZERO; n]
            };
            worst = worst.max(vec_diff(&acc, &target));
        }
    }
    worst
}

/// Coefficient elements of a left coaction `V → A⊗V`: `out[p][v]` is the
/// algebra element paired with `e_v` in the image of `e_p`.
fn left_legs(alpha: &LinearMap, n: usize, d: usize) -> Vec<Vec<Vec<C64>>> {
    (0..d)
        .map(|p| {
            (0..d)
                .map(|v| (0..n).map(|a| alpha.entry(a * d + v, p)).collect())
                .collect()
        })
        .collect()
}

/// Coefficient elements of a right coaction `V → V⊗A`.
fn right_legs(alpha: &LinearMap, n: usize, d: usize) -> Vec<Vec<Vec<C64>>> {
    (0..d)
        .map(|p| {
            (0..d)
                .map(|v| (0..n).map(|a| alpha.entry(v * n + a, p)).collect())
                .collect()
        })
        .collect()
}

/// A unitary corepresentation `U = Σ e_jk ⊗ u_jk` on a space of dimension
/// `d`; `entries[j][k]` is the coefficient vector of `u_jk`.
#[derive(Debug, Clone)]
pub struct Corepresentation {
    group: FiniteQuantumGroup,
    space: Word,
    entries: Vec<Vec<Vec<C64>>>,
}

impl Corepresentation {
    pub fn new(group: FiniteQuantumGroup, space: Word, entries: Vec<Vec<Vec<C64>>>) -> Result<Self> {
        let d = space.dim();
        let n = group.dim();
        let ok = entries.len() == d
            && entries
                .iter()
                .all(|row| row.len() == d && row.iter().all(|u| u.len() == n));
        if !ok {
            return Err(Error::Shape(format!(
                "corepresentation entries must be {d}×{d} vectors of length {n}"
            )));
        }
        Ok(Self {
            group,
            space,
            entries,
        })
    }

    /// The corepresentation of a function algebra `C(G)` induced by a
    /// unitary representation: `u_jk = Σ_g π(g)_jk δ_g`.
    pub fn from_group_rep(
        group: FiniteQuantumGroup,
        space: Word,
        rep: &[DMatrix<C64>],
    ) -> Result<Self> {
        let d = space.dim();
        if rep.len() != group.dim() || rep.iter().any(|m| m.nrows() != d || m.ncols() != d) {
            return Err(Error::Shape(format!(
                "representation needs {} matrices of size {d}×{d}",
                group.dim()
            )));
        }
        let entries = (0..d)
            .map(|j| (0..d).map(|k| rep.iter().map(|m| m[(j, k)]).collect()).collect())
            .collect();
        Self::new(group, space, entries)
    }

    pub fn group(&self) -> &FiniteQuantumGroup {
        &self.group
    }

    pub fn space(&self) -> &Word {
        &self.space
    }

    pub fn entries(&self) -> &[Vec<Vec<C64>>] {
        &self.entries
    }

    pub fn entry(&self, j: usize, k: usize) -> &[C64] {
        &self.entries[j][k]
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }
}

/// Largest entrywise difference between the coefficient arrays of two
/// corepresentations of equal shape.
pub fn corep_max_abs_diff(u: &Corepresentation, v: &Corepresentation) -> Result<f64> {
    if u.dim() != v.dim() || u.group.dim() != v.group.dim() {
        return Err(Error::Shape("corepresentations differ in shape".into()));
    }
    let mut worst = 0f64;
    for (ru, rv) in u.entries.iter().zip(&v.entries) {
        for (x, y) in ru.iter().zip(rv) {
            worst = worst.max(vec_diff(x, y));
        }
    }
    Ok(worst)
}

/// Checks `Δ(u_jk) = Σ_l u_jl ⊗ u_lk` and unitarity in both orders.
pub fn verify_corep(u: &Corepresentation, tol: Tolerance) -> VerificationReport {
    let alg = u.group.algebra();
    let n = alg.dim();
    let d = u.dim();
    let delta = u.group.comult();
    let mut corep = 0f64;
    let mut unit_l = 0f64;
    let mut unit_r = 0f64;
    for j in 0..d {
        for k in 0..d {
            let lhs = delta.apply(&u.entries[j][k]).expect("coefficient length");
            let mut rhs = vec![ZERO; n * n];
            let mut ul = vec![ZERO; n];
            let mut ur = vec![ZERO; n];
            for l in 0..d {
                let (x, y) = (&u.entries[j][l], &u.entries[l][k]);
                for a in 0..n {
                    for b in 0..n {
                        rhs[a * n + b] += x[a] * y[b];
                    }
                }
                let p = alg.product(&alg.star(&u.entries[l][j]), &u.entries[l][k]);
                let q = alg.product(&u.entries[j][l], &alg.star(&u.entries[k][l]));
                for a in 0..n {
                    ul[a] += p[a];
                    ur[a] += q[a];
                }
            }
            corep = corep.max(vec_diff(&lhs, &rhs));
            let target: Vec<C64> = if j == k {
                alg.unit_vector().to_vec()
            } else {
                vec![ZERO; n]
            };
            unit_l = unit_l.max(vec_diff(&ul, &target));
            unit_r = unit_r.max(vec_diff(&ur, &target));
        }
    }
    let mut r = VerificationReport::new(tol);
    r.record("corep", corep);
    r.record("unitary.left", unit_l);
    r.record("unitary.right", unit_r);
    r
}

/// Which tensor leg carries the quantum-group algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Checks a one-sided coaction: the coaction identity and the algebra-valued
/// inner-product condition.
pub fn verify_module(
    alpha: &LinearMap,
    group: &FiniteQuantumGroup,
    side: Side,
    tol: Tolerance,
) -> Result<VerificationReport> {
    let v = alpha.dom().clone();
    check_coaction_wires(alpha, group, &v, side)?;
    let mut r = VerificationReport::new(tol);
    let (res, legs) = match side {
        Side::Left => (left_coaction_residual(alpha, group)?, left_legs(alpha, group.dim(), v.dim())),
        Side::Right => (
            right_coaction_residual(alpha, group)?,
            right_legs(alpha, group.dim(), v.dim()),
        ),
    };
    r.record("coaction", res);
    r.record("inner_product", inner_product_residual(group.algebra(), &legs));
    Ok(r)
}

fn check_coaction_wires(
    alpha: &LinearMap,
    group: &FiniteQuantumGroup,
    v: &Word,
    side: Side,
) -> Result<()> {
    let expect = match side {
        Side::Left => group.word().concat(v),
        Side::Right => v.concat(&group.word()),
    };
    if alpha.dom() != v {
        return Err(wire_mismatch("coaction domain", v, alpha.dom()));
    }
    if alpha.cod() != &expect {
        return Err(wire_mismatch("coaction codomain", &expect, alpha.cod()));
    }
    Ok(())
}

fn left_coaction_residual(alpha: &LinearMap, g: &FiniteQuantumGroup) -> Result<f64> {
    let idv = identity(alpha.dom());
    let ida = identity(&g.word());
    let lhs = compose(&tensor(g.comult(), &idv), alpha)?;
    let rhs = compose(&tensor(&ida, alpha), alpha)?;
    max_abs_diff(&lhs, &rhs)
}

fn right_coaction_residual(alpha: &LinearMap, g: &FiniteQuantumGroup) -> Result<f64> {
    let idv = identity(alpha.dom());
    let ida = identity(&g.word());
    let lhs = compose(&tensor(&idv, g.comult()), alpha)?;
    let rhs = compose(&tensor(alpha, &ida), alpha)?;
    max_abs_diff(&lhs, &rhs)
}

/// Right coaction of a corepresentation: `α(ξ_k) = Σ_j ξ_j ⊗ u_jk`.
pub fn corep_to_module(u: &Corepresentation, tol: Tolerance) -> Result<LinearMap> {
    let report = verify_corep(u, tol);
    if !report.passed() {
        return Err(Error::VerificationFailed {
            what: "corepresentation".into(),
            report: Box::new(report),
        });
    }
    Ok(corep_to_module_unchecked(u))
}

fn corep_to_module_unchecked(u: &Corepresentation) -> LinearMap {
    let n = u.group.dim();
    let v = u.space.clone();
    LinearMap::from_fn(v.clone(), v.concat(&u.group.word()), |r, k| {
        u.entries[r / n][k][r % n]
    })
    .expect("coefficients are finite")
}

/// Inverse of [`corep_to_module`]: reads `u_jk` off a right coaction.
pub fn module_to_corep(
    alpha: &LinearMap,
    group: &FiniteQuantumGroup,
    tol: Tolerance,
) -> Result<Corepresentation> {
    let report = verify_module(alpha, group, Side::Right, tol)?;
    if !report.passed() {
        return Err(Error::VerificationFailed {
            what: "right coaction".into(),
            report: Box::new(report),
        });
    }
    let n = group.dim();
    let d = alpha.dom().dim();
    let entries = (0..d)
        .map(|j| {
            (0..d)
                .map(|k| (0..n).map(|a| alpha.entry(j * n + a, k)).collect())
                .collect()
        })
        .collect();
    Corepresentation::new(group.clone(), alpha.dom().clone(), entries)
}

/// Left coaction of a corepresentation, mirroring the right-handed
/// convention: `α(ξ_k) = Σ_j u_kj ⊗ ξ_j`. With this placement the left
/// coaction identity is again `Δ(u_jk) = Σ_l u_jl ⊗ u_lk`.
pub fn corep_to_left_module(u: &Corepresentation, tol: Tolerance) -> Result<LinearMap> {
    let report = verify_corep(u, tol);
    if !report.passed() {
        return Err(Error::VerificationFailed {
            what: "corepresentation".into(),
            report: Box::new(report),
        });
    }
    let d = u.dim();
    let v = u.space.clone();
    Ok(
        LinearMap::from_fn(v.clone(), u.group.word().concat(&v), |r, k| {
            u.entries[k][r % d][r / d]
        })
        .expect("coefficients are finite"),
    )
}

/// Inverse of [`corep_to_left_module`].
pub fn left_module_to_corep(
    alpha: &LinearMap,
    group: &FiniteQuantumGroup,
    tol: Tolerance,
) -> Result<Corepresentation> {
    let report = verify_module(alpha, group, Side::Left, tol)?;
    if !report.passed() {
        return Err(Error::VerificationFailed {
            what: "left coaction".into(),
            report: Box::new(report),
        });
    }
    let n = group.dim();
    let d = alpha.dom().dim();
    let entries = (0..d)
        .map(|k| {
            (0..d)
                .map(|j| (0..n).map(|a| alpha.entry(a * d + j, k)).collect())
                .collect()
        })
        .collect();
    Corepresentation::new(group.clone(), alpha.dom().clone(), entries)
}

/// `ξ ↦ 1⊗ξ` (left) or `ξ ↦ ξ⊗1` (right).
pub fn trivial_coaction(v: &Word, group: &FiniteQuantumGroup, side: Side) -> LinearMap {
    let unit = group.algebra().unit_map();
    match side {
        Side::Left => tensor(&unit, &identity(v)),
        Side::Right => tensor(&identity(v), &unit),
    }
}

/// A unitary `G`–`H` bimodule: a space with a left coaction of `G` and a
/// right coaction of `H`.
#[derive(Debug, Clone)]
pub struct UnitaryBimodule {
    left_group: FiniteQuantumGroup,
    right_group: FiniteQuantumGroup,
    space: Word,
    left_coaction: LinearMap,
    right_coaction: LinearMap,
    verified: bool,
}

impl UnitaryBimodule {
    pub fn new(
        left_group: FiniteQuantumGroup,
        right_group: FiniteQuantumGroup,
        space: Word,
        left_coaction: LinearMap,
        right_coaction: LinearMap,
    ) -> Result<Self> {
        check_coaction_wires(&left_coaction, &left_group, &space, Side::Left)?;
        check_coaction_wires(&right_coaction, &right_group, &space, Side::Right)?;
        Ok(Self {
            left_group,
            right_group,
            space,
            left_coaction,
            right_coaction,
            verified: false,
        })
    }

    /// Both coactions trivial.
    pub fn trivial(left: &FiniteQuantumGroup, right: &FiniteQuantumGroup, space: Word) -> Self {
        let l = trivial_coaction(&space, left, Side::Left);
        let r = trivial_coaction(&space, right, Side::Right);
        let mut b = Self::new(left.clone(), right.clone(), space, l, r)
            .expect("trivial coactions are well-typed");
        b.verified = true;
        b
    }

    /// The unit 1-cell at `G`: the empty word (`C`) with trivial coactions.
    pub fn unit(group: &FiniteQuantumGroup) -> Self {
        Self::trivial(group, group, Word::unit())
    }

    pub fn certify(mut self, tol: Tolerance) -> (Self, VerificationReport) {
        let report = verify_bimodule(&self, tol);
        self.verified = report.passed();
        (self, report)
    }

    /// Transports the coactions along a unitary `w: V → V'`.
    pub fn conjugate(&self, w: &LinearMap) -> Result<Self> {
        if w.dom() != &self.space {
            return Err(wire_mismatch("conjugating unitary", &self.space, w.dom()));
        }
        let ws = adjoint(w);
        let l = tensor::chain(&[&ws, &self.left_coaction, &tensor(&identity(&self.left_group.word()), w)])?;
        let r = tensor::chain(&[&ws, &self.right_coaction, &tensor(w, &identity(&self.right_group.word()))])?;
        Self::new(
            self.left_group.clone(),
            self.right_group.clone(),
            w.cod().clone(),
            l,
            r,
        )
    }

    pub fn left_group(&self) -> &FiniteQuantumGroup {
        &self.left_group
    }

    pub fn right_group(&self) -> &FiniteQuantumGroup {
        &self.right_group
    }

    pub fn space(&self) -> &Word {
        &self.space
    }

    pub fn left_coaction(&self) -> &LinearMap {
        &self.left_coaction
    }

    pub fn right_coaction(&self) -> &LinearMap {
        &self.right_coaction
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }
}

/// Checks the left and right coaction identities, their compatibility
/// `(1⊗α_R)α_L = (α_L⊗1)α_R`, and both inner-product conditions.
pub fn verify_bimodule(v: &UnitaryBimodule, tol: Tolerance) -> VerificationReport {
    let (l, r) = (&v.left_coaction, &v.right_coaction);
    let (g, h) = (&v.left_group, &v.right_group);
    let d = v.space.dim();
    let mut rep = VerificationReport::new(tol);
    rep.record("left_coaction", left_coaction_residual(l, g).expect("checked wires"));
    rep.record("right_coaction", right_coaction_residual(r, h).expect("checked wires"));
    let lhs = compose(&tensor(&identity(&g.word()), r), l).expect("checked wires");
    let rhs = compose(&tensor(l, &identity(&h.word())), r).expect("checked wires");
    rep.record("compatibility", max_abs_diff(&lhs, &rhs).expect("same signature"));
    rep.record(
        "inner_product.left",
        inner_product_residual(g.algebra(), &left_legs(l, g.dim(), d)),
    );
    rep.record(
        "inner_product.right",
        inner_product_residual(h.algebra(), &right_legs(r, h.dim(), d)),
    );
    rep
}

fn group_mismatch(what: &str) -> Error {
    Error::GroupMismatch(what.to_string())
}

/// `V ⊕ W` on a fresh space `(V⊕W)`, with coactions
/// `(1⊗u)α_V u* + (1⊗v)α_W v*` for the two orthogonal inclusions.
pub fn direct_sum_bimodule(v: &UnitaryBimodule, w: &UnitaryBimodule) -> Result<UnitaryBimodule> {
    if v.left_group != w.left_group || v.right_group != w.right_group {
        return Err(group_mismatch("direct sum summands have different quantum groups"));
    }
    let (dv, dw) = (v.space.dim(), w.space.dim());
    let sum = Word::from(Space::new(format!("({}⊕{})", v.space, w.space), dv + dw)?);
    let u = LinearMap::from_fn(v.space.clone(), sum.clone(), |r, c| if r == c { ONE } else { ZERO })?;
    let x = LinearMap::from_fn(w.space.clone(), sum.clone(), |r, c| {
        if r == dv + c {
            ONE
        } else {
            ZERO
        }
    })?;
    let ig = identity(&v.left_group.word());
    let ih = identity(&v.right_group.word());
    let left = tensor::chain(&[&adjoint(&u), &v.left_coaction, &tensor(&ig, &u)])?
        .add(&tensor::chain(&[&adjoint(&x), &w.left_coaction, &tensor(&ig, &x)])?)?;
    let right = tensor::chain(&[&adjoint(&u), &v.right_coaction, &tensor(&u, &ih)])?
        .add(&tensor::chain(&[&adjoint(&x), &w.right_coaction, &tensor(&x, &ih)])?)?;
    let mut out = UnitaryBimodule::new(v.left_group.clone(), v.right_group.clone(), sum, left, right)?;
    out.verified = v.verified && w.verified;
    Ok(out)
}

/// `V ⊗ W` for a `G`–`H` bimodule `V` and an `H`–`K` bimodule `W`, with
/// coactions `α_V ⊗ 1_W` and `1_V ⊗ α_W`.
pub fn tensor_bimodule(v: &UnitaryBimodule, w: &UnitaryBimodule) -> Result<UnitaryBimodule> {
    if v.right_group != w.left_group {
        return Err(group_mismatch("middle quantum groups differ"));
    }
    let space = v.space.concat(&w.space);
    let left = tensor(&v.left_coaction, &identity(&w.space));
    let right = tensor(&identity(&v.space), &w.right_coaction);
    let mut out = UnitaryBimodule::new(v.left_group.clone(), w.right_group.clone(), space, left, right)?;
    out.verified = v.verified && w.verified;
    Ok(out)
}

fn check_intertwiner_wires(t: &LinearMap, v: &UnitaryBimodule, w: &UnitaryBimodule) -> Result<()> {
    if v.left_group != w.left_group || v.right_group != w.right_group {
        return Err(group_mismatch("intertwiner between bimodules over different quantum groups"));
    }
    if t.dom() != &v.space {
        return Err(wire_mismatch("intertwiner domain", &v.space, t.dom()));
    }
    if t.cod() != &w.space {
        return Err(wire_mismatch("intertwiner codomain", &w.space, t.cod()));
    }
    Ok(())
}

fn intertwiner_defects(t: &LinearMap, v: &UnitaryBimodule, w: &UnitaryBimodule) -> Result<[LinearMap; 2]> {
    let ig = identity(&v.left_group.word());
    let ih = identity(&v.right_group.word());
    let l = compose(&tensor(&ig, t), &v.left_coaction)?.sub(&compose(&w.left_coaction, t)?)?;
    let r = compose(&tensor(t, &ih), &v.right_coaction)?.sub(&compose(&w.right_coaction, t)?)?;
    Ok([l, r])
}

/// Checks `(1⊗T)α_V = α_W T` (left) and `(T⊗1)α_V = α_W T` (right).
pub fn verify_intertwiner(
    t: &LinearMap,
    v: &UnitaryBimodule,
    w: &UnitaryBimodule,
    tol: Tolerance,
) -> Result<VerificationReport> {
    check_intertwiner_wires(t, v, w)?;
    let [l, r] = intertwiner_defects(t, v, w)?;
    let mut rep = VerificationReport::new(tol);
    rep.record("left", l.matrix().iter().map(|z| z.norm()).fold(0.0, f64::max));
    rep.record("right", r.matrix().iter().map(|z| z.norm()).fold(0.0, f64::max));
    Ok(rep)
}

/// Orthonormal basis of the intertwiners `V → W`.
pub fn intertwiner_space(v: &UnitaryBimodule, w: &UnitaryBimodule) -> Result<Vec<LinearMap>> {
    if v.left_group != w.left_group || v.right_group != w.right_group {
        return Err(group_mismatch("intertwiner between bimodules over different quantum groups"));
    }
    tensor::linear_solutions(&v.space, &w.space, |t| {
        Ok(intertwiner_defects(t, v, w)?.to_vec())
    })
}

/// `S ∘ T` for intertwiners `T: U → V` and `S: V → W`, with the report of
/// the composite as an intertwiner `U → W`.
pub fn compose_intertwiners(
    s: &LinearMap,
    t: &LinearMap,
    u: &UnitaryBimodule,
    w: &UnitaryBimodule,
    tol: Tolerance,
) -> Result<(LinearMap, VerificationReport)> {
    let st = compose(s, t)?;
    let report = verify_intertwiner(&st, u, w, tol)?;
    Ok((st, report))
}

/// `T ⊗ S` for intertwiners `T: V₁ → V₂` (`G`–`H`) and `S: W₁ → W₂`
/// (`H`–`K`), with the report as an intertwiner `V₁⊗W₁ → V₂⊗W₂`.
pub fn tensor_intertwiners(
    t: &LinearMap,
    (v1, v2): (&UnitaryBimodule, &UnitaryBimodule),
    s: &LinearMap,
    (w1, w2): (&UnitaryBimodule, &UnitaryBimodule),
    tol: Tolerance,
) -> Result<(LinearMap, VerificationReport)> {
    let src = tensor_bimodule(v1, w1)?;
    let dst = tensor_bimodule(v2, w2)?;
    let ts = tensor(t, s);
    let report = verify_intertwiner(&ts, &src, &dst, tol)?;
    Ok((ts, report))
}

/// Splits an intertwining projection `p` on `V` through its range: returns
/// `W` with coactions `(1⊗ι*)α_V ι` and `(ι*⊗1)α_V ι`, and the isometry `ι`.
pub fn split_idempotent(
    p: &LinearMap,
    v: &UnitaryBimodule,
    tol: Tolerance,
) -> Result<(UnitaryBimodule, LinearMap)> {
    let residual = tensor::projection_residual(p)?;
    if residual > tol.eps() {
        return Err(Error::NotAProjection { residual });
    }
    let check = verify_intertwiner(p, v, v, tol)?;
    if !check.passed() {
        return Err(Error::NotAnIntertwiner {
            residual: check.max_residual(),
        });
    }
    let iso = tensor::range_factorize(p, tol)?;
    let is = adjoint(&iso);
    let ig = identity(&v.left_group.word());
    let ih = identity(&v.right_group.word());
    let left = tensor::chain(&[&iso, &v.left_coaction, &tensor(&ig, &is)])?;
    let right = tensor::chain(&[&iso, &v.right_coaction, &tensor(&is, &ih)])?;
    let w = UnitaryBimodule::new(
        v.left_group.clone(),
        v.right_group.clone(),
        iso.dom().clone(),
        left,
        right,
    )?;
    let (w, _) = w.certify(tol);
    Ok((w, iso))
}

/// A Q-system whose object carries a `G`–`G` bimodule structure, checked
/// as a Q-system in the bimodule 2-category: the axioms, `m` intertwining
/// `B⊗B → B`, and `i` intertwining the unit 1-cell into `B`.
pub fn verify_qsystem_in_g(
    q: &QSystem,
    b: &UnitaryBimodule,
    tol: Tolerance,
) -> Result<VerificationReport> {
    if b.left_group != b.right_group {
        return Err(group_mismatch("Q-system object must be a G-G bimodule"));
    }
    if b.space != q.word() {
        return Err(wire_mismatch("Q-system bimodule space", &q.word(), &b.space));
    }
    let mut r = VerificationReport::new(tol);
    r.merge("qsystem", verify_qsystem(q, tol));
    let bb = tensor_bimodule(b, b)?;
    let m = q.mult().retype(bb.space.clone(), b.space.clone())?;
    r.merge("mult", verify_intertwiner(&m, &bb, b, tol)?);
    let unit = UnitaryBimodule::unit(&b.left_group);
    r.merge("unit", verify_intertwiner(q.unit(), &unit, b, tol)?);
    Ok(r)
}
