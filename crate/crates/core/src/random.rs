//! Seeded generators of random test instances: unitaries, group
//! representations and corepresentations, unitary bimodules, intertwining
//! projections, Q-system bimodules, and diagram expressions.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cqg::{intertwiner_space, Corepresentation, FiniteQuantumGroup, UnitaryBimodule};
use crate::diagram::{Environment, MorphismExpr};
use crate::error::Result;
use crate::frobenius::{
    function_algebra, group_algebra_of, matrix_algebra, qsys_intertwiner_space, QSysBimodule,
    QSystem,
};
use crate::group::{symmetric_permutation, FiniteGroup};
use crate::linalg;
use crate::tensor::{adjoint, compose, identity, tensor, LinearMap, Space, Tolerance, Word, C64, ONE, ZERO};

pub type TestRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian (Box-Muller).
pub fn gaussian(rng: &mut TestRng) -> C64 {
    let u: f64 = 1.0 - rng.random::<f64>();
    let v: f64 = rng.random();
    let r = (-2.0 * u.ln()).sqrt();
    let t = std::f64::consts::TAU * v;
    C64::new(r * t.cos(), r * t.sin()) * std::f64::consts::FRAC_1_SQRT_2
}

/// Haar-distributed unitary from the QR factorization of a Gaussian matrix.
pub fn random_unitary(rng: &mut TestRng, d: usize) -> DMatrix<C64> {
    let z = DMatrix::from_fn(d, d, |_, _| gaussian(rng));
    let qr = z.qr();
    let (q, r) = (qr.q(), qr.r());
    let mut out = q;
    for j in 0..d {
        let x = r[(j, j)];
        let phase = if x.norm() > 0.0 { x / x.norm() } else { ONE };
        for i in 0..d {
            out[(i, j)] *= phase;
        }
    }
    out
}

/// A map with independent Gaussian entries.
pub fn random_map(rng: &mut TestRng, dom: Word, cod: Word) -> LinearMap {
    let m = DMatrix::from_fn(cod.dim(), dom.dim(), |_, _| gaussian(rng));
    LinearMap::new(dom, cod, m).expect("finite entries")
}

/// A unitary on `w` with Haar-random entries.
pub fn random_unitary_map(rng: &mut TestRng, w: &Word) -> LinearMap {
    LinearMap::new(w.clone(), w.clone(), random_unitary(rng, w.dim())).expect("finite entries")
}

/// Matrices of a unitary representation, one per group element.
pub type Rep = Vec<DMatrix<C64>>;

pub fn trivial_rep(g: &FiniteGroup) -> Rep {
    vec![DMatrix::identity(1, 1); g.order()]
}

/// The regular representation `π(g) e_h = e_{gh}`.
pub fn regular_rep(g: &FiniteGroup) -> Rep {
    let n = g.order();
    (0..n)
        .map(|a| DMatrix::from_fn(n, n, |r, c| if r == g.mul(a, c) { ONE } else { ZERO }))
        .collect()
}

/// The character `g ↦ ω^{kg}` of the cyclic group `Z_n`.
pub fn cyclic_character(n: usize, k: usize) -> Rep {
    (0..n)
        .map(|g| {
            let t = std::f64::consts::TAU * ((k * g) % n) as f64 / n as f64;
            DMatrix::from_element(1, 1, C64::new(t.cos(), t.sin()))
        })
        .collect()
}

/// The defining permutation representation of `S_k`.
pub fn permutation_rep(k: usize) -> Rep {
    let order: usize = (1..=k).product();
    (0..order)
        .map(|g| {
            let p = symmetric_permutation(k, g);
            DMatrix::from_fn(k, k, |r, c| if r == p[c] { ONE } else { ZERO })
        })
        .collect()
}

/// The sign character of `S_k`.
pub fn sign_rep(k: usize) -> Rep {
    permutation_rep(k)
        .into_iter()
        .map(|m| DMatrix::from_element(1, 1, m.determinant()))
        .collect()
}

/// Block direct sum of representations of the same group.
pub fn direct_sum_reps(reps: &[Rep]) -> Rep {
    let n = reps[0].len();
    let d: usize = reps.iter().map(|r| r[0].nrows()).sum();
    (0..n)
        .map(|g| {
            let mut m = DMatrix::zeros(d, d);
            let mut off = 0;
            for r in reps {
                let k = r[g].nrows();
                m.view_mut((off, off), (k, k)).copy_from(&r[g]);
                off += k;
            }
            m
        })
        .collect()
}

pub fn conjugate_rep(rep: &Rep, w: &DMatrix<C64>) -> Rep {
    rep.iter().map(|m| w * m * w.adjoint()).collect()
}

/// Building blocks available for a group given by name (`Z<n>` or `S<k>`).
fn irreducible_pieces(name: &str, g: &FiniteGroup) -> Vec<Rep> {
    let n = g.order();
    let mut pieces = vec![trivial_rep(g)];
    if let Some(k) = name.strip_prefix('S').and_then(|k| k.parse::<usize>().ok()) {
        pieces.push(sign_rep(k));
        pieces.push(permutation_rep(k));
    } else {
        for k in 1..n {
            pieces.push(cyclic_character(n, k));
        }
    }
    pieces
}

/// A random unitary representation of dimension at most `max_dim`, made from
/// characters, permutation and regular representations in a random basis.
pub fn random_group_rep(rng: &mut TestRng, name: &str, g: &FiniteGroup, max_dim: usize) -> Rep {
    let pieces = irreducible_pieces(name, g);
    let mut chosen: Vec<Rep> = Vec::new();
    let mut dim = 0;
    let blocks = rng.random_range(1..=3);
    for _ in 0..blocks {
        let candidate = if g.order() + dim <= max_dim && rng.random_bool(0.2) {
            regular_rep(g)
        } else {
            pieces[rng.random_range(0..pieces.len())].clone()
        };
        let k = candidate[0].nrows();
        if dim + k <= max_dim {
            dim += k;
            chosen.push(candidate);
        }
    }
    if chosen.is_empty() {
        chosen.push(trivial_rep(g));
        dim = 1;
    }
    let w = random_unitary(rng, dim);
    conjugate_rep(&direct_sum_reps(&chosen), &w)
}

/// A random unitary corepresentation of the function algebra of `Z<n>` or
/// `S<k>`.
pub fn random_corep(rng: &mut TestRng, name: &str, max_dim: usize) -> Result<Corepresentation> {
    let g = FiniteGroup::named(name)?;
    let qg = FiniteQuantumGroup::function_algebra(&g, name)?;
    let rep = random_group_rep(rng, name, &g, max_dim);
    let space = Word::from(Space::new("H", rep[0].nrows())?);
    Corepresentation::from_group_rep(qg, space, &rep)
}

/// Left coaction `ξ_k ↦ Σ_j v_kj ⊗ ξ_j` with `v_kj = Σ_g π(g)_kj δ_g`.
pub fn left_coaction_from_rep(qg: &FiniteQuantumGroup, v: &Word, rep: &Rep) -> LinearMap {
    let d = v.dim();
    LinearMap::from_fn(v.clone(), qg.word().concat(v), |r, k| rep[r / d][(k, r % d)])
        .expect("finite entries")
}

/// Right coaction `ξ_k ↦ Σ_j ξ_j ⊗ u_jk` with `u_jk = Σ_g π(g)_jk δ_g`.
pub fn right_coaction_from_rep(qg: &FiniteQuantumGroup, v: &Word, rep: &Rep) -> LinearMap {
    let n = qg.dim();
    LinearMap::from_fn(v.clone(), v.concat(&qg.word()), |r, k| rep[r % n][(r / n, k)])
        .expect("finite entries")
}

/// A random unitary `C(G)`–`C(G)` bimodule of dimension at most `max_dim`
/// for a cyclic or symmetric group: a block sum of (character, character),
/// (trivial, regular) and (regular, trivial) pieces, in a random basis.
pub fn random_unitary_bimodule(
    rng: &mut TestRng,
    name: &str,
    max_dim: usize,
) -> Result<UnitaryBimodule> {
    let g = FiniteGroup::named(name)?;
    let qg = FiniteQuantumGroup::function_algebra(&g, name)?;
    let chars: Vec<Rep> = irreducible_pieces(name, &g)
        .into_iter()
        .filter(|r| r[0].nrows() == 1)
        .collect();
    let mut left: Vec<Rep> = Vec::new();
    let mut right: Vec<Rep> = Vec::new();
    let mut dim = 0;
    let blocks = rng.random_range(1..=4);
    for _ in 0..blocks {
        let (l, r) = match rng.random_range(0..4) {
            0 if dim + g.order() <= max_dim => (blockwise_trivial(&g, g.order()), regular_rep(&g)),
            1 if dim + g.order() <= max_dim => (regular_rep(&g), blockwise_trivial(&g, g.order())),
            _ => (
                chars[rng.random_range(0..chars.len())].clone(),
                chars[rng.random_range(0..chars.len())].clone(),
            ),
        };
        let k = l[0].nrows();
        if dim + k <= max_dim {
            dim += k;
            left.push(l);
            right.push(r);
        }
    }
    let space = Word::from(Space::new("V", dim)?);
    let lc = left_coaction_from_rep(&qg, &space, &direct_sum_reps(&left));
    let rc = right_coaction_from_rep(&qg, &space, &direct_sum_reps(&right));
    let plain = UnitaryBimodule::new(qg.clone(), qg, space.clone(), lc, rc)?;
    let w = random_unitary_map(rng, &space);
    plain.conjugate(&w)
}

fn blockwise_trivial(g: &FiniteGroup, d: usize) -> Rep {
    vec![DMatrix::identity(d, d); g.order()]
}

/// Orthogonal projection onto the eigenspaces of a Hermitian `h` lying above
/// its widest spectral gap. Gaps below `1e-6` of the spectral spread are
/// ignored; without a usable gap the identity is returned.
pub fn spectral_projection(h: &LinearMap) -> LinearMap {
    let (vals, vecs) = linalg::hermitian_eigen(h.matrix());
    let n = vals.len();
    let spread = vals.last().copied().unwrap_or(0.0) - vals.first().copied().unwrap_or(0.0);
    let mut best = (0.0, 0);
    for k in 1..n {
        let gap = vals[k] - vals[k - 1];
        if gap > best.0 {
            best = (gap, k);
        }
    }
    let from = if best.0 > 1e-6 * spread.max(1e-300) && best.0 > 1e-9 {
        best.1
    } else {
        0
    };
    let mut p = DMatrix::zeros(n, n);
    for k in from..n {
        let v = vecs.column(k);
        p += v * v.adjoint();
    }
    LinearMap::new(h.dom().clone(), h.cod().clone(), p).expect("finite entries")
}

/// A random combination of an orthonormal basis of maps.
pub fn random_combination(rng: &mut TestRng, basis: &[LinearMap]) -> Option<LinearMap> {
    let first = basis.first()?;
    let mut acc = LinearMap::zero(first.dom().clone(), first.cod().clone());
    for b in basis {
        acc = acc.add(&b.scale(gaussian(rng))).expect("same signature");
    }
    Some(acc)
}

/// A projection built from `T T*` for a random self-intertwiner `T`, cut at
/// its widest spectral gap.
pub fn random_intertwining_projection(rng: &mut TestRng, v: &UnitaryBimodule) -> Result<LinearMap> {
    let basis = intertwiner_space(v, v)?;
    let t = random_combination(rng, &basis).unwrap_or_else(|| identity(v.space()));
    Ok(spectral_projection(&compose(&t, &adjoint(&t))?))
}

/// Same construction for a Q-system bimodule.
pub fn random_qsys_projection(rng: &mut TestRng, m: &QSysBimodule) -> Result<LinearMap> {
    let basis = qsys_intertwiner_space(m, m)?;
    let t = random_combination(rng, &basis).unwrap_or_else(|| identity(m.space()));
    Ok(spectral_projection(&compose(&t, &adjoint(&t))?))
}

/// Canonical Q-systems of dimension at most 9.
pub fn small_qsystems() -> Result<Vec<QSystem>> {
    let mut out = Vec::new();
    for n in 1..=4 {
        out.push(function_algebra(n)?);
    }
    out.push(matrix_algebra(2)?);
    out.push(matrix_algebra(3)?);
    for name in ["Z2", "Z3", "S3"] {
        out.push(group_algebra_of(&FiniteGroup::named(name)?)?);
    }
    Ok(out)
}

/// A canonical Q-system transported along a random unitary, so that its
/// structure maps are dense.
pub fn random_conjugate_qsystem(rng: &mut TestRng, q: &QSystem) -> Result<QSystem> {
    let u = random_unitary_map(rng, &q.word());
    let (c, _) = q.conjugate(&u)?.certify(Tolerance::new(1e-10)?);
    Ok(c)
}

/// A verified-candidate Q-system bimodule of dimension at most `max_dim`:
/// a self-bimodule, a free bimodule, or a sub-bimodule split off one of
/// those by a random intertwining projection.
pub fn random_qsys_bimodule(rng: &mut TestRng, max_dim: usize) -> Result<QSysBimodule> {
    let qs: Vec<QSystem> = small_qsystems()?
        .into_iter()
        .filter(|q| q.dim() <= max_dim)
        .collect();
    let pick = |rng: &mut TestRng| -> Result<QSystem> {
        let q = qs[rng.random_range(0..qs.len())].clone();
        if rng.random_bool(0.3) {
            random_conjugate_qsystem(rng, &q)
        } else {
            Ok(q)
        }
    };
    let base = if rng.random_bool(0.5) {
        QSysBimodule::self_bimodule(&pick(rng)?)
    } else {
        loop {
            let (l, r) = (pick(rng)?, pick(rng)?);
            let room = max_dim / (l.dim() * r.dim());
            if room >= 1 {
                let k = Space::new("K", rng.random_range(1..=room.min(2)))?;
                break QSysBimodule::free(&l, &k, &r);
            }
        }
    };
    if rng.random_bool(0.5) {
        let p = random_qsys_projection(rng, &base)?;
        if p.matrix().iter().any(|z| z.norm() > 1e-12) {
            let (sub, _) = base.split(&p, Tolerance::new(1e-9)?)?;
            return Ok(sub);
        }
    }
    Ok(base)
}

/// A well-typed random expression over `env` paired with the same morphism
/// assembled directly from tensor-core calls (sequential chains composed
/// right to left, parallel blocks tensored right-associatively).
pub fn random_typed_expr(
    rng: &mut TestRng,
    env: &Environment,
    depth: usize,
) -> (MorphismExpr, LinearMap) {
    let gens: Vec<(String, LinearMap)> =
        env.generators().map(|(n, m)| (n.to_string(), m.clone())).collect();
    let spaces: Vec<Space> = env.spaces().cloned().collect();
    let leaf = |rng: &mut TestRng| -> (MorphismExpr, LinearMap) {
        if gens.is_empty() || rng.random_bool(0.2) {
            let k = rng.random_range(1..=2);
            let names: Vec<Space> =
                (0..k).map(|_| spaces[rng.random_range(0..spaces.len())].clone()).collect();
            let w = Word::new(names.clone());
            (
                MorphismExpr::identity(names.iter().map(|s| s.name().to_string())),
                identity(&w),
            )
        } else {
            let (n, m) = &gens[rng.random_range(0..gens.len())];
            (MorphismExpr::generator(n.clone()), m.clone())
        }
    };
    if depth == 0 {
        return leaf(rng);
    }
    match rng.random_range(0..4) {
        0 => leaf(rng),
        1 => {
            let k = rng.random_range(2..=3);
            let parts: Vec<(MorphismExpr, LinearMap)> =
                (0..k).map(|_| random_typed_expr(rng, env, depth - 1)).collect();
            let dom: usize = parts.iter().map(|p| p.1.dom().dim()).product();
            let cod: usize = parts.iter().map(|p| p.1.cod().dim()).product();
            if dom > 64 || cod > 64 {
                return parts.into_iter().next().expect("at least two parts");
            }
            let mut direct = parts[k - 1].1.clone();
            for (_, m) in parts[..k - 1].iter().rev() {
                direct = tensor(m, &direct);
            }
            (MorphismExpr::Parallel(parts.into_iter().map(|p| p.0).collect()), direct)
        }
        2 => {
            let (e, m) = random_typed_expr(rng, env, depth - 1);
            (MorphismExpr::adjoint(e), adjoint(&m))
        }
        _ => {
            // a chain f ; g where g is a generator or identity typed to fit
            let (e, m) = random_typed_expr(rng, env, depth - 1);
            let fits: Vec<&(String, LinearMap)> =
                gens.iter().filter(|(_, g)| g.dom() == m.cod()).collect();
            let (next_e, next_m) = if !fits.is_empty() && rng.random_bool(0.7) {
                let (n, g) = fits[rng.random_range(0..fits.len())];
                (MorphismExpr::generator(n.clone()), g.clone())
            } else if !m.cod().is_unit() {
                let names = m.cod().factors().iter().map(|s| s.name().to_string());
                (MorphismExpr::identity(names), identity(m.cod()))
            } else {
                return (e, m);
            };
            (
                MorphismExpr::Sequential(vec![e, next_e]),
                compose(&next_m, &m).expect("chosen to fit"),
            )
        }
    }
}

/// A random environment with up to three spaces of dimension at most
/// `max_dim` and a handful of random generators between short words.
pub fn random_environment(rng: &mut TestRng, max_dim: usize) -> Environment {
    let mut env = Environment::new();
    let count = rng.random_range(1..=3);
    let spaces: Vec<Space> = (0..count)
        .map(|k| {
            Space::new(format!("S{k}"), rng.random_range(1..=max_dim)).expect("positive dimension")
        })
        .collect();
    for s in &spaces {
        env.add_space(s.clone()).expect("fresh names");
    }
    let word = |rng: &mut TestRng| -> Word {
        let len = rng.random_range(1..=2);
        Word::new((0..len).map(|_| spaces[rng.random_range(0..spaces.len())].clone()).collect())
    };
    for k in 0..rng.random_range(2..=5) {
        let (dom, cod) = (word(rng), word(rng));
        env.add_generator(format!("f{k}"), random_map(rng, dom.clone(), cod.clone()))
            .expect("declared spaces");
        if rng.random_bool(0.5) {
            // an endomorphism makes longer chains likely
            env.add_generator(format!("e{k}"), random_map(rng, cod.clone(), cod))
                .expect("declared spaces");
        }
    }
    env
}

/// A random untyped expression for parser round trips.
pub fn random_expr(rng: &mut TestRng, depth: usize) -> MorphismExpr {
    const ALPHA: &[u8] = b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_";
    const ALNUM: &[u8] = b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_0123456789";
    let ident = |rng: &mut TestRng| -> String {
        loop {
            let mut s = String::new();
            s.push(ALPHA[rng.random_range(0..ALPHA.len())] as char);
            for _ in 0..rng.random_range(0..5) {
                s.push(ALNUM[rng.random_range(0..ALNUM.len())] as char);
            }
            if s != "id" {
                return s;
            }
        }
    };
    let choice = if depth == 0 { rng.random_range(0..2) } else { rng.random_range(0..5) };
    match choice {
        0 => MorphismExpr::Generator(ident(rng)),
        1 => MorphismExpr::Identity((0..rng.random_range(1..=3)).map(|_| ident(rng)).collect()),
        2 => MorphismExpr::Sequential(
            (0..rng.random_range(2..=3)).map(|_| random_expr(rng, depth - 1)).collect(),
        ),
        3 => MorphismExpr::Parallel(
            (0..rng.random_range(2..=3)).map(|_| random_expr(rng, depth - 1)).collect(),
        ),
        _ => MorphismExpr::adjoint(random_expr(rng, depth - 1)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cqg::{verify_bimodule, verify_corep, verify_intertwiner};
    use crate::frobenius::{verify_qsys_bimodule, verify_qsys_intertwiner};
    use crate::tensor::{is_unitary, projection_residual};

    #[test]
    fn unitaries_are_unitary() {
        let mut rng = seeded(1);
        for d in 1..6 {
            let w = Word::from(Space::new("W", d).unwrap());
            assert!(is_unitary(&random_unitary_map(&mut rng, &w), Tolerance::new(1e-12).unwrap()));
        }
    }

    #[test]
    fn generated_coreps_verify() {
        let mut rng = seeded(2);
        for name in ["Z2", "Z3", "S3"] {
            for _ in 0..5 {
                let u = random_corep(&mut rng, name, 6).unwrap();
                let r = verify_corep(&u, Tolerance::new(1e-12).unwrap());
                assert!(r.passed(), "{name}: {r}");
            }
        }
    }

    #[test]
    fn generated_bimodules_and_projections() {
        let mut rng = seeded(3);
        let tol = Tolerance::new(1e-10).unwrap();
        for name in ["Z2", "Z3"] {
            for _ in 0..5 {
                let v = random_unitary_bimodule(&mut rng, name, 6).unwrap();
                assert!(verify_bimodule(&v, tol).passed());
                let p = random_intertwining_projection(&mut rng, &v).unwrap();
                assert!(projection_residual(&p).unwrap() < 1e-10);
                assert!(verify_intertwiner(&p, &v, &v, tol).unwrap().passed());
            }
        }
    }

    #[test]
    fn generated_qsys_bimodules_verify() {
        let mut rng = seeded(4);
        let tol = Tolerance::new(1e-9).unwrap();
        for _ in 0..6 {
            let m = random_qsys_bimodule(&mut rng, 9).unwrap();
            assert!(m.space().dim() <= 9);
            let r = verify_qsys_bimodule(&m, tol);
            assert!(r.passed(), "{r}");
            let p = random_qsys_projection(&mut rng, &m).unwrap();
            assert!(verify_qsys_intertwiner(&p, &m, &m, tol).unwrap().passed());
        }
    }

    #[test]
    fn spectral_projection_picks_the_widest_gap() {
        let w = Word::from(Space::new("W", 3).unwrap());
        let h = LinearMap::from_real_rows(w.clone(), w, &[&[5.0, 0.0, 0.0], &[0.0, 0.1, 0.0], &[0.0, 0.0, 0.0]])
            .unwrap();
        let p = spectral_projection(&h);
        assert!((p.entry(0, 0) - ONE).norm() < 1e-12);
        assert!(p.entry(1, 1).norm() < 1e-12);
    }
}
