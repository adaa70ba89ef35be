//! Wire-typed dense complex linear maps.
//!
//! A [`LinearMap`] carries the ordered list of spaces on its input and output
//! wires. Tensor products order basis vectors with the leftmost factor most
//! significant, so `e_i ⊗ e_j` in `C^m ⊗ C^n` sits at flat index `i·n + j`.
//! Matrix entry `(r, c)` is the coefficient of output basis vector `r` in the
//! image of input basis vector `c`, which makes composition a plain matrix
//! product.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{wire_mismatch, Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// A named finite-dimensional Hilbert space.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Space {
    name: Arc<str>,
    dim: usize,
}

impl Space {
    pub fn new(name: impl AsRef<str>, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension {
                name: name.as_ref().to_string(),
                dim,
            });
        }
        Ok(Self {
            name: Arc::from(name.as_ref()),
            dim,
        })
    }

    /// The zero space, which only arises as the range of a zero projection.
    pub fn zero(name: impl AsRef<str>) -> Self {
        Self {
            name: Arc::from(name.as_ref()),
            dim: 0,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// An ordered tensor product of spaces. The empty word is the monoidal unit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Word(Vec<Space>);

impl Word {
    pub fn new(factors: Vec<Space>) -> Self {
        Self(factors)
    }

    pub fn unit() -> Self {
        Self(Vec::new())
    }

    pub fn factors(&self) -> &[Space] {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.0.iter().map(Space::dim).product()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Word(v)
    }
}

impl From<Space> for Word {
    fn from(s: Space) -> Self {
        Word(vec![s])
    }
}

impl From<&Space> for Word {
    fn from(s: &Space) -> Self {
        Word(vec![s.clone()])
    }
}

impl FromIterator<Space> for Word {
    fn from_iter<T: IntoIterator<Item = Space>>(iter: T) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("I");
        }
        for (k, s) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("⊗")?;
            }
            write!(f, "{}", s.name)?;
        }
        Ok(())
    }
}

/// Absolute entrywise comparison threshold.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Tolerance(f64);

impl Tolerance {
    pub const DEFAULT_EPS: f64 = 1e-9;

    pub fn new(eps: f64) -> Result<Self> {
        if eps.is_finite() && eps >= 0.0 {
            Ok(Self(eps))
        } else {
            Err(Error::InvalidTolerance(eps))
        }
    }

    pub fn eps(self) -> f64 {
        self.0
    }

    pub fn scaled(self, factor: f64) -> Self {
        Self(self.0 * factor)
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self(Self::DEFAULT_EPS)
    }
}

/// A dense complex matrix between two wire types.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap {
    dom: Word,
    cod: Word,
    matrix: DMatrix<C64>,
}

impl LinearMap {
    pub fn new(dom: Word, cod: Word, matrix: DMatrix<C64>) -> Result<Self> {
        if matrix.nrows() != cod.dim() || matrix.ncols() != dom.dim() {
            return Err(Error::ShapeMismatch {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
                dom,
                cod,
            });
        }
        for c in 0..matrix.ncols() {
            for r in 0..matrix.nrows() {
                let z = matrix[(r, c)];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(Error::NonFinite { row: r, col: c });
                }
            }
        }
        Ok(Self { dom, cod, matrix })
    }

    /// Builds a map from row-major entries.
    pub fn from_rows(dom: Word, cod: Word, rows: &[Vec<C64>]) -> Result<Self> {
        let ncols = dom.dim();
        if rows.len() != cod.dim() || rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::ShapeMismatch {
                rows: rows.len(),
                cols: rows.first().map_or(0, Vec::len),
                dom,
                cod,
            });
        }
        let m = DMatrix::from_fn(rows.len(), ncols, |r, c| rows[r][c]);
        Self::new(dom, cod, m)
    }

    /// Builds a map from real row-major entries.
    pub fn from_real_rows(dom: Word, cod: Word, rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(dom, cod, &rows)
    }

    pub fn from_fn(dom: Word, cod: Word, f: impl FnMut(usize, usize) -> C64) -> Result<Self> {
        let m = DMatrix::from_fn(cod.dim(), dom.dim(), f);
        Self::new(dom, cod, m)
    }

    pub fn zero(dom: Word, cod: Word) -> Self {
        let m = DMatrix::zeros(cod.dim(), dom.dim());
        Self { dom, cod, matrix: m }
    }

    /// The map `C -> w` sending 1 to the given vector.
    pub fn ket(cod: Word, v: &[C64]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = v.iter().map(|&z| vec![z]).collect();
        Self::from_rows(Word::unit(), cod, &rows)
    }

    /// A scalar `C -> C`.
    pub fn scalar(z: C64) -> Self {
        Self {
            dom: Word::unit(),
            cod: Word::unit(),
            matrix: DMatrix::from_element(1, 1, z),
        }
    }

    pub fn dom(&self) -> &Word {
        &self.dom
    }

    pub fn cod(&self) -> &Word {
        &self.cod
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.matrix[(row, col)]
    }

    /// Column `c` as a vector: the image of input basis vector `c`.
    pub fn column(&self, c: usize) -> Vec<C64> {
        self.matrix.column(c).iter().copied().collect()
    }

    /// Same matrix on different wires of equal total dimension.
    pub fn retype(&self, dom: Word, cod: Word) -> Result<Self> {
        Self::new(dom, cod, self.matrix.clone())
    }

    pub fn scale(&self, z: C64) -> Self {
        Self {
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            matrix: &self.matrix * z,
        }
    }

    pub fn add(&self, other: &LinearMap) -> Result<Self> {
        self.check_same_signature(other, "add")?;
        Ok(Self {
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            matrix: &self.matrix + &other.matrix,
        })
    }

    pub fn sub(&self, other: &LinearMap) -> Result<Self> {
        self.check_same_signature(other, "sub")?;
        Ok(Self {
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            matrix: &self.matrix - &other.matrix,
        })
    }

    pub fn adjoint(&self) -> Self {
        adjoint(self)
    }

    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.dom.dim() {
            return Err(Error::Shape(format!(
                "vector of length {} applied to map from {}",
                v.len(),
                self.dom
            )));
        }
        let mut out = vec![ZERO; self.cod.dim()];
        for (c, &x) in v.iter().enumerate() {
            if x == ZERO {
                continue;
            }
            for (r, o) in out.iter_mut().enumerate() {
                *o += self.matrix[(r, c)] * x;
            }
        }
        Ok(out)
    }

    fn check_same_signature(&self, other: &LinearMap, ctx: &str) -> Result<()> {
        if self.dom != other.dom {
            return Err(wire_mismatch(format!("{ctx} (domain)"), &self.dom, &other.dom));
        }
        if self.cod != other.cod {
            return Err(wire_mismatch(format!("{ctx} (codomain)"), &self.cod, &other.cod));
        }
        Ok(())
    }
}

/// Complex matrix product through four real products, which run on the
/// blocked `f64` kernel instead of the generic scalar loop.
pub(crate) fn matmul(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    if a.nrows() * a.ncols() * b.ncols() < 4096 {
        return a * b;
    }
    let (ar, ai) = (a.map(|z| z.re), a.map(|z| z.im));
    let (br, bi) = (b.map(|z| z.re), b.map(|z| z.im));
    let re = &ar * &br - &ai * &bi;
    let im = &ar * &bi + &ai * &br;
    re.zip_map(&im, C64::new)
}

/// `g ∘ f`.
pub fn compose(g: &LinearMap, f: &LinearMap) -> Result<LinearMap> {
    if f.cod != g.dom {
        return Err(wire_mismatch("compose", &g.dom, &f.cod));
    }
    Ok(LinearMap {
        dom: f.dom.clone(),
        cod: g.cod.clone(),
        matrix: matmul(&g.matrix, &f.matrix),
    })
}

/// Composes a chain applied left to right: `chain(&[f, g, h]) = h ∘ g ∘ f`.
pub fn chain(maps: &[&LinearMap]) -> Result<LinearMap> {
    let (first, rest) = maps
        .split_first()
        .ok_or_else(|| Error::Shape("empty composition chain".into()))?;
    let mut acc = (*first).clone();
    for m in rest {
        acc = compose(m, &acc)?;
    }
    Ok(acc)
}

/// `f ⊗ g`, left factor most significant.
pub fn tensor(f: &LinearMap, g: &LinearMap) -> LinearMap {
    LinearMap {
        dom: f.dom.concat(&g.dom),
        cod: f.cod.concat(&g.cod),
        matrix: kron(&f.matrix, &g.matrix),
    }
}

/// Tensor product of several maps, folded from the left.
pub fn tensor_all(maps: &[&LinearMap]) -> LinearMap {
    let mut acc = LinearMap::scalar(ONE);
    for m in maps {
        acc = tensor(&acc, m);
    }
    acc
}

/// `(1_left ⊗ f ⊗ 1_right) ∘ x`, computed without forming the Kronecker
/// product. Equal to `compose(&tensor_all(&[&identity(left), f, &identity(right)]), x)`.
pub fn whisker(left: &Word, f: &LinearMap, right: &Word, x: &LinearMap) -> Result<LinearMap> {
    let expected = left.concat(&f.dom).concat(right);
    if x.cod != expected {
        return Err(wire_mismatch("whisker", &expected, &x.cod));
    }
    let (a, b) = (left.dim(), right.dim());
    let (m, n) = f.matrix.shape();
    let cols = x.matrix.ncols();
    let mut out = DMatrix::zeros(a * m * b, cols);
    let mut y = DMatrix::zeros(n, b * cols);
    for i in 0..a {
        for c in 0..cols {
            for j in 0..n {
                for k in 0..b {
                    y[(j, c * b + k)] = x.matrix[((i * n + j) * b + k, c)];
                }
            }
        }
        let z = matmul(&f.matrix, &y);
        for c in 0..cols {
            for r in 0..m {
                for k in 0..b {
                    out[((i * m + r) * b + k, c)] = z[(r, c * b + k)];
                }
            }
        }
    }
    Ok(LinearMap {
        dom: x.dom.clone(),
        cod: left.concat(&f.cod).concat(right),
        matrix: out,
    })
}

/// `g ∘ (1_left ⊗ f ⊗ 1_right)`, the mirror of [`whisker`].
pub fn whisker_into(g: &LinearMap, left: &Word, f: &LinearMap, right: &Word) -> Result<LinearMap> {
    Ok(adjoint(&whisker(left, &adjoint(f), right, &adjoint(g))?))
}

fn kron(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = DMatrix::zeros(ar * br, ac * bc);
    for j1 in 0..ac {
        for i1 in 0..ar {
            let x = a[(i1, j1)];
            if x == ZERO {
                continue;
            }
            for j2 in 0..bc {
                for i2 in 0..br {
                    out[(i1 * br + i2, j1 * bc + j2)] = x * b[(i2, j2)];
                }
            }
        }
    }
    out
}

pub fn adjoint(f: &LinearMap) -> LinearMap {
    LinearMap {
        dom: f.cod.clone(),
        cod: f.dom.clone(),
        matrix: f.matrix.adjoint(),
    }
}

pub fn identity(w: &Word) -> LinearMap {
    let n = w.dim();
    LinearMap {
        dom: w.clone(),
        cod: w.clone(),
        matrix: DMatrix::identity(n, n),
    }
}

/// Largest absolute entrywise difference between two maps of equal signature.
pub fn max_abs_diff(f: &LinearMap, g: &LinearMap) -> Result<f64> {
    f.check_same_signature(g, "comparison")?;
    Ok(matrix_max_abs_diff(&f.matrix, &g.matrix))
}

pub(crate) fn matrix_max_abs_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, |m, d| if d.is_nan() || d > m { d } else { m })
}

pub fn approx_eq(f: &LinearMap, g: &LinearMap, tol: Tolerance) -> Result<bool> {
    Ok(max_abs_diff(f, g)? <= tol.eps())
}

/// `‖f* f − 1‖`.
pub fn isometry_residual(f: &LinearMap) -> f64 {
    let ff = matmul(&f.matrix.adjoint(), &f.matrix);
    matrix_max_abs_diff(&ff, &DMatrix::identity(ff.nrows(), ff.ncols()))
}

/// `‖f f* − 1‖`.
pub fn coisometry_residual(f: &LinearMap) -> f64 {
    let ff = matmul(&f.matrix, &f.matrix.adjoint());
    matrix_max_abs_diff(&ff, &DMatrix::identity(ff.nrows(), ff.ncols()))
}

pub fn is_isometry(f: &LinearMap, tol: Tolerance) -> bool {
    isometry_residual(f) <= tol.eps()
}

pub fn is_coisometry(f: &LinearMap, tol: Tolerance) -> bool {
    coisometry_residual(f) <= tol.eps()
}

pub fn is_unitary(f: &LinearMap, tol: Tolerance) -> bool {
    is_isometry(f, tol) && is_coisometry(f, tol)
}

/// `max(‖p∘p − p‖, ‖p* − p‖)` for an endomorphism.
pub fn projection_residual(p: &LinearMap) -> Result<f64> {
    if p.dom != p.cod {
        return Err(wire_mismatch("projection (endomorphism required)", &p.dom, &p.cod));
    }
    let idem = matrix_max_abs_diff(&matmul(&p.matrix, &p.matrix), &p.matrix);
    let herm = matrix_max_abs_diff(&p.matrix.adjoint(), &p.matrix);
    Ok(idem.max(herm))
}

pub fn is_projection(p: &LinearMap, tol: Tolerance) -> Result<bool> {
    Ok(projection_residual(p)? <= tol.eps())
}

/// Factors a projection `p` on `V` as `iso ∘ iso*` with `iso: W → V` an
/// isometry onto the range of `p`. `W` is a fresh space named after `V`.
pub fn range_factorize(p: &LinearMap, tol: Tolerance) -> Result<LinearMap> {
    let name = format!("ran({})", p.cod);
    range_factorize_named(p, &name, tol)
}

/// As [`range_factorize`], naming the range space explicitly.
pub fn range_factorize_named(p: &LinearMap, name: &str, tol: Tolerance) -> Result<LinearMap> {
    let residual = projection_residual(p)?;
    if residual > tol.eps() {
        return Err(Error::NotAProjection { residual });
    }
    let cols = crate::linalg::hermitian_eigvecs_above(&p.matrix, 0.5);
    let rank = cols.ncols();
    let range = if rank == 0 {
        Space::zero(name)
    } else {
        Space::new(name, rank)?
    };
    LinearMap::new(Word::from(range), p.cod.clone(), cols)
}

/// Orthonormal basis (Hilbert-Schmidt inner product) of the space of maps
/// `T: dom → cod` annihilated by the linear constraint `residuals`, which
/// must return maps depending linearly on `T`.
pub fn linear_solutions(
    dom: &Word,
    cod: &Word,
    residuals: impl Fn(&LinearMap) -> Result<Vec<LinearMap>>,
) -> Result<Vec<LinearMap>> {
    let (rows, cols) = (cod.dim(), dom.dim());
    let unknowns = rows * cols;
    let mut columns: Vec<Vec<C64>> = Vec::with_capacity(unknowns);
    for k in 0..unknowns {
        let (r, c) = (k / cols, k % cols);
        let mut m = DMatrix::zeros(rows, cols);
        m[(r, c)] = ONE;
        let t = LinearMap::new(dom.clone(), cod.clone(), m)?;
        let mut col = Vec::new();
        for res in residuals(&t)? {
            col.extend(res.matrix.iter().copied());
        }
        columns.push(col);
    }
    let height = columns.first().map_or(0, Vec::len);
    let system = DMatrix::from_fn(height, unknowns, |i, j| columns[j][i]);
    let kernel = crate::linalg::null_space(&system, 1e-9);
    (0..kernel.ncols())
        .map(|j| {
            let m = DMatrix::from_fn(rows, cols, |r, c| kernel[(r * cols + c, j)]);
            LinearMap::new(dom.clone(), cod.clone(), m)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn sp(name: &str, d: usize) -> Space {
        Space::new(name, d).unwrap()
    }

    fn w(spaces: &[&Space]) -> Word {
        spaces.iter().map(|s| (*s).clone()).collect()
    }

    fn random_map(rng: &mut ChaCha8Rng, dom: Word, cod: Word) -> LinearMap {
        LinearMap::from_fn(dom, cod, |_, _| {
            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
        .unwrap()
    }

    #[test]
    fn compose_with_identity() {
        let a = sp("A", 2);
        let g = LinearMap::from_real_rows(w(&[&a]), w(&[&a]), &[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        assert_eq!(compose(&g, &identity(&w(&[&a]))).unwrap(), g);
        assert_eq!(compose(&identity(&w(&[&a])), &g).unwrap(), g);
    }

    #[test]
    fn compose_orthogonal_vectors() {
        let a = sp("A", 2);
        let f = LinearMap::ket(w(&[&a]), &[c(1.0), c(0.0)]).unwrap();
        let g = LinearMap::from_real_rows(w(&[&a]), Word::unit(), &[&[0.0, 1.0]]).unwrap();
        let gf = compose(&g, &f).unwrap();
        assert_eq!(gf.matrix().shape(), (1, 1));
        assert_eq!(gf.entry(0, 0), ZERO);
    }

    #[test]
    fn compose_matches_triple_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (a, b) = (sp("A", 2), sp("B", 3));
        let f = random_map(&mut rng, w(&[&a]), w(&[&b]));
        let g = random_map(&mut rng, w(&[&b]), w(&[&a]));
        let gf = compose(&g, &f).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let mut s = ZERO;
                for k in 0..3 {
                    s += g.entry(i, k) * f.entry(k, j);
                }
                assert!((gf.entry(i, j) - s).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn compose_rejects_mismatched_wires() {
        let (a, b) = (sp("A", 2), sp("B", 2));
        let f = identity(&w(&[&a]));
        let g = identity(&w(&[&b]));
        let err = compose(&g, &f).unwrap_err();
        assert!(matches!(err, Error::WireMismatch { .. }));
        assert!(err.to_string().contains('A') && err.to_string().contains('B'));
    }

    #[test]
    fn tensor_identities_and_scalars() {
        let (a, b) = (sp("A", 2), sp("B", 3));
        let t = tensor(&identity(&w(&[&a])), &identity(&w(&[&b])));
        assert_eq!(t.matrix(), &DMatrix::<C64>::identity(6, 6));
        assert_eq!(t.dom(), &w(&[&a, &b]));

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = random_map(&mut rng, w(&[&a]), w(&[&b]));
        let two = LinearMap::scalar(c(2.0));
        let t = tensor(&two, &g);
        assert_eq!(t.matrix(), &(g.matrix() * c(2.0)));
        assert_eq!(t.dom(), g.dom());
    }

    #[test]
    fn interchange_law_on_random_maps() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let (a, b) = (sp("A", 2), sp("B", 2));
        let wa = w(&[&a]);
        let wb = w(&[&b]);
        let f = random_map(&mut rng, wa.clone(), wa.clone());
        let h = random_map(&mut rng, wa.clone(), wa.clone());
        let g = random_map(&mut rng, wb.clone(), wb.clone());
        let k = random_map(&mut rng, wb.clone(), wb.clone());
        let lhs = compose(&tensor(&f, &g), &tensor(&h, &k)).unwrap();
        let rhs = tensor(&compose(&f, &h).unwrap(), &compose(&g, &k).unwrap());
        assert!(max_abs_diff(&lhs, &rhs).unwrap() <= 1e-12);
    }

    #[test]
    fn basis_index_convention() {
        let (a, b) = (sp("A", 2), sp("B", 2));
        for i in 0..2 {
            for j in 0..2 {
                let mut ei = vec![ZERO; 2];
                ei[i] = ONE;
                let mut ej = vec![ZERO; 2];
                ej[j] = ONE;
                let v = tensor(
                    &LinearMap::ket(w(&[&a]), &ei).unwrap(),
                    &LinearMap::ket(w(&[&b]), &ej).unwrap(),
                );
                let col = v.column(0);
                for (idx, z) in col.iter().enumerate() {
                    let expect = if idx == i * 2 + j { ONE } else { ZERO };
                    assert_eq!(*z, expect);
                }
            }
        }
    }

    #[test]
    fn adjoint_basics() {
        let i = LinearMap::scalar(C64::new(0.0, 1.0));
        assert_eq!(adjoint(&i).entry(0, 0), C64::new(0.0, -1.0));
        let a = sp("A", 3);
        assert_eq!(adjoint(&identity(&w(&[&a]))), identity(&w(&[&a])));
    }

    #[test]
    fn adjoint_reverses_composition_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (a, b, cc) = (sp("A", 2), sp("B", 3), sp("C", 2));
        let f = random_map(&mut rng, w(&[&a]), w(&[&b]));
        let g = random_map(&mut rng, w(&[&b]), w(&[&cc]));
        assert_eq!(adjoint(&adjoint(&f)), f);
        let lhs = adjoint(&compose(&g, &f).unwrap());
        let rhs = compose(&adjoint(&f), &adjoint(&g)).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn identity_of_unit_and_products() {
        let id = identity(&Word::unit());
        assert_eq!(id.matrix().shape(), (1, 1));
        assert_eq!(id.entry(0, 0), ONE);
        let (a, b) = (sp("A", 2), sp("B", 3));
        assert_eq!(identity(&w(&[&a, &b])).matrix(), &DMatrix::<C64>::identity(6, 6));
    }

    #[test]
    fn approx_eq_threshold_semantics() {
        let a = sp("A", 2);
        let f = identity(&w(&[&a]));
        assert!(approx_eq(&f, &f, Tolerance::new(0.0).unwrap()).unwrap());
        let mut m = f.matrix().clone();
        m[(0, 0)] += c(1e-8);
        let g = LinearMap::new(f.dom().clone(), f.cod().clone(), m).unwrap();
        assert!(!approx_eq(&f, &g, Tolerance::new(1e-9).unwrap()).unwrap());
        let mut m = f.matrix().clone();
        m[(0, 0)] += c(1e-12);
        let g = LinearMap::new(f.dom().clone(), f.cod().clone(), m).unwrap();
        assert!(approx_eq(&f, &g, Tolerance::new(1e-9).unwrap()).unwrap());
    }

    #[test]
    fn approx_eq_rejects_different_words() {
        let (a, b) = (sp("A", 2), sp("B", 2));
        let err = approx_eq(&identity(&w(&[&a])), &identity(&w(&[&b])), Tolerance::default());
        assert!(matches!(err, Err(Error::WireMismatch { .. })));
    }

    #[test]
    fn predicates() {
        let tol = Tolerance::default();
        let a = sp("A", 2);
        let v = LinearMap::ket(w(&[&a]), &[ONE, ZERO]).unwrap();
        assert!(is_isometry(&v, tol));
        assert!(!is_coisometry(&v, tol));
        let d = LinearMap::from_real_rows(w(&[&a]), w(&[&a]), &[&[1.0, 0.0], &[0.0, 0.0]]).unwrap();
        assert!(is_projection(&d, tol).unwrap());
        assert!(!is_isometry(&d, tol));
        let h = LinearMap::from_real_rows(w(&[&a]), w(&[&a]), &[&[0.5, 0.5], &[0.5, 0.5]]).unwrap();
        assert!(is_projection(&h, tol).unwrap());
        assert!(is_unitary(&identity(&w(&[&a])), tol));
        assert!(matches!(is_projection(&v, tol), Err(Error::WireMismatch { .. })));
    }

    #[test]
    fn range_factorize_examples() {
        let tol = Tolerance::default();
        let a = sp("A", 2);
        for rows in [
            [[1.0, 0.0], [0.0, 0.0]],
            [[0.5, 0.5], [0.5, 0.5]],
            [[1.0, 0.0], [0.0, 1.0]],
        ] {
            let r: Vec<&[f64]> = rows.iter().map(|x| x.as_slice()).collect();
            let p = LinearMap::from_real_rows(w(&[&a]), w(&[&a]), &r).unwrap();
            let iso = range_factorize(&p, tol).unwrap();
            assert!(max_abs_diff(&compose(&iso, &adjoint(&iso)).unwrap(), &p).unwrap() <= 10.0 * tol.eps());
            assert!(is_isometry(&iso, tol.scaled(10.0)));
        }
        let h = LinearMap::from_real_rows(w(&[&a]), w(&[&a]), &[&[0.5, 0.5], &[0.5, 0.5]]).unwrap();
        let iso = range_factorize(&h, tol).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((iso.entry(0, 0).norm() - s).abs() < 1e-12);
        assert!((iso.entry(1, 0).norm() - s).abs() < 1e-12);
    }

    #[test]
    fn range_factorize_zero_projection() {
        let a = sp("A", 2);
        let p = LinearMap::zero(w(&[&a]), w(&[&a]));
        let iso = range_factorize(&p, Tolerance::default()).unwrap();
        assert_eq!(iso.dom().dim(), 0);
        assert_eq!(iso.matrix().shape(), (2, 0));
        let ii = compose(&iso, &adjoint(&iso)).unwrap();
        assert_eq!(max_abs_diff(&ii, &p).unwrap(), 0.0);
        assert_eq!(compose(&adjoint(&iso), &iso).unwrap().matrix().shape(), (0, 0));
    }

    #[test]
    fn range_factorize_rejects_non_projection() {
        let a = sp("A", 2);
        let p = LinearMap::from_real_rows(w(&[&a]), w(&[&a]), &[&[1.0, 1.0], &[0.0, 0.0]]).unwrap();
        match range_factorize(&p, Tolerance::default()) {
            Err(Error::NotAProjection { residual }) => assert!(residual > 0.5),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn whisker_matches_kronecker_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let (a, b, c3, d) = (sp("A", 2), sp("B", 3), sp("C", 2), sp("D", 4));
        let f = random_map(&mut rng, w(&[&b]), w(&[&d]));
        let x = random_map(&mut rng, w(&[&c3]), w(&[&a, &b, &c3]));
        let fast = whisker(&w(&[&a]), &f, &w(&[&c3]), &x).unwrap();
        let slow = compose(&tensor_all(&[&identity(&w(&[&a])), &f, &identity(&w(&[&c3]))]), &x).unwrap();
        assert_eq!(fast.cod(), slow.cod());
        assert!(max_abs_diff(&fast, &slow).unwrap() < 1e-14);
        assert!(whisker(&w(&[&b]), &f, &w(&[&c3]), &x).is_err());
        let edge = whisker(&Word::unit(), &f, &Word::unit(), &identity(&w(&[&b]))).unwrap();
        assert_eq!(edge, f);
        let g = random_map(&mut rng, w(&[&a, &d, &c3]), w(&[&b]));
        let fast = whisker_into(&g, &w(&[&a]), &f, &w(&[&c3])).unwrap();
        let slow = compose(&g, &tensor_all(&[&identity(&w(&[&a])), &f, &identity(&w(&[&c3]))])).unwrap();
        assert!(max_abs_diff(&fast, &slow).unwrap() < 1e-14);
    }

    #[test]
    fn constructor_rejects_bad_shapes_and_nan() {
        let a = sp("A", 2);
        let m = DMatrix::<C64>::zeros(3, 2);
        assert!(matches!(
            LinearMap::new(w(&[&a]), w(&[&a]), m),
            Err(Error::ShapeMismatch { .. })
        ));
        let mut m = DMatrix::<C64>::zeros(2, 2);
        m[(1, 0)] = C64::new(f64::NAN, 0.0);
        assert!(matches!(
            LinearMap::new(w(&[&a]), w(&[&a]), m),
            Err(Error::NonFinite { row: 1, col: 0 })
        ));
        assert!(Space::new("Z", 0).is_err());
        assert!(Tolerance::new(-1.0).is_err());
    }
}
