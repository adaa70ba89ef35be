//! Dense numerical kernels shared by the constructive procedures.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::tensor::{C64, ZERO};

/// Orthonormal eigenvectors of the Hermitian part of `m` whose eigenvalues
/// exceed `threshold`, as columns ordered by decreasing eigenvalue. Each
/// column's phase is fixed so that its largest-magnitude entry is real and
/// positive.
pub(crate) fn hermitian_eigvecs_above(m: &DMatrix<C64>, threshold: f64) -> DMatrix<C64> {
    let n = m.nrows();
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(h);
    let mut idx: Vec<usize> = (0..n).filter(|&k| eig.eigenvalues[k] > threshold).collect();
    idx.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut out = DMatrix::zeros(n, idx.len());
    for (j, &k) in idx.iter().enumerate() {
        let col = eig.eigenvectors.column(k);
        let pivot = col
            .iter()
            .copied()
            .max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap_or(std::cmp::Ordering::Equal))
            .unwrap_or(ZERO);
        let phase = if pivot.norm() > 0.0 {
            pivot.conj() / pivot.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        for r in 0..n {
            out[(r, j)] = col[r] * phase;
        }
    }
    out
}

/// Eigen-decomposition of the Hermitian part of `m`: eigenvalues ascending
/// with matching eigenvector columns.
pub(crate) fn hermitian_eigen(m: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), DMatrix::zeros(0, 0));
    }
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(h);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let vals = idx.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vecs = DMatrix::zeros(n, n);
    for (j, &k) in idx.iter().enumerate() {
        vecs.set_column(j, &eig.eigenvectors.column(k));
    }
    (vals, vecs)
}

/// Numerical rank: singular values above `rel_tol × σ_max` count.
pub(crate) fn rank(m: &DMatrix<C64>, rel_tol: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.clone().singular_values();
    let smax = sv.iter().copied().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * smax).count()
}

/// Orthonormal basis (as columns) of the kernel of `m`. A direction counts as
/// null when its singular value is below `rel_tol × max(1, σ_max)`.
pub(crate) fn null_space(m: &DMatrix<C64>, rel_tol: f64) -> DMatrix<C64> {
    let n = m.ncols();
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    if m.nrows() == 0 {
        return DMatrix::identity(n, n);
    }
    // Reduce to a square triangular factor with the same kernel, then take
    // the right singular vectors of small singular values.
    let square = if m.nrows() >= n {
        m.clone().qr().r()
    } else {
        let mut padded = DMatrix::zeros(n, n);
        padded.rows_mut(0, m.nrows()).copy_from(m);
        padded
    };
    let svd = square.svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max).max(1.0);
    let keep: Vec<usize> = (0..n).filter(|&k| svd.singular_values[k] <= rel_tol * smax).collect();
    let mut out = DMatrix::zeros(n, keep.len());
    for (j, &k) in keep.iter().enumerate() {
        for r in 0..n {
            out[(r, j)] = v_t[(k, r)].conj();
        }
    }
    out
}
