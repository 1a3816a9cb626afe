//! Small dense complex linear algebra on top of nalgebra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Eigenvalues in `[-NEG_CLAMP, 0)` are treated as exact zeros.
pub const NEG_CLAMP: f64 = 1e-10;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn kron_vec(a: &CVector, b: &CVector) -> CVector {
    a.kronecker(b)
}

/// `(m + m†) / 2`.
pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).unscale(2.0)
}

/// Largest elementwise deviation `|m_ij - conj(m_ji)|`.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().sum()
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
///
/// Columns of the returned matrix are the matching orthonormal eigenvectors.
pub fn hermitian_eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = hermitize(m).symmetric_eigen();
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, col| eig.eigenvectors[(r, order[col])]);
    (values, vectors)
}

pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = hermitize(m)
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Applies `f` to the spectrum of a Hermitian matrix: `V f(Λ) V†`.
pub fn hermitian_map(m: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let (vals, vecs) = hermitian_eigh(m);
    let mut scaled = vecs.clone();
    for (j, &v) in vals.iter().enumerate() {
        let fv = f(v);
        scaled.column_mut(j).scale_mut(fv);
    }
    &scaled * vecs.adjoint()
}

/// Eigenvalues at or below this multiple of the largest one are round-off.
pub const SPECTRUM_FLOOR: f64 = 1e-14;

/// Principal square root of a positive semidefinite matrix.
///
/// Eigenvalues within [`SPECTRUM_FLOOR`] of zero (relative to the largest)
/// are set to zero first, so a numerically rank-deficient input does not pick
/// up `O(1e-8)` components from the square root of round-off.
pub fn psd_sqrt(m: &CMatrix) -> CMatrix {
    let top = hermitian_eigenvalues(m)
        .last()
        .copied()
        .unwrap_or(0.0)
        .max(0.0);
    let floor = SPECTRUM_FLOOR * top;
    hermitian_map(m, |v| if v > floor { v.sqrt() } else { 0.0 })
}

/// Sum of singular values.
pub fn nuclear_norm(m: &CMatrix) -> f64 {
    m.singular_values().iter().sum()
}

/// `I ⊗ … ⊗ op ⊗ … ⊗ I` with `op` acting on `subsystem`.
pub fn embed(op: &CMatrix, subsystem: usize, dims: &[usize]) -> CMatrix {
    dims.iter()
        .enumerate()
        .fold(CMatrix::identity(1, 1), |acc, (k, &d)| {
            if k == subsystem {
                kron(&acc, op)
            } else {
                kron(&acc, &CMatrix::identity(d, d))
            }
        })
}

/// Projector `|v⟩⟨v|`.
pub fn outer(v: &CVector) -> CMatrix {
    v * v.adjoint()
}

/// Numerical rank from singular values relative to the largest one.
pub fn rank(m: &CMatrix, rel_tol: f64) -> usize {
    let sv = m.singular_values();
    let top = sv.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * top).count()
}

/// Index reversal `J m J`, mapping lower-triangular to upper-triangular.
pub fn reverse_indices(m: &CMatrix) -> CMatrix {
    let n = m.nrows();
    CMatrix::from_fn(n, n, |i, j| m[(n - 1 - i, n - 1 - j)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psd_sqrt_squares_back() {
        let a =
            CMatrix::from_row_slice(2, 2, &[c(0.7, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(0.3, 0.0)]);
        let s = psd_sqrt(&a);
        assert!((&s * &s - &a).norm() < 1e-12);
    }

    #[test]
    fn embed_places_operator() {
        let x =
            CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let e = embed(&x, 1, &[3, 2]);
        assert_eq!(e.nrows(), 6);
        let direct = kron(&CMatrix::identity(3, 3), &x);
        assert_eq!(e, direct);
    }

    #[test]
    fn eigh_is_sorted_and_reconstructs() {
        let a = CMatrix::from_row_slice(
            3,
            3,
            &[
                c(2.0, 0.0),
                c(0.0, 1.0),
                c(0.5, 0.0),
                c(0.0, -1.0),
                c(1.0, 0.0),
                c(0.0, 0.0),
                c(0.5, 0.0),
                c(0.0, 0.0),
                c(-1.0, 0.0),
            ],
        );
        let (vals, vecs) = hermitian_eigh(&a);
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        let diag =
            CMatrix::from_diagonal(&CVector::from_iterator(3, vals.iter().map(|&v| c(v, 0.0))));
        assert!((&vecs * diag * vecs.adjoint() - a).norm() < 1e-12);
    }
}
