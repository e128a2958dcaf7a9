//! Dense complex linear algebra shared by every module.
//!
//! Block convention: an element of level `n` over an algebra in `M_N` is an
//! `nN x nN` matrix whose `(i, j)` block of size `N x N` is the `(i, j)` entry.

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type RMatrix = DMatrix<f64>;
pub type RVector = DVector<f64>;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Build a complex matrix from real row-major entries.
pub fn real_matrix(rows: usize, cols: usize, entries: &[f64]) -> CMatrix {
    assert_eq!(entries.len(), rows * cols);
    CMatrix::from_fn(rows, cols, |i, j| c(entries[i * cols + j], 0.0))
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Matrix unit `E_ij` in `M_n` (zero-based indices).
pub fn matrix_unit(n: usize, i: usize, j: usize) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    m[(i, j)] = c(1.0, 0.0);
    m
}

pub fn frobenius(x: &CMatrix) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Trace inner product `<x, y> = sum conj(y_ij) x_ij`.
pub fn inner(x: &CMatrix, y: &CMatrix) -> C64 {
    x.iter().zip(y.iter()).map(|(a, b)| b.conj() * a).sum()
}

/// Largest singular value.
pub fn spectral_norm(x: &CMatrix) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    let g = x.adjoint() * x;
    let lam = hermitian_eigenvalues(&g);
    lam.iter().cloned().fold(0.0_f64, f64::max).max(0.0).sqrt()
}

pub fn hermitian_part(x: &CMatrix) -> CMatrix {
    (x + x.adjoint()).scale(0.5)
}

/// `max |x_ij - conj(x_ji)|`.
pub fn hermitian_defect(x: &CMatrix) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..x.nrows() {
        for j in 0..x.ncols() {
            worst = worst.max((x[(i, j)] - x[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Eigenvalues of the Hermitian part, ascending.
pub fn hermitian_eigenvalues(x: &CMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = SymmetricEigen::new(hermitian_part(x))
        .eigenvalues
        .iter()
        .cloned()
        .collect();
    v.sort_by(|a, b| a.total_cmp(b));
    v
}

/// Eigen-decomposition of the Hermitian part with ascending eigenvalues.
pub fn hermitian_eigh(x: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = SymmetricEigen::new(hermitian_part(x));
    let n = x.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vecs = CMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    (vals, vecs)
}

pub fn min_eigenvalue(x: &CMatrix) -> f64 {
    hermitian_eigenvalues(x).first().cloned().unwrap_or(0.0)
}

/// PSD test with relative slack: Hermitian within `tol_herm * (1 + |x|)` and
/// `lambda_min >= -tol_psd * (1 + |x|)`.
pub fn is_psd(x: &CMatrix, tol_psd: f64, tol_herm: f64) -> bool {
    psd_violation(x, tol_herm) <= tol_psd
}

/// Relative PSD violation `max(0, -lambda_min) / (1 + |x|)`, or infinity when
/// `x` is not Hermitian within `tol_herm` (relative).
pub fn psd_violation(x: &CMatrix, tol_herm: f64) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    if x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return f64::INFINITY;
    }
    let vals = hermitian_eigenvalues(x);
    let scale = 1.0 + vals.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if hermitian_defect(x) > tol_herm * scale {
        return f64::INFINITY;
    }
    (-vals[0]).max(0.0) / scale
}

/// Principal square root and inverse square root of a Hermitian PD matrix.
pub fn sqrt_pd(q: &CMatrix) -> Option<(CMatrix, CMatrix)> {
    let (vals, vecs) = hermitian_eigh(q);
    if vals.first().map_or(true, |&v| v <= 0.0) {
        return None;
    }
    let n = q.nrows();
    let d = CMatrix::from_diagonal(&DVector::from_fn(n, |i, _| c(vals[i].sqrt(), 0.0)));
    let dinv = CMatrix::from_diagonal(&DVector::from_fn(n, |i, _| c(1.0 / vals[i].sqrt(), 0.0)));
    let root = &vecs * d * vecs.adjoint();
    let inv_root = &vecs * dinv * vecs.adjoint();
    Some((hermitian_part(&root), hermitian_part(&inv_root)))
}

/// `diag(s, s, ..., s)` with `n` copies, i.e. the action of `S` on every block.
pub fn repeat_diag(s: &CMatrix, n: usize) -> CMatrix {
    let (r, cc) = s.shape();
    let mut out = CMatrix::zeros(r * n, cc * n);
    for k in 0..n {
        out.view_mut((k * r, k * cc), (r, cc)).copy_from(s);
    }
    out
}

/// Block diagonal matrix from a list of square blocks.
pub fn block_diag(blocks: &[CMatrix]) -> CMatrix {
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = CMatrix::zeros(rows, cols);
    let (mut r, mut cc) = (0, 0);
    for b in blocks {
        out.view_mut((r, cc), b.shape()).copy_from(b);
        r += b.nrows();
        cc += b.ncols();
    }
    out
}

/// Kronecker product placing `a` on the outside: block `(i, j)` is `a_ij * b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Block `(i, j)` of size `bs x bs`.
pub fn block(x: &CMatrix, bs: usize, i: usize, j: usize) -> CMatrix {
    x.view((i * bs, j * bs), (bs, bs)).into_owned()
}

/// Assemble an `n x m` grid of `bs x bs` blocks.
pub fn from_blocks(n: usize, m: usize, bs: usize, mut f: impl FnMut(usize, usize) -> CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(n * bs, m * bs);
    for i in 0..n {
        for j in 0..m {
            out.view_mut((i * bs, j * bs), (bs, bs)).copy_from(&f(i, j));
        }
    }
    out
}

/// Real coordinates `[Re z_0, Im z_0, Re z_1, ...]` of a complex vector.
pub fn to_real(coords: &[C64]) -> RVector {
    RVector::from_fn(2 * coords.len(), |k, _| {
        let z = coords[k / 2];
        if k % 2 == 0 {
            z.re
        } else {
            z.im
        }
    })
}

pub fn from_real(v: &RVector) -> Vec<C64> {
    (0..v.len() / 2).map(|k| c(v[2 * k], v[2 * k + 1])).collect()
}

/// Numerical rank: singular values above `rel_tol * max(sigma_max, floor)`.
fn rank_with_floor(a: &RMatrix, rel_tol: f64, floor: f64) -> usize {
    let s = real_singular_values(a);
    let top = s.first().cloned().unwrap_or(0.0);
    let thresh = rel_tol * top.max(floor);
    s.iter().filter(|&&v| v > thresh).count()
}

/// Orthonormal basis of the column space. The rank comes from the singular
/// values; the vectors from a column-pivoted QR, since SVD singular vectors
/// can lose half the digits on nearly rank-deficient input.
pub fn real_range_basis(a: &RMatrix, rel_tol: f64, floor: f64) -> Vec<RVector> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Vec::new();
    }
    let r = rank_with_floor(a, rel_tol, floor);
    let q = a.clone().col_piv_qr().q();
    (0..r).map(|k| q.column(k).into_owned()).collect()
}

/// Orthonormal basis of the null space of a real matrix. Singular values up to
/// `rel_tol * max(sigma_max, floor)` count as zero; `floor` is the natural
/// scale of the rows, so an identically vanishing map keeps its full kernel.
pub fn real_null_space(a: &RMatrix, rel_tol: f64, floor: f64) -> Vec<RVector> {
    let ncols = a.ncols();
    if a.nrows() == 0 || ncols == 0 {
        return (0..ncols).map(|k| RVector::from_fn(ncols, |i, _| if i == k { 1.0 } else { 0.0 })).collect();
    }
    let r = rank_with_floor(a, rel_tol, floor);
    // the complement of the row space, from a full QR of the padded transpose
    let cols = a.nrows().max(ncols);
    let mut t = RMatrix::zeros(ncols, cols);
    t.view_mut((0, 0), (ncols, a.nrows())).copy_from(&a.transpose());
    let q = t.col_piv_qr().q();
    (r..ncols).map(|k| q.column(k).into_owned()).collect()
}

/// Singular values of a real matrix, descending.
pub fn real_singular_values(a: &RMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = a.clone().svd(false, false).singular_values.iter().cloned().collect();
    s.sort_by(|p, q| q.total_cmp(p));
    s
}

/// Numerical rank with threshold relative to the largest singular value.
pub fn real_rank(a: &RMatrix, rel_tol: f64) -> usize {
    let s = real_singular_values(a);
    let top = s.first().cloned().unwrap_or(0.0);
    if top == 0.0 {
        return 0;
    }
    s.iter().filter(|&&v| v > rel_tol * top).count()
}

/// Gram–Schmidt with one re-orthogonalization pass. Returns the normalized
/// residual when it exceeds `threshold`.
pub fn orthogonalize_real(basis: &[RVector], v: &RVector, threshold: f64) -> Option<RVector> {
    let mut w = v.clone();
    for _ in 0..2 {
        for b in basis {
            let p = b.dot(&w);
            w.axpy(-p, b, 1.0);
        }
    }
    let n = w.norm();
    if n > threshold {
        Some(w / n)
    } else {
        None
    }
}
