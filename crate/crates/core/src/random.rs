//! Seeded samplers for matrices, algebras and similarities.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algebra::{OperatorAlgebra, MAX_DIM, STRUCTURE_TOL};
use crate::linalg::{self, c, CMatrix, C64};

pub type SampleRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

pub fn gaussian_coords<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<C64> {
    (0..len).map(|_| complex_gaussian(rng)).collect()
}

/// Gaussian element of `M_n(A)`.
pub fn random_element<R: Rng + ?Sized>(alg: &OperatorAlgebra, n: usize, rng: &mut R) -> CMatrix {
    let coords = gaussian_coords(alg.dim() * n * n, rng);
    alg.level_element(n, &coords)
}

/// Hermitian part of a Gaussian element; lies in `M_n(A)` when `A` is star-closed.
pub fn random_hermitian_element<R: Rng + ?Sized>(alg: &OperatorAlgebra, n: usize, rng: &mut R) -> CMatrix {
    linalg::hermitian_part(&random_element(alg, n, rng))
}

/// Haar-distributed unitary via QR with phase correction.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let g = gaussian_matrix(n, n, rng);
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let mut u = q;
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) };
        for i in 0..n {
            u[(i, j)] *= phase;
        }
    }
    u
}

/// Invertible matrix `U diag(s) V` with `cond(S^* S) <= max_cond_sq`, the
/// singular values spread log-uniformly up to the cap.
pub fn random_invertible<R: Rng + ?Sized>(n: usize, max_cond_sq: f64, rng: &mut R) -> CMatrix {
    let u = random_unitary(n, rng);
    let v = random_unitary(n, rng);
    let span = max_cond_sq.max(1.0).sqrt().ln();
    let mut s: Vec<f64> = (0..n).map(|_| (rng.random::<f64>() * span).exp()).collect();
    if n >= 2 {
        // pin the extremes so the requested spread is actually exercised
        let top = rng.random_range(0.5..1.0) * span;
        s[0] = 1.0;
        s[n - 1] = top.exp();
    }
    let d = CMatrix::from_diagonal(&nalgebra::DVector::from_fn(n, |i, _| c(s[i], 0.0)));
    u * d * v
}

/// A random star-closed unital subalgebra of `M_N`: a unitary conjugate of
/// `(+)_i M_{n_i} (x) I_{m_i}` for a random block structure.
pub fn random_star_subalgebra<R: Rng + ?Sized>(ambient: usize, rng: &mut R) -> OperatorAlgebra {
    let mut remaining = ambient;
    let mut blocks: Vec<(usize, usize)> = Vec::new();
    while remaining > 0 {
        let n_i = rng.random_range(1..=remaining);
        let max_mult = remaining / n_i;
        let m_i = rng.random_range(1..=max_mult);
        blocks.push((n_i, m_i));
        remaining -= n_i * m_i;
    }
    let u = random_unitary(ambient, rng);
    let mut gens = Vec::new();
    let mut offset = 0;
    for &(n_i, m_i) in &blocks {
        let size = n_i * m_i;
        for a in 0..n_i {
            for b in 0..n_i {
                let local = linalg::kron(&linalg::matrix_unit(n_i, a, b), &linalg::identity(m_i));
                let mut g = CMatrix::zeros(ambient, ambient);
                g.view_mut((offset, offset), (size, size)).copy_from(&local);
                gens.push(&u * g * u.adjoint());
            }
        }
        offset += size;
    }
    OperatorAlgebra::generate(&gens, false, STRUCTURE_TOL, MAX_DIM).expect("block algebra closes")
}
