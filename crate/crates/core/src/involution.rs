//! Recovering the involution from a cone family through the unique splitting
//! `x = x1 + i x2` with `x1, x2` in the real span of the cone.

use serde::Serialize;

use crate::algebra::{OperatorAlgebra, RANK_TOL};
use crate::cone::MatrixCone;
use crate::error::{Error, Result};
use crate::io::ser_matrices;
use crate::linalg::{self, frobenius, CMatrix, RMatrix, RVector, C64};
use crate::random::{self, SampleRng};

/// Rounds without growth before the sampled span counts as stable.
pub const STABLE_ROUNDS: usize = 3;
/// Sampling rounds before giving up with [`Error::SpanUnstable`].
pub const MAX_ROUNDS: usize = 64;
/// Residual allowed when expressing `x` over `span + i span`.
pub const DECOMPOSE_TOL: f64 = 1e-9;

/// A conjugate-linear involution acting on block matrices over an algebra.
pub trait StarOperation {
    fn apply_star(&self, x: &CMatrix) -> Result<CMatrix>;
}

/// The involution a cone model carries natively.
pub struct NativeStar<'a>(pub &'a dyn MatrixCone);

impl StarOperation for NativeStar<'_> {
    fn apply_star(&self, x: &CMatrix) -> Result<CMatrix> {
        Ok(self.0.star(x))
    }
}

/// The ambient matrix adjoint.
pub struct Adjoint;

impl StarOperation for Adjoint {
    fn apply_star(&self, x: &CMatrix) -> Result<CMatrix> {
        Ok(x.adjoint())
    }
}

/// Orthonormal basis (real coordinates over the amplified basis) of
/// `span_R(C_n - C_n)`.
#[derive(Debug, Clone)]
pub struct RealSpan {
    pub level: usize,
    /// Length of each coordinate vector: twice the complex dimension of `M_n(A)`.
    pub ambient_real_dim: usize,
    pub vectors: Vec<RVector>,
    pub rounds: usize,
    pub samples: usize,
}

/// Real coordinates of `i x` given those of `x`.
fn times_i(v: &RVector) -> RVector {
    RVector::from_fn(v.len(), |k, _| if k % 2 == 0 { -v[k + 1] } else { v[k - 1] })
}

impl RealSpan {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// Columns `[V | iV]`.
    fn stacked(&self) -> RMatrix {
        let k = self.vectors.len();
        let mut m = RMatrix::zeros(self.ambient_real_dim, 2 * k);
        for (j, v) in self.vectors.iter().enumerate() {
            m.set_column(j, v);
            m.set_column(k + j, &times_i(v));
        }
        m
    }

    /// Real dimension of `span + i span`.
    pub fn complexified_rank(&self) -> usize {
        if self.vectors.is_empty() {
            return 0;
        }
        linalg::real_rank(&self.stacked(), RANK_TOL)
    }

    /// Matrices of the basis vectors at this level.
    pub fn matrices(&self, alg: &OperatorAlgebra) -> Vec<CMatrix> {
        self.vectors.iter().map(|v| alg.level_element(self.level, &linalg::from_real(v))).collect()
    }
}

/// Grow the real span of sampled cone elements in rounds until its rank has
/// not changed for [`STABLE_ROUNDS`] consecutive rounds.
///
/// Each round stacks the normalized samples next to the current orthonormal
/// basis and re-extracts the range, so the basis stays accurate to working
/// precision however ill-conditioned the samples are.
pub fn real_cone_span(cone: &dyn MatrixCone, n: usize, seed: u64) -> Result<RealSpan> {
    let alg = cone.algebra();
    let complex_dim = alg.dim() * n * n;
    let real_dim = 2 * complex_dim;
    let mut rng = random::seeded(seed);
    let batch = complex_dim.max(4);
    let mut vectors: Vec<RVector> = Vec::new();
    let mut quiet = 0;
    let mut samples = 0;
    for round in 1..=MAX_ROUNDS {
        let mut cols = vectors.clone();
        for _ in 0..batch {
            let x = cone.sample(n, &mut rng);
            samples += 1;
            let v = linalg::to_real(&alg.project_level(n, &x)?);
            let norm = v.norm();
            if norm > 0.0 {
                cols.push(v / norm);
            }
        }
        let rank_before = vectors.len();
        if !cols.is_empty() {
            vectors = linalg::real_range_basis(&RMatrix::from_columns(&cols), RANK_TOL, 0.0);
            vectors.truncate(real_dim);
        }
        quiet = if vectors.len() > rank_before { 0 } else { quiet + 1 };
        if quiet >= STABLE_ROUNDS {
            return Ok(RealSpan { level: n, ambient_real_dim: real_dim, vectors, rounds: round, samples });
        }
    }
    Err(Error::SpanUnstable { dimension: vectors.len(), rounds: MAX_ROUNDS })
}

/// Solver for `x = x1 + i x2` over a fixed real span.
#[derive(Debug, Clone)]
pub struct Decomposer {
    span: RealSpan,
    /// Inverse of `[V | iV]`.
    pinv: RMatrix,
}

impl Decomposer {
    /// Checks the spanning and directness conditions exactly.
    pub fn new(span: RealSpan) -> Result<Self> {
        let k = span.dim();
        let rank = span.complexified_rank();
        if rank < 2 * k {
            return Err(Error::DecompositionNotUnique { rank, expected: 2 * k });
        }
        if rank < span.ambient_real_dim {
            return Err(Error::DecompositionInfeasible { rank, expected: span.ambient_real_dim });
        }
        // rank == 2k == ambient, so [V | iV] is square and invertible
        let pinv = span.stacked().try_inverse().ok_or(Error::DecompositionNotUnique { rank, expected: 2 * k })?;
        Ok(Self { span, pinv })
    }

    pub fn span(&self) -> &RealSpan {
        &self.span
    }

    /// Real coefficients of `x1` and `x2` on the span basis.
    fn coefficients(&self, v: &RVector) -> (RVector, RVector) {
        let k = self.span.dim();
        let sol = &self.pinv * v;
        (sol.rows(0, k).into_owned(), sol.rows(k, k).into_owned())
    }

    fn combine(&self, coeffs: &RVector) -> RVector {
        let mut out = RVector::zeros(self.span.ambient_real_dim);
        for (c, v) in coeffs.iter().zip(&self.span.vectors) {
            out.axpy(*c, v, 1.0);
        }
        out
    }

    /// Real coordinates of `x1` and `x2`, with the relative residual.
    fn split_real(&self, v: &RVector) -> (RVector, RVector, f64) {
        let (a, b) = self.coefficients(v);
        let x1 = self.combine(&a);
        let x2 = self.combine(&b);
        let residual = (v - &x1 - times_i(&x2)).norm() / (1.0 + v.norm());
        (x1, x2, residual)
    }
}

/// `x = x1 + i x2` with `x1, x2` in `span_R(C_n - C_n)`.
pub fn decompose(cone: &dyn MatrixCone, n: usize, x: &CMatrix, seed: u64) -> Result<(CMatrix, CMatrix)> {
    let dec = Decomposer::new(real_cone_span(cone, n, seed)?)?;
    decompose_with(&dec, cone.algebra(), x)
}

/// [`decompose`] against a precomputed span.
pub fn decompose_with(dec: &Decomposer, alg: &OperatorAlgebra, x: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    let n = dec.span.level;
    let v = linalg::to_real(&alg.project_level(n, x)?);
    let (x1, x2, residual) = dec.split_real(&v);
    if residual > DECOMPOSE_TOL {
        return Err(Error::CertificationFailed { residual, tolerance: DECOMPOSE_TOL });
    }
    Ok((alg.level_element(n, &linalg::from_real(&x1)), alg.level_element(n, &linalg::from_real(&x2))))
}

/// The recovered involution on `M_n(A)`, stored through its values on the
/// amplified basis and extended conjugate-linearly.
#[derive(Debug, Clone, Serialize)]
pub struct InvolutionMap {
    #[serde(skip)]
    pub algebra: OperatorAlgebra,
    pub level: usize,
    #[serde(serialize_with = "ser_matrices")]
    pub images: Vec<CMatrix>,
    /// Sampled bound on `|x^♯| / |x|`: twice the largest ratio of either
    /// component of the splitting to the element.
    pub bound_2k: f64,
    pub span_dim: usize,
}

const BOUND_SAMPLES: usize = 64;

/// Recover `♯` on `M_n(A)` from the level-`n` cone alone.
pub fn recover_involution(cone: &dyn MatrixCone, n: usize, seed: u64) -> Result<InvolutionMap> {
    let alg = cone.algebra();
    let dec = Decomposer::new(real_cone_span(cone, n, seed)?)?;
    let d = alg.dim() * n * n;
    let mut coords = vec![C64::new(0.0, 0.0); d];
    let mut images = Vec::with_capacity(d);
    for k in 0..d {
        coords[k] = C64::new(1.0, 0.0);
        let v = linalg::to_real(&coords);
        coords[k] = C64::new(0.0, 0.0);
        let (x1, x2, residual) = dec.split_real(&v);
        if residual > DECOMPOSE_TOL {
            return Err(Error::CertificationFailed { residual, tolerance: DECOMPOSE_TOL });
        }
        let sharp = x1 - times_i(&x2);
        images.push(alg.level_element(n, &linalg::from_real(&sharp)));
    }
    let mut rng: SampleRng = random::seeded(seed ^ 0x5eed);
    let mut ratio: f64 = 0.0;
    for _ in 0..BOUND_SAMPLES {
        let x = random::random_element(alg, n, &mut rng);
        let (x1, x2) = decompose_with(&dec, alg, &x)?;
        let norm = cone.operator_norm(&x);
        ratio = ratio.max(cone.operator_norm(&x1) / norm).max(cone.operator_norm(&x2) / norm);
    }
    let span_dim = dec.span.dim();
    Ok(InvolutionMap { algebra: alg.clone(), level: n, images, bound_2k: 2.0 * ratio, span_dim })
}

impl InvolutionMap {
    /// `x^♯` for `x` in `M_level(A)`.
    pub fn sharp(&self, x: &CMatrix) -> Result<CMatrix> {
        let coords = self.algebra.project_level(self.level, x)?;
        let big = self.level * self.algebra.ambient_dim();
        let mut out = CMatrix::zeros(big, big);
        for (c, img) in coords.iter().zip(&self.images) {
            if *c != C64::new(0.0, 0.0) {
                out += img * c.conj();
            }
        }
        Ok(out)
    }

    /// Entrywise extension to a `m x m` grid of level-`level` blocks:
    /// `[a_ij]^♯ = [a_ji^♯]`.
    pub fn sharp_entrywise(&self, x: &CMatrix) -> Result<CMatrix> {
        let bs = self.level * self.algebra.ambient_dim();
        if x.nrows() % bs != 0 || x.ncols() % bs != 0 {
            return Err(Error::DimensionMismatch { expected: bs, found: x.nrows() });
        }
        let (rows, cols) = (x.nrows() / bs, x.ncols() / bs);
        let mut out = CMatrix::zeros(x.ncols(), x.nrows());
        for i in 0..rows {
            for j in 0..cols {
                let b = self.sharp(&linalg::block(x, bs, i, j).clone_owned())?;
                out.view_mut((j * bs, i * bs), (bs, bs)).copy_from(&b);
            }
        }
        Ok(out)
    }
}

impl StarOperation for InvolutionMap {
    fn apply_star(&self, x: &CMatrix) -> Result<CMatrix> {
        let bs = self.level * self.algebra.ambient_dim();
        if x.nrows() == bs && x.ncols() == bs {
            self.sharp(x)
        } else {
            self.sharp_entrywise(x)
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InvolutionComparison {
    pub level: usize,
    pub samples: usize,
    /// Largest `|X^♯(level n) - [x_ji^♯]|_F / |X|_F`.
    pub max_residual: f64,
}

/// Compare an independently recovered level-`n` involution with the
/// entrywise transpose built from the level-1 one on random elements.
pub fn verify_matrix_involution(
    level_one: &InvolutionMap,
    level_n: &InvolutionMap,
    samples: usize,
    seed: u64,
) -> Result<InvolutionComparison> {
    if level_one.level != 1 {
        return Err(Error::InvalidInput(format!("expected a level-1 involution, got level {}", level_one.level)));
    }
    let n = level_n.level;
    let mut rng = random::seeded(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let x = random::random_element(&level_n.algebra, n, &mut rng);
        let direct = level_n.sharp(&x)?;
        let entrywise = level_one.sharp_entrywise(&x)?;
        worst = worst.max(frobenius(&(direct - entrywise)) / frobenius(&x));
    }
    Ok(InvolutionComparison { level: n, samples, max_residual: worst })
}
