//! Finite-dimensional unital matrix algebras, their amplifications and the
//! doubling embedding.

use crate::error::{Error, Result};
use crate::linalg::{self, frobenius, inner, kron, matrix_unit, CMatrix, C64};

/// Default structural tolerance for Gram, closure and membership residuals.
pub const STRUCTURE_TOL: f64 = 1e-9;
/// Default cap on the dimension produced by [`OperatorAlgebra::generate`].
pub const MAX_DIM: usize = 256;
/// Cap on the basis size of an amplification.
pub const MAX_AMPLIFIED_DIM: usize = 8192;
/// Relative threshold for accepting a new direction during closure.
pub const RANK_TOL: f64 = 1e-8;

/// A unital subalgebra of `M_N` given by a basis orthonormal for the trace
/// inner product.
#[derive(Debug, Clone)]
pub struct OperatorAlgebra {
    ambient_dim: usize,
    basis: Vec<CMatrix>,
    unit_coords: Vec<C64>,
    star_closed: bool,
    structure_tol: f64,
    rank_tol: f64,
}

/// Coordinates together with the matrix they describe.
#[derive(Debug, Clone)]
pub struct AlgebraElement {
    pub coords: Vec<C64>,
    pub matrix: CMatrix,
}

impl AlgebraElement {
    pub fn from_coords(algebra: &OperatorAlgebra, coords: Vec<C64>) -> Self {
        let matrix = algebra.element(&coords);
        Self { coords, matrix }
    }

    pub fn from_matrix(algebra: &OperatorAlgebra, matrix: CMatrix) -> Result<Self> {
        let coords = algebra.project(&matrix)?;
        Ok(Self { coords, matrix })
    }
}

fn orthogonalize(basis: &[CMatrix], v: &CMatrix) -> CMatrix {
    let mut w = v.clone();
    for _ in 0..2 {
        for b in basis {
            let p = inner(&w, b);
            w -= b * p;
        }
    }
    w
}

impl OperatorAlgebra {
    /// Smallest unital algebra containing `generators` (and their adjoints when
    /// `include_adjoints` is set).
    pub fn generate(generators: &[CMatrix], include_adjoints: bool, tol: f64, max_dim: usize) -> Result<Self> {
        let n = match generators.first() {
            Some(g) => g.nrows(),
            None => return Err(Error::InvalidInput("at least one generator is required".into())),
        };
        for g in generators {
            if !g.is_square() {
                return Err(Error::DimensionMismatch { expected: g.nrows(), found: g.ncols() });
            }
            if g.nrows() != n {
                return Err(Error::DimensionMismatch { expected: n, found: g.nrows() });
            }
        }
        if max_dim == 0 {
            return Err(Error::InvalidInput("max_dim must be at least 1".into()));
        }
        let mut candidates = vec![linalg::identity(n)];
        for g in generators {
            candidates.push(g.clone());
            if include_adjoints {
                candidates.push(g.adjoint());
            }
        }
        let mut basis: Vec<CMatrix> = Vec::new();
        let push_all = |basis: &mut Vec<CMatrix>, cands: Vec<CMatrix>| -> Result<usize> {
            let scale = cands.iter().map(frobenius).fold(0.0, f64::max);
            let mut added = 0;
            for v in cands {
                let w = orthogonalize(basis, &v);
                let nw = frobenius(&w);
                if nw > RANK_TOL * scale {
                    if basis.len() == max_dim {
                        return Err(Error::DimensionCapExceeded { cap: max_dim, rank_tol: RANK_TOL });
                    }
                    basis.push(w.unscale(nw));
                    added += 1;
                }
            }
            Ok(added)
        };
        let normalized: Vec<CMatrix> = candidates
            .into_iter()
            .filter(|v| frobenius(v) > 0.0)
            .map(|v| {
                let f = frobenius(&v);
                v.unscale(f)
            })
            .collect();
        push_all(&mut basis, normalized)?;
        let mut fresh_from = 0;
        loop {
            let len = basis.len();
            let mut products = Vec::new();
            for i in 0..len {
                for j in 0..len {
                    if i >= fresh_from || j >= fresh_from {
                        products.push(&basis[i] * &basis[j]);
                    }
                }
            }
            let added = push_all(&mut basis, products)?;
            if added == 0 {
                break;
            }
            fresh_from = len;
        }
        Self::finish(n, basis, tol)
    }

    /// Validate an orthonormal basis read from elsewhere.
    pub fn from_orthonormal_basis(ambient_dim: usize, basis: Vec<CMatrix>, tol: f64) -> Result<Self> {
        for b in &basis {
            if b.nrows() != ambient_dim || b.ncols() != ambient_dim {
                return Err(Error::DimensionMismatch { expected: ambient_dim, found: b.nrows() });
            }
        }
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                let g = inner(a, b);
                if (g - C64::new(target, 0.0)).norm() > tol {
                    return Err(Error::InvalidInput(format!("basis is not orthonormal at ({i}, {j})")));
                }
            }
        }
        let alg = Self::finish(ambient_dim, basis, tol)?;
        for a in &alg.basis {
            for b in &alg.basis {
                let (_, r) = alg.projection_residual(&(a * b));
                if r > tol * (1.0 + frobenius(&(a * b))) {
                    return Err(Error::InvalidInput("basis span is not closed under products".into()));
                }
            }
        }
        Ok(alg)
    }

    /// Accept an orthonormal basis whose span is known to be a unital algebra.
    pub(crate) fn from_trusted_basis(ambient_dim: usize, basis: Vec<CMatrix>, tol: f64) -> Result<Self> {
        Self::finish(ambient_dim, basis, tol)
    }

    fn finish(ambient_dim: usize, basis: Vec<CMatrix>, tol: f64) -> Result<Self> {
        let mut alg = Self {
            ambient_dim,
            basis,
            unit_coords: Vec::new(),
            star_closed: false,
            structure_tol: tol,
            rank_tol: RANK_TOL,
        };
        let id = linalg::identity(ambient_dim);
        let (coords, residual) = alg.projection_residual(&id);
        if residual > tol * (1.0 + frobenius(&id)) {
            return Err(Error::InvalidInput(format!("identity is not in the span (residual {residual:e})")));
        }
        alg.unit_coords = coords;
        alg.star_closed = alg.basis.iter().all(|b| alg.project(&b.adjoint()).is_ok());
        Ok(alg)
    }

    /// `M_n` with the matrix-unit basis.
    pub fn full_matrix_algebra(n: usize) -> Self {
        let mut basis = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                basis.push(matrix_unit(n, i, j));
            }
        }
        Self::finish(n, basis, STRUCTURE_TOL).expect("matrix units span M_n")
    }

    /// The algebra `s * A * s_inv`.
    pub fn conjugate(&self, s: &CMatrix, s_inv: &CMatrix) -> Result<Self> {
        let gens: Vec<CMatrix> = self.basis.iter().map(|b| s * b * s_inv).collect();
        Self::generate(&gens, false, self.structure_tol, MAX_DIM.max(self.dim()))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[CMatrix] {
        &self.basis
    }

    pub fn unit_coords(&self) -> &[C64] {
        &self.unit_coords
    }

    pub fn is_star_closed(&self) -> bool {
        self.star_closed
    }

    pub fn structure_tol(&self) -> f64 {
        self.structure_tol
    }

    pub fn rank_tol(&self) -> f64 {
        self.rank_tol
    }

    pub fn unit(&self) -> CMatrix {
        linalg::identity(self.ambient_dim)
    }

    pub fn element(&self, coords: &[C64]) -> CMatrix {
        let mut out = CMatrix::zeros(self.ambient_dim, self.ambient_dim);
        for (b, &z) in self.basis.iter().zip(coords) {
            out += b * z;
        }
        out
    }

    /// Orthogonal projection coordinates and the Frobenius residual.
    pub fn projection_residual(&self, x: &CMatrix) -> (Vec<C64>, f64) {
        let coords: Vec<C64> = self.basis.iter().map(|b| inner(x, b)).collect();
        let residual = frobenius(&(x - self.element(&coords)));
        (coords, residual)
    }

    /// Coordinates of `x`; fails when the residual exceeds
    /// `structure_tol * (1 + |x|_F)`.
    pub fn project(&self, x: &CMatrix) -> Result<Vec<C64>> {
        if x.nrows() != self.ambient_dim || x.ncols() != self.ambient_dim {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim, found: x.nrows() });
        }
        let (coords, residual) = self.projection_residual(x);
        if residual > self.structure_tol * (1.0 + frobenius(x)) {
            return Err(Error::Membership { residual });
        }
        Ok(coords)
    }

    /// `M_n(A)` realized with basis `E_ij (x) b_k`, index `(i * n + j) * d + k`.
    pub fn amplify(&self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("amplification level must be at least 1".into()));
        }
        let d = self.dim();
        if d * n * n > MAX_AMPLIFIED_DIM {
            return Err(Error::DimensionCapExceeded { cap: MAX_AMPLIFIED_DIM, rank_tol: self.rank_tol });
        }
        let mut basis = Vec::with_capacity(d * n * n);
        for i in 0..n {
            for j in 0..n {
                let e = matrix_unit(n, i, j);
                for b in &self.basis {
                    basis.push(kron(&e, b));
                }
            }
        }
        let mut unit_coords = vec![C64::new(0.0, 0.0); d * n * n];
        for i in 0..n {
            for k in 0..d {
                unit_coords[(i * n + i) * d + k] = self.unit_coords[k];
            }
        }
        Ok(Self {
            ambient_dim: n * self.ambient_dim,
            basis,
            unit_coords,
            star_closed: self.star_closed,
            structure_tol: self.structure_tol,
            rank_tol: self.rank_tol,
        })
    }

    /// Blockwise projection onto `M_n(A)` using the ordering of [`Self::amplify`].
    pub fn project_level(&self, n: usize, x: &CMatrix) -> Result<Vec<C64>> {
        let big = n * self.ambient_dim;
        if x.nrows() != big || x.ncols() != big {
            return Err(Error::DimensionMismatch { expected: big, found: x.nrows() });
        }
        let mut coords = Vec::with_capacity(n * n * self.dim());
        let mut residual_sq = 0.0;
        for i in 0..n {
            for j in 0..n {
                let blk = linalg::block(x, self.ambient_dim, i, j);
                let (c, r) = self.projection_residual(&blk);
                residual_sq += r * r;
                coords.extend(c);
            }
        }
        let residual = residual_sq.sqrt();
        if residual > self.structure_tol * (1.0 + frobenius(x)) {
            return Err(Error::Membership { residual });
        }
        Ok(coords)
    }

    /// Inverse of [`Self::project_level`].
    pub fn level_element(&self, n: usize, coords: &[C64]) -> CMatrix {
        let d = self.dim();
        linalg::from_blocks(n, n, self.ambient_dim, |i, j| {
            let off = (i * n + j) * d;
            self.element(&coords[off..off + d])
        })
    }

    pub fn level_unit(&self, n: usize) -> CMatrix {
        linalg::identity(n * self.ambient_dim)
    }

    /// Largest residual when projecting each basis element of `other` onto `self`.
    pub fn span_residual(&self, other: &OperatorAlgebra) -> f64 {
        other.basis.iter().map(|b| self.projection_residual(b).1).fold(0.0, f64::max)
    }
}

/// The unital embedding `x -> diag(x, x)`.
pub fn doubling_embed(x: &CMatrix) -> CMatrix {
    linalg::repeat_diag(x, 2)
}
