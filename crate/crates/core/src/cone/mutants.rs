//! Deliberately defective cone families used to exercise the audits.

use super::MatrixCone;
use crate::algebra::OperatorAlgebra;
use crate::cone::TOL_PSD;
use crate::linalg::{self, CMatrix};
use crate::random::{self, SampleRng};

/// Every self-adjoint element is "positive", so `C ∩ (-C)` is the whole
/// Hermitian part and the induced seminorms vanish.
#[derive(Debug, Clone)]
pub struct AllHermitianCone {
    pub algebra: OperatorAlgebra,
}

impl AllHermitianCone {
    pub fn new(algebra: OperatorAlgebra) -> Self {
        Self { algebra }
    }
}

impl MatrixCone for AllHermitianCone {
    fn algebra(&self) -> &OperatorAlgebra {
        &self.algebra
    }

    fn tol_psd(&self) -> f64 {
        TOL_PSD
    }

    fn positive_part(&self, _n: usize, _x: &CMatrix) -> CMatrix {
        CMatrix::zeros(0, 0)
    }

    fn constraint_part(&self, _n: usize, x: &CMatrix) -> Option<CMatrix> {
        Some(x - x.adjoint())
    }

    fn star1(&self, x: &CMatrix) -> CMatrix {
        x.adjoint()
    }

    fn sample(&self, n: usize, rng: &mut SampleRng) -> CMatrix {
        random::random_hermitian_element(&self.algebra, n, rng)
    }

    fn label(&self) -> String {
        "all-hermitian".into()
    }
}

/// PSD matrices whose top-left scalar entry is forced to vanish. Not invariant
/// under conjugation by permutations.
#[derive(Debug, Clone)]
pub struct ZeroedCornerCone {
    pub algebra: OperatorAlgebra,
}

impl ZeroedCornerCone {
    pub fn new(algebra: OperatorAlgebra) -> Self {
        Self { algebra }
    }
}

impl MatrixCone for ZeroedCornerCone {
    fn algebra(&self) -> &OperatorAlgebra {
        &self.algebra
    }

    fn tol_psd(&self) -> f64 {
        TOL_PSD
    }

    fn positive_part(&self, _n: usize, x: &CMatrix) -> CMatrix {
        x.clone()
    }

    fn constraint_part(&self, _n: usize, x: &CMatrix) -> Option<CMatrix> {
        Some(CMatrix::from_element(1, 1, x[(0, 0)]))
    }

    fn star1(&self, x: &CMatrix) -> CMatrix {
        x.adjoint()
    }

    fn sample(&self, n: usize, rng: &mut SampleRng) -> CMatrix {
        let mut g = random::random_element(&self.algebra, n, rng);
        g.column_mut(0).fill(linalg::c(0.0, 0.0));
        // zeroing a column can leave the algebra; project back when it does
        let h = g.adjoint() * g;
        match self.algebra.project_level(n, &h) {
            Ok(coords) => self.algebra.level_element(n, &coords),
            Err(_) => CMatrix::zeros(h.nrows(), h.ncols()),
        }
    }

    fn label(&self) -> String {
        "zeroed-corner".into()
    }
}

/// The trivial cone `{0}`.
#[derive(Debug, Clone)]
pub struct ZeroCone {
    pub algebra: OperatorAlgebra,
}

impl ZeroCone {
    pub fn new(algebra: OperatorAlgebra) -> Self {
        Self { algebra }
    }
}

impl MatrixCone for ZeroCone {
    fn algebra(&self) -> &OperatorAlgebra {
        &self.algebra
    }

    fn tol_psd(&self) -> f64 {
        TOL_PSD
    }

    fn positive_part(&self, _n: usize, _x: &CMatrix) -> CMatrix {
        CMatrix::zeros(0, 0)
    }

    fn constraint_part(&self, _n: usize, x: &CMatrix) -> Option<CMatrix> {
        Some(x.clone())
    }

    fn star1(&self, x: &CMatrix) -> CMatrix {
        x.adjoint()
    }

    fn sample(&self, n: usize, _rng: &mut SampleRng) -> CMatrix {
        let big = n * self.algebra.ambient_dim();
        CMatrix::zeros(big, big)
    }

    fn label(&self) -> String {
        "zero".into()
    }
}
