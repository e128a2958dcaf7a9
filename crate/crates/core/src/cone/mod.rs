//! Cone families `{C_n}` over a matrix algebra and their membership oracles.
//!
//! Every cone handled here has the form
//! `C_n = { X in M_n(A) : L(X) = 0, P(X) is positive semidefinite }`
//! for linear maps `L` (the constraint part) and `P` (the positive part). That
//! shape makes the lineality space `C_n ∩ (-C_n) = ker P ∩ ker L` computable
//! exactly, which the audits rely on.

pub mod audit;
pub mod mutants;

pub use audit::{
    audit_algebraically_admissible, audit_matrix_ordered, audit_star_admissible, estimate_main_constants,
    AxiomCheck, ConeAuditReport, Estimate, MainConstants, Verdict, Witness,
};

use crate::algebra::{OperatorAlgebra, STRUCTURE_TOL};
use crate::error::{Error, Result};
use crate::linalg::{self, frobenius, CMatrix, RMatrix, C64};
use crate::random::{self, SampleRng};
use crate::search;

/// Default relative PSD slack: accept iff `lambda_min >= -TOL_PSD * (1 + |X|)`.
pub const TOL_PSD: f64 = 1e-12;
/// Default relative Hermiticity slack.
pub const TOL_HERM: f64 = 1e-9;

/// A cone family with a linear description, see the module docs.
pub trait MatrixCone {
    /// Level-1 algebra.
    fn algebra(&self) -> &OperatorAlgebra;

    fn tol_psd(&self) -> f64;

    /// The linear image whose positive semidefiniteness defines membership.
    fn positive_part(&self, n: usize, x: &CMatrix) -> CMatrix;

    /// Linear constraints that members must satisfy exactly.
    fn constraint_part(&self, _n: usize, _x: &CMatrix) -> Option<CMatrix> {
        None
    }

    /// The involution the model comes with, applied to a level-1 element.
    fn star1(&self, x: &CMatrix) -> CMatrix;

    /// A random element of `C_n`.
    fn sample(&self, n: usize, rng: &mut SampleRng) -> CMatrix;

    /// Operator norm of a level-`n` element.
    fn operator_norm(&self, x: &CMatrix) -> f64 {
        linalg::spectral_norm(x)
    }

    /// Whether `x` lies in `M_n(A)`.
    fn in_algebra(&self, n: usize, x: &CMatrix) -> bool {
        self.algebra().project_level(n, x).is_ok()
    }

    fn label(&self) -> String;

    /// Entrywise involution and transpose of an `n x m` block matrix.
    fn star(&self, x: &CMatrix) -> CMatrix {
        let bs = self.algebra().ambient_dim();
        let (rows, cols) = (x.nrows() / bs, x.ncols() / bs);
        let mut out = CMatrix::zeros(x.ncols(), x.nrows());
        for i in 0..rows {
            for j in 0..cols {
                let b = x.view((i * bs, j * bs), (bs, bs)).into_owned();
                out.view_mut((j * bs, i * bs), (bs, bs)).copy_from(&self.star1(&b));
            }
        }
        out
    }

    fn unit(&self, n: usize) -> CMatrix {
        self.algebra().level_unit(n)
    }

    /// Relative distance from membership; infinite outside the linear part.
    fn violation(&self, n: usize, x: &CMatrix) -> f64 {
        if !self.in_algebra(n, x) {
            return f64::INFINITY;
        }
        if let Some(l) = self.constraint_part(n, x) {
            if frobenius(&l) > TOL_HERM * (1.0 + frobenius(x)) {
                return f64::INFINITY;
            }
        }
        linalg::psd_violation(&self.positive_part(n, x), TOL_HERM)
    }

    fn contains(&self, n: usize, x: &CMatrix) -> bool {
        self.violation(n, x) <= self.tol_psd()
    }
}

/// Membership verdict; errors when `x` is not in the level-`n` algebra.
pub fn member(cone: &dyn MatrixCone, n: usize, x: &CMatrix) -> Result<bool> {
    let big = n * cone.algebra().ambient_dim();
    if x.nrows() != big || x.ncols() != big {
        return Err(Error::DimensionMismatch { expected: big, found: x.nrows() });
    }
    if !cone.in_algebra(n, x) {
        let (_, residual) = cone.algebra().amplify(n).map(|a| a.projection_residual(x)).unwrap_or((vec![], f64::NAN));
        return Err(Error::Membership { residual });
    }
    Ok(cone.contains(n, x))
}

/// `inf { t >= 0 : t e_n + x in C_n }` bracket.
pub fn unit_shift(cone: &dyn MatrixCone, n: usize, x: &CMatrix) -> Result<search::Bracket> {
    let e = cone.unit(n);
    let upper = 2.0 * cone.operator_norm(x) + 1.0;
    search::threshold(|t| cone.contains(n, &(&e * C64::new(t, 0.0) + x)), upper, search::BISECT_TOL)
}

/// Real matrix of a real-linear map on `M_n(A)`, columns indexed by the real
/// directions `b_k, i b_k` of the amplified basis.
pub(crate) fn real_map_matrix(
    alg: &OperatorAlgebra,
    n: usize,
    mut f: impl FnMut(&CMatrix) -> Vec<C64>,
) -> RMatrix {
    let d = alg.dim() * n * n;
    let mut cols: Vec<linalg::RVector> = Vec::with_capacity(2 * d);
    let mut coords = vec![C64::new(0.0, 0.0); d];
    for k in 0..d {
        for z in [C64::new(1.0, 0.0), linalg::I] {
            coords[k] = z;
            let x = alg.level_element(n, &coords);
            cols.push(linalg::to_real(&f(&x)));
            coords[k] = C64::new(0.0, 0.0);
        }
    }
    let rows = cols.first().map_or(0, |c| c.len());
    RMatrix::from_fn(rows, 2 * d, |i, j| cols[j][i])
}

/// Exact basis of `C_n ∩ (-C_n) = ker P ∩ ker L` (unit Frobenius norm).
pub fn lineality_space(cone: &dyn MatrixCone, n: usize) -> Vec<CMatrix> {
    let alg = cone.algebra();
    let m = real_map_matrix(alg, n, |x| {
        let mut v: Vec<C64> = cone.positive_part(n, x).iter().cloned().collect();
        if let Some(l) = cone.constraint_part(n, x) {
            v.extend(l.iter().cloned());
        }
        v
    });
    linalg::real_null_space(&m, 1e-10, 1.0)
        .into_iter()
        .map(|v| {
            let x = alg.level_element(n, &linalg::from_real(&v));
            let f = frobenius(&x);
            x.unscale(f)
        })
        .collect()
}

/// Exact basis of the real subspace `{X in M_n(A) : L(X) = 0, P(X) Hermitian}`.
pub fn self_adjoint_domain(cone: &dyn MatrixCone, n: usize) -> Vec<CMatrix> {
    let alg = cone.algebra();
    let m = real_map_matrix(alg, n, |x| {
        let p = cone.positive_part(n, x);
        let mut v: Vec<C64> = (&p - p.adjoint()).iter().cloned().collect();
        if let Some(l) = cone.constraint_part(n, x) {
            v.extend(l.iter().cloned());
        }
        v
    });
    linalg::real_null_space(&m, 1e-10, 1.0)
        .into_iter()
        .map(|v| alg.level_element(n, &linalg::from_real(&v)))
        .collect()
}

/// Which of the supported models a [`ConeOracle`] realizes.
#[derive(Debug, Clone)]
pub enum ConeVariant {
    /// `M_n(A) ∩ PSD`.
    Standard { algebra: OperatorAlgebra },
    /// `{X in M_n(B) : (S ⊗ I) X (S ⊗ I)^-1 PSD}`; `image` is `S B S^-1`.
    Similarity { algebra: OperatorAlgebra, s: CMatrix, s_inv: CMatrix, image: OperatorAlgebra },
    /// Sampled functions `f` with values `[[f(q), f'(q)], [0, f(q)]]` at grid
    /// points `q`; members have `f(q)` PSD and `f'(q)` Hermitian.
    FunctionPullback { grid: Vec<f64>, algebra: OperatorAlgebra },
}

#[derive(Debug, Clone)]
pub struct ConeOracle {
    pub variant: ConeVariant,
    pub tol_psd: f64,
}

impl ConeOracle {
    pub fn standard(algebra: OperatorAlgebra) -> Self {
        Self { variant: ConeVariant::Standard { algebra }, tol_psd: TOL_PSD }
    }

    /// Cone pulled back through `b -> S b S^-1`.
    pub fn similarity(algebra: OperatorAlgebra, s: CMatrix) -> Result<Self> {
        let n = algebra.ambient_dim();
        if s.nrows() != n || s.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: s.nrows() });
        }
        let s_inv = s
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidInput("similarity matrix is singular".into()))?;
        let image = algebra.conjugate(&s, &s_inv)?;
        Ok(Self { variant: ConeVariant::Similarity { algebra, s, s_inv, image }, tol_psd: TOL_PSD })
    }

    /// Cone of nonnegative sampled `C^1` functions on `grid`.
    pub fn function_pullback(grid: Vec<f64>) -> Result<Self> {
        crate::cases::validate_grid(&grid)?;
        let m = grid.len();
        let mut basis = Vec::with_capacity(2 * m);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for q in 0..m {
            let mut diag = CMatrix::zeros(2 * m, 2 * m);
            diag[(2 * q, 2 * q)] = C64::new(h, 0.0);
            diag[(2 * q + 1, 2 * q + 1)] = C64::new(h, 0.0);
            basis.push(diag);
            basis.push(linalg::matrix_unit(2 * m, 2 * q, 2 * q + 1));
        }
        let algebra = OperatorAlgebra::from_trusted_basis(2 * m, basis, STRUCTURE_TOL)?;
        Ok(Self { variant: ConeVariant::FunctionPullback { grid, algebra }, tol_psd: TOL_PSD })
    }

    pub fn with_tol_psd(mut self, tol: f64) -> Self {
        self.tol_psd = tol;
        self
    }

    fn pullback_points(&self) -> usize {
        match &self.variant {
            ConeVariant::FunctionPullback { grid, .. } => grid.len(),
            _ => 0,
        }
    }

    /// Values `F(q)` and derivatives `F'(q)` (each `n x n`) of a level-`n`
    /// pullback element.
    pub fn pullback_decode(&self, n: usize, x: &CMatrix) -> Vec<(CMatrix, CMatrix)> {
        let m = self.pullback_points();
        let bs = 2 * m;
        (0..m)
            .map(|q| {
                let f = CMatrix::from_fn(n, n, |i, j| x[(i * bs + 2 * q, j * bs + 2 * q)]);
                let df = CMatrix::from_fn(n, n, |i, j| x[(i * bs + 2 * q, j * bs + 2 * q + 1)]);
                (f, df)
            })
            .collect()
    }

    pub fn pullback_encode(&self, n: usize, samples: &[(CMatrix, CMatrix)]) -> CMatrix {
        let m = self.pullback_points();
        let bs = 2 * m;
        let mut x = CMatrix::zeros(n * bs, n * bs);
        for (q, (f, df)) in samples.iter().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    x[(i * bs + 2 * q, j * bs + 2 * q)] = f[(i, j)];
                    x[(i * bs + 2 * q + 1, j * bs + 2 * q + 1)] = f[(i, j)];
                    x[(i * bs + 2 * q, j * bs + 2 * q + 1)] = df[(i, j)];
                }
            }
        }
        x
    }
}

impl MatrixCone for ConeOracle {
    fn algebra(&self) -> &OperatorAlgebra {
        match &self.variant {
            ConeVariant::Standard { algebra }
            | ConeVariant::Similarity { algebra, .. }
            | ConeVariant::FunctionPullback { algebra, .. } => algebra,
        }
    }

    fn tol_psd(&self) -> f64 {
        self.tol_psd
    }

    fn positive_part(&self, n: usize, x: &CMatrix) -> CMatrix {
        match &self.variant {
            ConeVariant::Standard { .. } => x.clone(),
            ConeVariant::Similarity { s, s_inv, .. } => linalg::repeat_diag(s, n) * x * linalg::repeat_diag(s_inv, n),
            ConeVariant::FunctionPullback { .. } => {
                let parts: Vec<CMatrix> = self.pullback_decode(n, x).into_iter().map(|(f, _)| f).collect();
                linalg::block_diag(&parts)
            }
        }
    }

    fn constraint_part(&self, n: usize, x: &CMatrix) -> Option<CMatrix> {
        match &self.variant {
            ConeVariant::FunctionPullback { .. } => {
                let parts: Vec<CMatrix> =
                    self.pullback_decode(n, x).into_iter().map(|(_, df)| &df - df.adjoint()).collect();
                Some(linalg::block_diag(&parts))
            }
            _ => None,
        }
    }

    fn star1(&self, x: &CMatrix) -> CMatrix {
        match &self.variant {
            ConeVariant::Standard { .. } => x.adjoint(),
            ConeVariant::Similarity { s, s_inv, .. } => s_inv * (s * x * s_inv).adjoint() * s,
            // upper-triangular blocks [[f, f'], [0, f]] map to their conjugates
            ConeVariant::FunctionPullback { .. } => x.map(|z| z.conj()),
        }
    }

    fn sample(&self, n: usize, rng: &mut SampleRng) -> CMatrix {
        match &self.variant {
            ConeVariant::Standard { algebra } => {
                if algebra.is_star_closed() {
                    let g = random::random_element(algebra, n, rng);
                    g.adjoint() * g
                } else {
                    sample_by_shift(self, n, rng)
                }
            }
            ConeVariant::Similarity { s, s_inv, image, .. } => {
                let g = random::random_element(image, n, rng);
                linalg::repeat_diag(s_inv, n) * (g.adjoint() * g) * linalg::repeat_diag(s, n)
            }
            ConeVariant::FunctionPullback { grid, .. } => {
                let samples = crate::cases::random_nonnegative_function(grid, n, rng);
                self.pullback_encode(n, &samples)
            }
        }
    }

    fn operator_norm(&self, x: &CMatrix) -> f64 {
        match &self.variant {
            ConeVariant::FunctionPullback { .. } => {
                let m = self.pullback_points();
                let n = x.nrows() / (2 * m);
                self.pullback_decode(n, x)
                    .into_iter()
                    .map(|(f, df)| {
                        let blk = linalg::from_blocks(2, 2, n, |i, j| match (i, j) {
                            (0, 1) => df.clone(),
                            (1, 0) => CMatrix::zeros(n, n),
                            _ => f.clone(),
                        });
                        linalg::spectral_norm(&blk)
                    })
                    .fold(0.0, f64::max)
            }
            _ => linalg::spectral_norm(x),
        }
    }

    fn in_algebra(&self, n: usize, x: &CMatrix) -> bool {
        match &self.variant {
            ConeVariant::FunctionPullback { .. } => {
                let bs = 2 * self.pullback_points();
                if x.nrows() != n * bs || x.ncols() != n * bs {
                    return false;
                }
                let back = self.pullback_encode(n, &self.pullback_decode(n, x));
                frobenius(&(x - back)) <= STRUCTURE_TOL * (1.0 + frobenius(x))
            }
            _ => self.algebra().project_level(n, x).is_ok(),
        }
    }

    fn label(&self) -> String {
        match &self.variant {
            ConeVariant::Standard { .. } => "standard".into(),
            ConeVariant::Similarity { .. } => "similarity".into(),
            ConeVariant::FunctionPullback { .. } => "pullback".into(),
        }
    }
}

/// Random self-adjoint element of the domain, shifted by the unit until it
/// enters the cone. Fallback sampler for models without a factorized form.
pub fn sample_by_shift(cone: &dyn MatrixCone, n: usize, rng: &mut SampleRng) -> CMatrix {
    use rand::Rng;
    let domain = self_adjoint_domain(cone, n);
    let big = n * cone.algebra().ambient_dim();
    let mut h = CMatrix::zeros(big, big);
    for b in &domain {
        let w: f64 = rng.sample(rand_distr::StandardNormal);
        h += b * C64::new(w, 0.0);
    }
    let extra: f64 = rng.random::<f64>();
    match unit_shift(cone, n, &h) {
        Ok(b) => h + cone.unit(n) * C64::new(b.upper + extra, 0.0),
        Err(_) => cone.unit(n),
    }
}

/// `psi_{n,m}`: view `X` in `M_{2^m}(A)` as a `2^(m-n)` square grid of
/// `M_{2^n}(A)` blocks and replace it by `diag(B_11, ..., B_11)`.
pub fn compress(x: &CMatrix, n: u32, m: u32) -> Result<CMatrix> {
    if m < n {
        return Err(Error::InvalidInput(format!("compression needs m >= n, got n = {n}, m = {m}")));
    }
    let outer = 1usize << m;
    if !x.is_square() || x.nrows() % outer != 0 || x.nrows() == 0 {
        return Err(Error::DimensionMismatch { expected: outer, found: x.nrows() });
    }
    let base = x.nrows() / outer;
    let bs = (1usize << n) * base;
    let b11 = linalg::block(x, bs, 0, 0);
    Ok(linalg::repeat_diag(&b11, 1usize << (m - n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::MAX_DIM;
    use crate::linalg::{matrix_unit, real_matrix};

    fn worked_b() -> OperatorAlgebra {
        OperatorAlgebra::generate(&[real_matrix(2, 2, &[1.0, 1.0, 0.0, 0.0])], false, STRUCTURE_TOL, MAX_DIM).unwrap()
    }

    fn worked_s() -> CMatrix {
        real_matrix(2, 2, &[1.0, 1.0, 0.0, 1.0])
    }

    #[test]
    fn standard_membership_examples() {
        let cone = ConeOracle::standard(OperatorAlgebra::full_matrix_algebra(2));
        assert!(member(&cone, 1, &linalg::identity(2)).unwrap());
        assert!(!member(&cone, 1, &real_matrix(2, 2, &[1.0, 0.0, 0.0, -1.0])).unwrap());
    }

    #[test]
    fn similarity_membership_example() {
        let cone = ConeOracle::similarity(worked_b(), worked_s()).unwrap();
        let b = real_matrix(2, 2, &[1.0, 1.0, 0.0, 0.0]);
        assert!(member(&cone, 1, &b).unwrap());
        assert!(!member(&cone, 1, &(-b)).unwrap());
    }

    #[test]
    fn membership_outside_algebra_is_an_error() {
        let alg = OperatorAlgebra::generate(&[matrix_unit(2, 0, 0)], false, STRUCTURE_TOL, MAX_DIM).unwrap();
        let cone = ConeOracle::standard(alg);
        assert!(matches!(member(&cone, 1, &matrix_unit(2, 0, 1)), Err(Error::Membership { .. })));
    }

    #[test]
    fn similarity_membership_matches_conjugated_standard() {
        let cone = ConeOracle::similarity(worked_b(), worked_s()).unwrap();
        let ConeVariant::Similarity { s, s_inv, image, .. } = &cone.variant else { unreachable!() };
        let standard = ConeOracle::standard(image.clone());
        let mut rng = random::seeded(11);
        for n in [1, 2] {
            for _ in 0..30 {
                let x = random::random_element(cone.algebra(), n, &mut rng);
                let x = &x + cone.star(&x);
                let y = linalg::repeat_diag(s, n) * &x * linalg::repeat_diag(s_inv, n);
                assert_eq!(cone.contains(n, &x), standard.contains(n, &y));
            }
        }
    }

    #[test]
    fn lineality_is_trivial_for_supported_models() {
        let m2 = ConeOracle::standard(OperatorAlgebra::full_matrix_algebra(2));
        let sim = ConeOracle::similarity(worked_b(), worked_s()).unwrap();
        for n in [1, 2] {
            assert!(lineality_space(&m2, n).is_empty());
            assert!(lineality_space(&sim, n).is_empty());
        }
    }

    #[test]
    fn pullback_lineality_is_derivative_only() {
        let cone = ConeOracle::function_pullback(vec![0.0, 0.5, 1.0]).unwrap();
        let lin = lineality_space(&cone, 1);
        assert_eq!(lin.len(), 3);
        for w in lin {
            assert!(cone.contains(1, &w) && cone.contains(1, &(-&w)));
            for (f, _) in cone.pullback_decode(1, &w) {
                assert!(f[(0, 0)].norm() < 1e-12);
            }
        }
    }

    #[test]
    fn samples_are_members() {
        let mut rng = random::seeded(5);
        let cones: Vec<ConeOracle> = vec![
            ConeOracle::standard(OperatorAlgebra::full_matrix_algebra(3)),
            ConeOracle::standard(worked_b()),
            ConeOracle::similarity(worked_b(), worked_s()).unwrap(),
            ConeOracle::function_pullback(crate::cases::default_grid()).unwrap(),
        ];
        for cone in &cones {
            for n in [1, 2] {
                for _ in 0..5 {
                    let x = cone.sample(n, &mut rng);
                    assert!(member(cone, n, &x).unwrap(), "{} level {n}", cone.label());
                }
            }
        }
    }

    #[test]
    fn compress_examples() {
        let b = real_matrix(2, 2, &[2.0, 1.0, 1.0, 3.0]);
        let x = linalg::repeat_diag(&b, 2);
        assert_eq!(compress(&x, 0, 1).unwrap(), x);
        let mut y = CMatrix::from_fn(4, 4, |i, j| C64::new((i * 4 + j) as f64, 1.0));
        y.view_mut((0, 0), (2, 2)).copy_from(&matrix_unit(2, 0, 0));
        let z = compress(&y, 0, 1).unwrap();
        assert_eq!(z, linalg::repeat_diag(&matrix_unit(2, 0, 0), 2));
        assert!(compress(&linalg::identity(3), 0, 1).is_err());
        assert!(compress(&linalg::identity(4), 2, 1).is_err());
    }

    #[test]
    fn unit_shift_of_diag() {
        let cone = ConeOracle::standard(OperatorAlgebra::full_matrix_algebra(2));
        let b = unit_shift(&cone, 1, &real_matrix(2, 2, &[1.0, 0.0, 0.0, -1.0])).unwrap();
        assert!((b.midpoint() - 1.0).abs() < 1e-10);
    }
}
