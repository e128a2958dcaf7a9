//! Two worked settings: the doubling construction that turns a bounded
//! representation into a J-symmetric one (and the similarity pipeline run on
//! it), and the sampled `C^1[0, 1]` functions embedded as 2x2 upper-triangular
//! blocks.

use rand::Rng;
use serde::Serialize;

use crate::algebra::{OperatorAlgebra, STRUCTURE_TOL};
use crate::cone::{audit_star_admissible, ConeAuditReport, ConeOracle, MatrixCone};
use crate::error::{Error, Result};
use crate::involution::{recover_involution, verify_matrix_involution};
use crate::io::{ser_matrices, ser_matrix};
use crate::linalg::{self, spectral_norm, CMatrix, C64};
use crate::random::{self, SampleRng};
use crate::similarity::{
    build_star_rep, cb_lower_bound, cb_upper_bound_from_similarity, find_pd, minimize_condition, solve_q, CbBound,
    LinearMap, SimilarityCertificate, CERT_TOL,
};

/// Tolerance on `|rho(a^*) - J rho(a)^* J|` over the basis.
pub const JSYM_TOL: f64 = 1e-10;
/// Tolerance on `| |rho^(n)(a)| - |rho^(n)(a^*)| |`.
pub const NORM_IDENTITY_TOL: f64 = 1e-9;
/// Tolerance between the closed-form norm and the direct operator norm.
pub const C1_NORM_TOL: f64 = 1e-10;

/// Equispaced points `j / 64`, `j = 0..=64`.
pub fn default_grid() -> Vec<f64> {
    equispaced_grid(65)
}

/// `m` equispaced points from 0 to 1 inclusive (`m >= 2`), or `{1}` when `m = 1`.
pub fn equispaced_grid(m: usize) -> Vec<f64> {
    if m <= 1 {
        return vec![1.0];
    }
    (0..m).map(|j| j as f64 / (m - 1) as f64).collect()
}

pub fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidInput("grid must contain at least one point".into()));
    }
    if grid.iter().any(|q| !q.is_finite() || !(0.0..=1.0).contains(q)) {
        return Err(Error::InvalidInput("grid points must lie in [0, 1]".into()));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("grid must be strictly increasing".into()));
    }
    Ok(())
}

/// Random `(F(q), F'(q))` pairs with `F(q)` PSD and `F'(q)` Hermitian, the
/// level-`n` members of the pullback cone.
pub fn random_nonnegative_function(grid: &[f64], n: usize, rng: &mut SampleRng) -> Vec<(CMatrix, CMatrix)> {
    grid.iter()
        .map(|_| {
            let g = random::gaussian_matrix(n, n, rng);
            let h = random::gaussian_matrix(n, n, rng);
            (g.adjoint() * g, linalg::hermitian_part(&h))
        })
        .collect()
}

/// `rho(a) = pi(a) ⊕ pi(a^*)^*` together with the swap `J`.
#[derive(Debug, Clone)]
pub struct JSymmetricRep {
    pub base: LinearMap,
    pub doubled: LinearMap,
    pub j: CMatrix,
    /// `max_k |rho(b_k^*) - J rho(b_k)^* J|`.
    pub residual: f64,
}

/// Swap `J(x ⊕ y) = y ⊕ x` on `C^m ⊕ C^m`.
pub fn swap_matrix(m: usize) -> CMatrix {
    let mut j = CMatrix::zeros(2 * m, 2 * m);
    for i in 0..m {
        j[(i, m + i)] = C64::new(1.0, 0.0);
        j[(m + i, i)] = C64::new(1.0, 0.0);
    }
    j
}

fn apply_level_one(map: &LinearMap, x: &CMatrix) -> Result<CMatrix> {
    map.apply(1, x)
}

pub fn j_symmetrize(pi: &LinearMap) -> Result<JSymmetricRep> {
    let alg = &pi.domain;
    if !alg.is_star_closed() {
        return Err(Error::SourceNotStarClosed);
    }
    let images = alg
        .basis()
        .iter()
        .map(|b| {
            let first = apply_level_one(pi, b)?;
            let second = apply_level_one(pi, &b.adjoint())?.adjoint();
            Ok(linalg::block_diag(&[first, second]))
        })
        .collect::<Result<Vec<_>>>()?;
    let doubled = LinearMap::new(alg.clone(), images)?;
    let j = swap_matrix(pi.target_dim());
    let mut residual: f64 = 0.0;
    for (b, rb) in alg.basis().iter().zip(&doubled.images) {
        let lhs = apply_level_one(&doubled, &b.adjoint())?;
        residual = residual.max(spectral_norm(&(lhs - &j * rb.adjoint() * &j)));
    }
    Ok(JSymmetricRep { base: pi.clone(), doubled, j, residual })
}

#[derive(Debug, Clone, Serialize)]
pub struct NormIdentityReport {
    pub levels: Vec<usize>,
    pub samples: usize,
    pub max_deviation: f64,
    pub holds: bool,
    /// Element with the largest deviation.
    #[serde(serialize_with = "crate::io::ser_opt_matrix")]
    pub witness: Option<CMatrix>,
    pub witness_level: usize,
}

/// `|phi^(n)(a)| = |phi^(n)(a^*)|` on random `a` in `M_n(A)`.
pub fn norm_identity(map: &LinearMap, levels: &[usize], samples: usize, seed: u64) -> Result<NormIdentityReport> {
    if !map.domain.is_star_closed() {
        return Err(Error::SourceNotStarClosed);
    }
    let mut rng = random::seeded(seed);
    let mut report = NormIdentityReport {
        levels: levels.to_vec(),
        samples,
        max_deviation: 0.0,
        holds: true,
        witness: None,
        witness_level: 0,
    };
    for &n in levels {
        for _ in 0..samples {
            let a = random::random_element(&map.domain, n, &mut rng);
            let lhs = spectral_norm(&map.apply(n, &a)?);
            let rhs = spectral_norm(&map.apply(n, &a.adjoint())?);
            let dev = (lhs - rhs).abs();
            if dev > report.max_deviation {
                report.max_deviation = dev;
                report.witness = Some(a);
                report.witness_level = n;
            }
        }
    }
    report.holds = report.max_deviation <= NORM_IDENTITY_TOL;
    Ok(report)
}

pub fn jsym_norm_identity(rep: &JSymmetricRep, levels: &[usize], samples: usize, seed: u64) -> Result<NormIdentityReport> {
    norm_identity(&rep.doubled, levels, samples, seed)
}

/// Cone model of `rho^(n)(M_n(A)^+)` for `rho(a) = S^-1 a S ⊕ S^* a S^-*`:
/// `rho = T^-1 (a ⊕ a) T` with `T = S ⊕ S^-*`.
pub fn doubled_similarity_cone(alg: &OperatorAlgebra, s: &CMatrix) -> Result<ConeOracle> {
    let s_inv = s.clone().try_inverse().ok_or_else(|| Error::InvalidInput("similarity matrix is singular".into()))?;
    let t = linalg::block_diag(&[s.clone(), s_inv.adjoint()]);
    let t_inv = linalg::block_diag(&[s_inv.clone(), s.adjoint()]);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let diag: Vec<CMatrix> = alg.basis().iter().map(|b| linalg::repeat_diag(b, 2).scale(h)).collect();
    let diagonal = OperatorAlgebra::from_trusted_basis(2 * alg.ambient_dim(), diag, STRUCTURE_TOL)?;
    let image = diagonal.conjugate(&t_inv, &t)?;
    ConeOracle::similarity(image, t)
}

#[derive(Debug, Clone)]
pub struct KadisonOptions {
    pub levels: Vec<usize>,
    pub samples: usize,
    pub seed: u64,
    pub cb_level: Option<usize>,
    pub cb_restarts: usize,
    pub cert_tol: f64,
}

impl Default for KadisonOptions {
    fn default() -> Self {
        Self { levels: vec![1, 2], samples: 40, seed: 0, cb_level: None, cb_restarts: 6, cert_tol: CERT_TOL }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct KadisonReport {
    pub jsym_residual: f64,
    pub audit: ConeAuditReport,
    /// The unit-domination constant stays at most 1 (up to `1e-6`).
    pub r4_at_most_one: bool,
    pub involution_span_dim: usize,
    /// Entrywise versus independent recovery at level 2.
    pub involution_level2_residual: f64,
    pub space_dim: usize,
    pub certificate: SimilarityCertificate,
    /// `max_k |tau(rho(b_k^*)) - tau(rho(b_k))^*|`: whether `tau ∘ rho` is a *-representation.
    pub star_rep_residual: f64,
    pub cb_lower: CbBound,
    pub cb_upper: f64,
    #[serde(serialize_with = "ser_matrix")]
    pub planted_s: CMatrix,
    pub planted_cond: f64,
}

/// Run the full chain on `pi = S^-1 (·) S` over a star-closed `A`.
pub fn kadison_pipeline(alg: &OperatorAlgebra, s: &CMatrix, opts: &KadisonOptions) -> Result<KadisonReport> {
    let s_inv = s.clone().try_inverse().ok_or_else(|| Error::InvalidInput("similarity matrix is singular".into()))?;
    let pi = LinearMap::conjugation(alg, &s_inv, s);
    let rep = j_symmetrize(&pi)?;
    let cone = doubled_similarity_cone(alg, s)?;
    let audit = audit_star_admissible(&cone, &opts.levels, opts.samples, opts.seed);
    let r4_at_most_one = audit.r4.as_ref().is_some_and(|e| e.value <= 1.0 + 1e-6);
    let b = cone.algebra().clone();
    let inv = recover_involution(&cone, 1, opts.seed)?;
    let inv2 = recover_involution(&cone, 2, opts.seed)?;
    let cmp = verify_matrix_involution(&inv, &inv2, 10, opts.seed)?;
    let space = solve_q(&b, &inv)?;
    let start = find_pd(&space, opts.seed)?;
    let opt = minimize_condition(&space, &start)?;
    let star_rep = build_star_rep(&b, &inv, &cone, &opt.q, &opts.levels, opts.samples.min(20), opts.seed, opts.cert_tol)?;
    let cert = &star_rep.certificate;
    let mut star_rep_residual: f64 = 0.0;
    for (a, ra) in alg.basis().iter().zip(&rep.doubled.images) {
        let lhs = &cert.s * rep.doubled.apply(1, &a.adjoint())? * &cert.s_inv;
        let rhs = (&cert.s * ra * &cert.s_inv).adjoint();
        star_rep_residual = star_rep_residual.max(spectral_norm(&(lhs - &rhs)) / spectral_norm(&rhs).max(1.0));
    }
    let k = opts.cb_level.unwrap_or(alg.ambient_dim());
    let cb_lower = cb_lower_bound(&rep.doubled, k, opts.cb_restarts, opts.seed)?;
    let planted_cond = crate::similarity::condition_number(&(s.adjoint() * s));
    Ok(KadisonReport {
        jsym_residual: rep.residual,
        audit,
        r4_at_most_one,
        involution_span_dim: inv.span_dim,
        involution_level2_residual: cmp.max_residual,
        space_dim: space.len(),
        cb_upper: cb_upper_bound_from_similarity(cert),
        certificate: star_rep.certificate,
        star_rep_residual,
        cb_lower,
        planted_s: s.clone(),
        planted_cond,
    })
}

/// Function and derivative values of a sampled `C^1` function.
#[derive(Debug, Clone, Serialize)]
pub struct C1Sample {
    pub grid: Vec<f64>,
    #[serde(serialize_with = "ser_complex")]
    pub f_values: Vec<C64>,
    #[serde(serialize_with = "ser_complex")]
    pub f_derivs: Vec<C64>,
}

fn ser_complex<S: serde::Serializer>(v: &[C64], s: S) -> std::result::Result<S::Ok, S::Error> {
    let pairs: Vec<[f64; 2]> = v.iter().map(|z| [z.re, z.im]).collect();
    serde::Serialize::serialize(&pairs, s)
}

impl C1Sample {
    pub fn new(grid: Vec<f64>, f_values: Vec<C64>, f_derivs: Vec<C64>) -> Result<Self> {
        validate_grid(&grid)?;
        if f_values.len() != grid.len() || f_derivs.len() != grid.len() {
            return Err(Error::DimensionMismatch { expected: grid.len(), found: f_values.len().min(f_derivs.len()) });
        }
        Ok(Self { grid, f_values, f_derivs })
    }

    /// Samples of `f` and `f'` given as functions.
    pub fn from_fn(grid: Vec<f64>, f: impl Fn(f64) -> C64, df: impl Fn(f64) -> C64) -> Result<Self> {
        let values = grid.iter().map(|&q| f(q)).collect();
        let derivs = grid.iter().map(|&q| df(q)).collect();
        Self::new(grid, values, derivs)
    }

    pub fn sup_value(&self) -> f64 {
        self.f_values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn sup_deriv(&self) -> f64 {
        self.f_derivs.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Block diagonal matrix of `[[f(q), f'(q)], [0, f(q)]]` over the grid.
pub fn c1_embed(sample: &C1Sample) -> CMatrix {
    let blocks: Vec<CMatrix> = sample
        .f_values
        .iter()
        .zip(&sample.f_derivs)
        .map(|(&f, &df)| CMatrix::from_row_slice(2, 2, &[f, df, C64::new(0.0, 0.0), f]))
        .collect();
    linalg::block_diag(&blocks)
}

/// Norm of the 2x2 block `[[f, f'], [0, f]]` in closed form.
pub fn block_norm(f: C64, df: C64) -> f64 {
    let (a, b) = (f.norm(), df.norm());
    (0.5 * (2.0 * a * a + b * b + b * (4.0 * a * a + b * b).sqrt())).sqrt()
}

/// Closed-form sup of the block norms, checked against the operator norm of
/// [`c1_embed`] (the largest spectral norm among its diagonal blocks).
pub fn c1_norm(sample: &C1Sample) -> Result<f64> {
    let pairs = || sample.f_values.iter().zip(&sample.f_derivs);
    let value = pairs().map(|(&f, &df)| block_norm(f, df)).fold(0.0, f64::max);
    let direct = pairs()
        .map(|(&f, &df)| spectral_norm(&CMatrix::from_row_slice(2, 2, &[f, df, C64::new(0.0, 0.0), f])))
        .fold(0.0, f64::max);
    if (value - direct).abs() > C1_NORM_TOL * value.max(1.0) {
        return Err(Error::FormulaMismatch { sqrt_route: value, direct });
    }
    Ok(value)
}

#[derive(Debug, Clone, Serialize)]
pub struct InequalityReport {
    pub samples: usize,
    /// `|f| >= max(|f|_inf, |f'|_inf) / sqrt 2` failures.
    pub upper_violations: usize,
    /// `max(|f|_inf, |f'|_inf) / sqrt 2 >= (|f|_inf + |f'|_inf) / (2 sqrt 2)` failures.
    pub lower_violations: usize,
    /// Smallest `|f| / (max(...) / sqrt 2)` seen.
    pub tightest_ratio: f64,
    pub holds: bool,
}

/// Both norm comparisons on random samples over `grid`.
pub fn c1_inequality_check(grid: &[f64], samples: usize, seed: u64) -> Result<InequalityReport> {
    validate_grid(grid)?;
    let mut rng = random::seeded(seed);
    let mut report =
        InequalityReport { samples, upper_violations: 0, lower_violations: 0, tightest_ratio: f64::INFINITY, holds: true };
    let slack = 1e-12;
    for _ in 0..samples {
        // vary the relative size of values and derivatives
        let sv: f64 = (rng.random::<f64>() * 6.0 - 3.0).exp();
        let sd: f64 = (rng.random::<f64>() * 6.0 - 3.0).exp();
        let values = (0..grid.len()).map(|_| random::complex_gaussian(&mut rng) * sv).collect();
        let derivs = (0..grid.len()).map(|_| random::complex_gaussian(&mut rng) * sd).collect();
        let sample = C1Sample::new(grid.to_vec(), values, derivs)?;
        let norm = c1_norm(&sample)?;
        let (fi, di) = (sample.sup_value(), sample.sup_deriv());
        let middle = fi.max(di) / std::f64::consts::SQRT_2;
        let one_norm = (fi + di) / (2.0 * std::f64::consts::SQRT_2);
        if norm < middle * (1.0 - slack) {
            report.upper_violations += 1;
        }
        if middle < one_norm * (1.0 - slack) {
            report.lower_violations += 1;
        }
        report.tightest_ratio = report.tightest_ratio.min(norm / middle);
    }
    report.holds = report.upper_violations == 0 && report.lower_violations == 0;
    Ok(report)
}

/// `|c + d| / |c|` for `c = eps (1 - cos 2 pi k x)` and `d = 2 eps - c`, both
/// nonnegative; the sum is the constant `2 eps`.
pub fn c1_condition1_decay(k: usize, epsilon: f64, grid: &[f64]) -> Result<f64> {
    validate_grid(grid)?;
    if grid.len() < 4 * k {
        return Err(Error::GridTooCoarse { points: grid.len(), required: 4 * k });
    }
    let w = 2.0 * std::f64::consts::PI * k as f64;
    let c = C1Sample::from_fn(
        grid.to_vec(),
        |x| C64::new(epsilon * (1.0 - (w * x).cos()), 0.0),
        |x| C64::new(epsilon * w * (w * x).sin(), 0.0),
    )?;
    let d = C1Sample::from_fn(
        grid.to_vec(),
        |x| C64::new(2.0 * epsilon - epsilon * (1.0 - (w * x).cos()), 0.0),
        |x| C64::new(-epsilon * w * (w * x).sin(), 0.0),
    )?;
    let sum = C1Sample::new(
        grid.to_vec(),
        c.f_values.iter().zip(&d.f_values).map(|(a, b)| a + b).collect(),
        c.f_derivs.iter().zip(&d.f_derivs).map(|(a, b)| a + b).collect(),
    )?;
    Ok(c1_norm(&sum)? / c1_norm(&c)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct DecayPoint {
    pub k: usize,
    pub ratio: f64,
    pub bound: f64,
}

/// `(k, ratio, sqrt 2 / (pi k))` for each frequency.
pub fn decay_table(ks: &[usize], grid: &[f64]) -> Result<Vec<DecayPoint>> {
    ks.iter()
        .map(|&k| {
            Ok(DecayPoint {
                k,
                ratio: c1_condition1_decay(k, 1.0, grid)?,
                bound: std::f64::consts::SQRT_2 / (std::f64::consts::PI * k as f64),
            })
        })
        .collect()
}

/// Matrices of the doubled representation, for reporting.
#[derive(Debug, Clone, Serialize)]
pub struct DoubledImages {
    #[serde(serialize_with = "ser_matrices")]
    pub images: Vec<CMatrix>,
    #[serde(serialize_with = "ser_matrix")]
    pub j: CMatrix,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::MAX_DIM;
    use crate::linalg::{c, frobenius, matrix_unit, real_matrix};

    fn worked() -> (OperatorAlgebra, CMatrix) {
        let alg = OperatorAlgebra::generate(&[matrix_unit(2, 0, 0)], false, STRUCTURE_TOL, MAX_DIM).unwrap();
        (alg, real_matrix(2, 2, &[1.0, 1.0, 0.0, 1.0]))
    }

    #[test]
    fn identity_doubling_is_exact() {
        let alg = OperatorAlgebra::full_matrix_algebra(2);
        let pi = LinearMap::new(alg.clone(), alg.basis().to_vec()).unwrap();
        let rep = j_symmetrize(&pi).unwrap();
        assert_eq!(rep.residual, 0.0);
        for (b, r) in alg.basis().iter().zip(&rep.doubled.images) {
            assert_eq!(r, &linalg::repeat_diag(b, 2));
        }
    }

    #[test]
    fn worked_doubling_restricts_to_pi() {
        let (alg, s) = worked();
        let pi = LinearMap::conjugation(&alg, &s.clone().try_inverse().unwrap(), &s);
        let rep = j_symmetrize(&pi).unwrap();
        assert!(rep.residual <= JSYM_TOL);
        for (p, r) in pi.images.iter().zip(&rep.doubled.images) {
            assert!(frobenius(&(linalg::block(r, 2, 0, 0) - p)) <= 1e-12);
        }
        assert!(jsym_norm_identity(&rep, &[1, 2], 20, 1).unwrap().holds);
        // on the diagonal algebra pi(a^*) is the entrywise conjugate of pi(a)
        assert!(norm_identity(&pi, &[1], 50, 1).unwrap().holds);
        let m2 = OperatorAlgebra::full_matrix_algebra(2);
        let full = LinearMap::conjugation(&m2, &s.clone().try_inverse().unwrap(), &s);
        assert!(!norm_identity(&full, &[1], 50, 1).unwrap().holds);
    }

    #[test]
    fn non_closed_source_is_rejected() {
        let alg = OperatorAlgebra::generate(&[real_matrix(2, 2, &[1.0, 1.0, 0.0, 0.0])], false, STRUCTURE_TOL, MAX_DIM)
            .unwrap();
        let pi = LinearMap::new(alg.clone(), alg.basis().to_vec()).unwrap();
        assert!(matches!(j_symmetrize(&pi), Err(Error::SourceNotStarClosed)));
    }

    #[test]
    fn embed_examples() {
        let one = C1Sample::from_fn(default_grid(), |_| c(1.0, 0.0), |_| c(0.0, 0.0)).unwrap();
        assert_eq!(c1_embed(&one), linalg::identity(2 * 65));
        let s = C1Sample::from_fn(vec![1.0], |x| c(x, 0.0), |_| c(1.0, 0.0)).unwrap();
        assert_eq!(c1_embed(&s), real_matrix(2, 2, &[1.0, 1.0, 0.0, 1.0]));
        let s = C1Sample::from_fn(vec![0.0, 1.0], |x| c(x, 0.0), |_| c(1.0, 0.0)).unwrap();
        let expected = linalg::block_diag(&[real_matrix(2, 2, &[0.0, 1.0, 0.0, 0.0]), real_matrix(2, 2, &[1.0, 1.0, 0.0, 1.0])]);
        assert_eq!(c1_embed(&s), expected);
    }

    #[test]
    fn norm_examples() {
        let one = C1Sample::from_fn(default_grid(), |_| c(1.0, 0.0), |_| c(0.0, 0.0)).unwrap();
        assert!((c1_norm(&one).unwrap() - 1.0).abs() < 1e-12);
        let s = C1Sample::from_fn(vec![1.0], |_| c(1.0, 0.0), |_| c(1.0, 0.0)).unwrap();
        assert!((c1_norm(&s).unwrap() - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
        let s = C1Sample::from_fn(default_grid(), |_| c(0.0, 0.0), |_| c(2.0, 0.0)).unwrap();
        assert!((c1_norm(&s).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn decay_needs_resolution() {
        assert!(matches!(c1_condition1_decay(32, 1.0, &default_grid()), Err(Error::GridTooCoarse { .. })));
        let grid = equispaced_grid(65);
        let r4 = c1_condition1_decay(4, 1.0, &grid).unwrap();
        let r8 = c1_condition1_decay(8, 1.0, &grid).unwrap();
        assert!(r4 <= 0.25 && r8 < r4);
    }

    #[test]
    fn grid_validation() {
        assert!(validate_grid(&[0.0, 0.5, 1.0]).is_ok());
        assert!(validate_grid(&[0.5, 0.5]).is_err());
        assert!(validate_grid(&[1.5]).is_err());
        assert!(validate_grid(&[]).is_err());
    }
}
