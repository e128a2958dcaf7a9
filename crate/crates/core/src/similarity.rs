//! Similarity reconstruction: find `Q = S^* S` with `S b S^-1` adjoint-closed,
//! certify it, and bracket completely bounded norms.
//!
//! Requiring `(S b S^-1)^* = S b^♯ S^-1` for every `b` is the real-linear
//! condition `b^* Q = Q b^♯`, so candidate `Q` form a real subspace of the
//! Hermitian matrices. Among its positive definite members the one with the
//! smallest condition number gives the best similarity.

use rand::Rng;
use serde::Serialize;

use crate::algebra::OperatorAlgebra;
use crate::cone::{MatrixCone, TOL_HERM};
use crate::error::{Error, Result};
use crate::involution::{recover_involution, StarOperation};
use crate::io::{ser_matrices, ser_matrix};
use crate::linalg::{self, frobenius, spectral_norm, CMatrix, RMatrix, RVector, C64};
use crate::random::{self, SampleRng};

/// Smallest eigenvalue a unit-norm solution needs to count as positive definite.
pub const PD_TOL: f64 = 1e-7;
/// Allowed relative defect of `tau(b^♯) = tau(b)^*`.
pub const CERT_TOL: f64 = 1e-7;
pub const PD_RESTARTS: usize = 20;
pub const PD_STEPS: usize = 500;
/// Relative singular-value cutoff for the constraint null space.
pub const SOLVE_TOL: f64 = 1e-9;
const ELLIPSOID_MAX_ITERATIONS: usize = 400_000;

/// A linear map on an algebra given by the images of its basis.
#[derive(Debug, Clone)]
pub struct LinearMap {
    pub domain: OperatorAlgebra,
    pub images: Vec<CMatrix>,
}

impl LinearMap {
    pub fn new(domain: OperatorAlgebra, images: Vec<CMatrix>) -> Result<Self> {
        if images.len() != domain.dim() {
            return Err(Error::DimensionMismatch { expected: domain.dim(), found: images.len() });
        }
        let m = images.first().map_or(0, |x| x.nrows());
        if let Some(bad) = images.iter().find(|x| x.nrows() != m || x.ncols() != m) {
            return Err(Error::DimensionMismatch { expected: m, found: bad.nrows() });
        }
        Ok(Self { domain, images })
    }

    /// `b -> left b right`.
    pub fn conjugation(domain: &OperatorAlgebra, left: &CMatrix, right: &CMatrix) -> Self {
        let images = domain.basis().iter().map(|b| left * b * right).collect();
        Self { domain: domain.clone(), images }
    }

    pub fn target_dim(&self) -> usize {
        self.images.first().map_or(0, |x| x.nrows())
    }

    /// `phi^(n)` on coordinates over the amplified basis.
    pub fn apply_coords(&self, n: usize, coords: &[C64]) -> CMatrix {
        let d = self.domain.dim();
        let m = self.target_dim();
        linalg::from_blocks(n, n, m, |i, j| {
            let mut out = CMatrix::zeros(m, m);
            for (k, img) in self.images.iter().enumerate() {
                let z = coords[(i * n + j) * d + k];
                if z != C64::new(0.0, 0.0) {
                    out += img * z;
                }
            }
            out
        })
    }

    /// `phi^(n)(X)` for `X` in `M_n(domain)`.
    pub fn apply(&self, n: usize, x: &CMatrix) -> Result<CMatrix> {
        Ok(self.apply_coords(n, &self.domain.project_level(n, x)?))
    }
}

/// Real orthonormal basis of the Hermitian `N x N` matrices.
fn hermitian_basis(n: usize) -> Vec<CMatrix> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        out.push(linalg::matrix_unit(n, i, i));
        for j in i + 1..n {
            let mut re = CMatrix::zeros(n, n);
            re[(i, j)] = C64::new(h, 0.0);
            re[(j, i)] = C64::new(h, 0.0);
            out.push(re);
            let mut im = CMatrix::zeros(n, n);
            im[(i, j)] = C64::new(0.0, h);
            im[(j, i)] = C64::new(0.0, -h);
            out.push(im);
        }
    }
    out
}

/// Frobenius-orthonormal basis of `{ Q Hermitian : b^* Q = Q b^♯ for all b }`.
pub fn solve_q(alg: &OperatorAlgebra, star: &dyn StarOperation) -> Result<Vec<CMatrix>> {
    let herm = hermitian_basis(alg.ambient_dim());
    let pairs: Vec<(CMatrix, CMatrix, f64)> = alg
        .basis()
        .iter()
        .map(|b| {
            let bs = star.apply_star(b)?;
            let weight = 1.0 / (1.0 + frobenius(&bs));
            Ok((b.adjoint(), bs, weight))
        })
        .collect::<Result<_>>()?;
    let cols: Vec<RVector> = herm
        .iter()
        .map(|h| {
            let mut v: Vec<C64> = Vec::new();
            for (badj, bs, w) in &pairs {
                let r = (badj * h - h * bs) * C64::new(*w, 0.0);
                v.extend(r.iter().cloned());
            }
            linalg::to_real(&v)
        })
        .collect();
    let a = RMatrix::from_fn(cols[0].len(), cols.len(), |i, j| cols[j][i]);
    Ok(linalg::real_null_space(&a, SOLVE_TOL, 1.0)
        .into_iter()
        .map(|v| {
            let mut q = CMatrix::zeros(alg.ambient_dim(), alg.ambient_dim());
            for (c, h) in v.iter().zip(&herm) {
                q += h * C64::new(*c, 0.0);
            }
            linalg::hermitian_part(&q)
        })
        .collect())
}

fn combine(space: &[CMatrix], c: &RVector) -> CMatrix {
    let n = space[0].nrows();
    let mut q = CMatrix::zeros(n, n);
    for (ci, qi) in c.iter().zip(space) {
        q += qi * C64::new(*ci, 0.0);
    }
    q
}

/// `(v^* Q_i v)_i`, the gradient of `v^* Q(c) v` in the coordinates `c`.
fn quadratic_gradient(space: &[CMatrix], v: &CMatrix) -> RVector {
    RVector::from_fn(space.len(), |i, _| (v.adjoint() * &space[i] * v)[(0, 0)].re)
}

fn extreme_pairs(q: &CMatrix) -> (f64, CMatrix, f64, CMatrix) {
    let (vals, vecs) = linalg::hermitian_eigh(q);
    let n = vals.len();
    (vals[0], CMatrix::from_column_slice(vecs.nrows(), 1, vecs.column(0).as_slice()), vals[n - 1], CMatrix::from_column_slice(vecs.nrows(), 1, vecs.column(n - 1).as_slice()))
}

/// Positive definite member of the span, rescaled to `lambda_min = 1`, found
/// by projected subgradient ascent of `lambda_min` on the unit sphere.
pub fn find_pd(space: &[CMatrix], seed: u64) -> Result<CMatrix> {
    if space.is_empty() {
        return Err(Error::NoPositiveSolution { best_min_eigenvalue: f64::NEG_INFINITY });
    }
    let p = space.len();
    let mut rng: SampleRng = random::seeded(seed);
    let id = linalg::identity(space[0].nrows());
    let mut best: Option<(f64, RVector)> = None;
    for restart in 0..PD_RESTARTS {
        let mut c = if restart == 0 {
            RVector::from_fn(p, |i, _| linalg::inner(&id, &space[i]).re)
        } else {
            RVector::from_fn(p, |_, _| rng.sample(rand_distr::StandardNormal))
        };
        if c.norm() == 0.0 {
            c[0] = 1.0;
        }
        c /= c.norm();
        for step in 1..=PD_STEPS {
            let (lam, v, _, _) = extreme_pairs(&combine(space, &c));
            if best.as_ref().map_or(true, |(b, _)| lam > *b) {
                best = Some((lam, c.clone()));
            }
            let g = quadratic_gradient(space, &v);
            c += g / (step as f64).sqrt();
            c /= c.norm();
        }
    }
    let (lam, c) = best.expect("at least one restart");
    if lam <= PD_TOL {
        return Err(Error::NoPositiveSolution { best_min_eigenvalue: lam });
    }
    Ok(linalg::hermitian_part(&combine(space, &c).unscale(lam)))
}

pub fn condition_number(q: &CMatrix) -> f64 {
    let vals = linalg::hermitian_eigenvalues(q);
    let lo = vals[0];
    if lo <= 0.0 {
        return f64::INFINITY;
    }
    vals[vals.len() - 1] / lo
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionOptimum {
    #[serde(serialize_with = "ser_matrix")]
    pub q: CMatrix,
    pub cond: f64,
    pub space_dim: usize,
    pub iterations: usize,
}

/// Minimize `lambda_max / lambda_min` over the positive definite members of
/// the span, starting from a positive definite `start` in it.
///
/// The condition number is quasi-convex: its sublevel sets
/// `{ lambda_max - k lambda_min <= 0 }` are convex. Fixing the scale by
/// `<Q, start> = |start|^2` leaves a bounded slice, searched by the ellipsoid
/// method (bisection when the slice is one-dimensional).
pub fn minimize_condition(space: &[CMatrix], start: &CMatrix) -> Result<ConditionOptimum> {
    let p = space.len();
    let lam0 = linalg::min_eigenvalue(start);
    if p == 0 || lam0 <= 0.0 {
        return Err(Error::NoPositiveSolution { best_min_eigenvalue: lam0 });
    }
    let c0 = RVector::from_fn(p, |i, _| linalg::inner(start, &space[i]).re);
    let start_cond = condition_number(start);
    if p == 1 {
        return Ok(ConditionOptimum { q: start.clone(), cond: start_cond, space_dim: 1, iterations: 0 });
    }
    // orthonormal basis of the complement of c0
    let u = &c0 / c0.norm();
    let mut w: Vec<RVector> = Vec::with_capacity(p - 1);
    for k in 0..p {
        let e = RVector::from_fn(p, |i, _| if i == k { 1.0 } else { 0.0 });
        let mut basis = vec![u.clone()];
        basis.extend(w.iter().cloned());
        if let Some(v) = linalg::orthogonalize_real(&basis, &e, 1e-6) {
            w.push(v);
        }
        if w.len() == p - 1 {
            break;
        }
    }
    let m = w.len();
    let scale = frobenius(start);
    let radius = scale * scale / lam0 + scale;
    let point = |y: &RVector| -> RVector {
        let mut c = c0.clone();
        for (yi, wi) in y.iter().zip(&w) {
            c.axpy(*yi, wi, 1.0);
        }
        c
    };
    let to_slice = |g: &RVector| RVector::from_fn(m, |i, _| w[i].dot(g));

    let mut best = (start_cond, start.clone());
    let mut iterations = 0;
    // cut direction at y, plus the condition number there
    let cut = |y: &RVector, best: &mut (f64, CMatrix)| -> (RVector, f64, f64) {
        let q = combine(space, &point(y));
        let (lmin, vmin, lmax, vmax) = extreme_pairs(&q);
        if lmin <= 0.0 {
            return (-to_slice(&quadratic_gradient(space, &vmin)), f64::INFINITY, lmin);
        }
        let kappa = lmax / lmin;
        if kappa < best.0 {
            *best = (kappa, q.clone());
        }
        let g = quadratic_gradient(space, &vmax) - quadratic_gradient(space, &vmin) * kappa;
        (to_slice(&g), kappa, lmin)
    };

    if m == 1 {
        let (mut lo, mut hi) = (-radius, radius);
        while iterations < 200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            iterations += 1;
            let (g, _, _) = cut(&RVector::from_element(1, mid), &mut best);
            if g[0] > 0.0 {
                hi = mid;
            } else if g[0] < 0.0 {
                lo = mid;
            } else {
                break;
            }
        }
    } else {
        let mf = m as f64;
        let mut center = RVector::zeros(m);
        let mut shape = RMatrix::identity(m, m) * (radius * radius);
        while iterations < ELLIPSOID_MAX_ITERATIONS {
            iterations += 1;
            let (g, kappa, lmin) = cut(&center, &mut best);
            let pg = &shape * &g;
            let width = g.dot(&pg);
            if !(width > 0.0) || !width.is_finite() {
                break;
            }
            let width = width.sqrt();
            if kappa.is_finite() {
                // the linearized gain of lambda_max - k lambda_min over the
                // ellipsoid bounds how much the condition number can still drop
                if kappa <= best.0 * (1.0 + 1e-13) && width / lmin <= 1e-12 * kappa {
                    break;
                }
            }
            let step = &pg / width;
            center -= &step / (mf + 1.0);
            shape = (&shape - (&step * step.transpose()) * (2.0 / (mf + 1.0))) * (mf * mf / (mf * mf - 1.0));
            shape = (&shape + shape.transpose()) * 0.5;
        }
    }
    let (cond, q) = best;
    let q = linalg::hermitian_part(&q.unscale(linalg::min_eigenvalue(&q)));
    Ok(ConditionOptimum { q, cond, space_dim: p, iterations })
}

#[derive(Debug, Clone, Serialize)]
pub struct SimilarityCertificate {
    #[serde(serialize_with = "ser_matrix")]
    pub q: CMatrix,
    /// Principal square root of `q`.
    #[serde(serialize_with = "ser_matrix")]
    pub s: CMatrix,
    #[serde(skip)]
    pub s_inv: CMatrix,
    pub cond: f64,
    /// `|S| |S^-1| = sqrt(cond)`.
    pub norm_product: f64,
    pub residual_star: f64,
    pub residual_cone: f64,
    /// Sampled PSD elements of the image whose preimage left the cone.
    pub inverse_failures: usize,
    pub cert_tol: f64,
}

/// `tau(b) = S b S^-1` with its image algebra and certificate.
#[derive(Debug, Clone)]
pub struct StarRep {
    pub tau: LinearMap,
    pub image: OperatorAlgebra,
    pub certificate: SimilarityCertificate,
}

impl StarRep {
    /// `tau^(n)(X) = (S ⊗ I) X (S^-1 ⊗ I)`.
    pub fn apply(&self, n: usize, x: &CMatrix) -> CMatrix {
        linalg::repeat_diag(&self.certificate.s, n) * x * linalg::repeat_diag(&self.certificate.s_inv, n)
    }

    /// The inverse similarity as a map on the image algebra.
    pub fn inverse_map(&self) -> LinearMap {
        LinearMap::conjugation(&self.image, &self.certificate.s_inv, &self.certificate.s)
    }
}

/// Build `tau` from a positive definite `q` and certify it: adjoint
/// compatibility on the basis, and order isomorphism on sampled elements at
/// `levels`.
#[allow(clippy::too_many_arguments)]
pub fn build_star_rep(
    alg: &OperatorAlgebra,
    star: &dyn StarOperation,
    cone: &dyn MatrixCone,
    q: &CMatrix,
    levels: &[usize],
    samples: usize,
    seed: u64,
    cert_tol: f64,
) -> Result<StarRep> {
    let (s, s_inv) = linalg::sqrt_pd(q).ok_or(Error::NoPositiveSolution { best_min_eigenvalue: linalg::min_eigenvalue(q) })?;
    let tau = LinearMap::conjugation(alg, &s, &s_inv);
    let mut residual_star: f64 = 0.0;
    for (b, tb) in alg.basis().iter().zip(&tau.images) {
        let tbs = &s * star.apply_star(b)? * &s_inv;
        residual_star = residual_star.max(spectral_norm(&(tbs - tb.adjoint())) / spectral_norm(tb).max(1.0));
    }
    if residual_star > cert_tol {
        return Err(Error::CertificationFailed { residual: residual_star, tolerance: cert_tol });
    }
    let image = alg.conjugate(&s, &s_inv)?;
    let mut rng = random::seeded(seed);
    let mut residual_cone: f64 = 0.0;
    let mut inverse_failures = 0;
    for &n in levels {
        let (sn, sn_inv) = (linalg::repeat_diag(&s, n), linalg::repeat_diag(&s_inv, n));
        for _ in 0..samples {
            let x = cone.sample(n, &mut rng);
            residual_cone = residual_cone.max(linalg::psd_violation(&(&sn * &x * &sn_inv), TOL_HERM));
            let g = random::random_element(&image, n, &mut rng);
            let back = &sn_inv * (g.adjoint() * g) * &sn;
            if !cone.contains(n, &back) {
                inverse_failures += 1;
            }
        }
    }
    let cond = condition_number(q);
    let certificate = SimilarityCertificate {
        q: q.clone(),
        s,
        s_inv,
        cond,
        norm_product: cond.sqrt(),
        residual_star,
        residual_cone,
        inverse_failures,
        cert_tol,
    };
    Ok(StarRep { tau, image, certificate })
}

/// `sqrt(cond(Q)) = |S| |S^-1|`, an upper bound for the cb norm of
/// conjugation by `S` or `S^-1`.
pub fn cb_upper_bound_from_similarity(cert: &SimilarityCertificate) -> f64 {
    cert.cond.sqrt()
}

#[derive(Debug, Clone, Serialize)]
pub struct CbBound {
    pub value: f64,
    pub level: usize,
    pub restarts: usize,
    #[serde(serialize_with = "ser_matrix")]
    pub witness: CMatrix,
}

/// Top singular value with left and right singular vectors.
fn top_singular(x: &CMatrix) -> (f64, CMatrix, CMatrix) {
    let (vals, vecs) = linalg::hermitian_eigh(&(x.adjoint() * x));
    let n = vals.len();
    let sigma = vals[n - 1].max(0.0).sqrt();
    let v = CMatrix::from_column_slice(vecs.nrows(), 1, vecs.column(n - 1).as_slice());
    let u = if sigma > 0.0 { (x * &v).unscale(sigma) } else { v.clone() };
    (sigma, u, v)
}

/// Coordinates of the orthogonal projection of `x` onto `M_k(A)`.
fn level_coords(alg: &OperatorAlgebra, k: usize, x: &CMatrix) -> Vec<C64> {
    let bs = alg.ambient_dim();
    let mut coords = Vec::with_capacity(alg.dim() * k * k);
    for i in 0..k {
        for j in 0..k {
            coords.extend(alg.projection_residual(&linalg::block(x, bs, i, j)).0);
        }
    }
    coords
}

/// Gradient of `log |M(c)|` in the complex coordinates `c`, for
/// `M(c) = sum_j c_j F_j` with `F_j = E_ab ⊗ images[l]`.
fn log_norm_gradient(images: &[CMatrix], k: usize, sigma: f64, u: &CMatrix, v: &CMatrix) -> Vec<C64> {
    let d = images.len();
    let m = images[0].nrows();
    let mut g = vec![C64::new(0.0, 0.0); d * k * k];
    for a in 0..k {
        let ua = u.rows(a * m, m).adjoint();
        for b in 0..k {
            let vb = v.rows(b * m, m).into_owned();
            for (l, img) in images.iter().enumerate() {
                let w = (&ua * img * &vb)[(0, 0)];
                g[(a * k + b) * d + l] = w.conj() / sigma;
            }
        }
    }
    g
}

const CB_STEPS: usize = 300;

/// Lower bound for `|phi|_cb` from `sup |phi^(k)(X)| / |X|` over `X` in
/// `M_k(domain)`, by normalized gradient ascent with restarts. The first
/// restarts start from the swap `sum E_ij ⊗ E_ji` and a random unitary
/// projected into the algebra.
pub fn cb_lower_bound(map: &LinearMap, k: usize, restarts: usize, seed: u64) -> Result<CbBound> {
    if k == 0 {
        return Err(Error::InvalidInput("amplification level must be at least 1".into()));
    }
    let alg = &map.domain;
    let n = alg.ambient_dim();
    let basis = alg.basis().to_vec();
    let mut rng = random::seeded(seed);
    let ratio = |c: &[C64]| -> f64 {
        let x = alg.level_element(k, c);
        let nx = spectral_norm(&x);
        if nx == 0.0 {
            return 0.0;
        }
        spectral_norm(&map.apply_coords(k, c)) / nx
    };
    let mut best: Option<(f64, Vec<C64>)> = None;
    for restart in 0..restarts.max(1) {
        let mut c: Vec<C64> = match restart {
            0 => {
                let swap = CMatrix::from_fn(k * n, k * n, |r, s| {
                    let (i, p) = (r / n, r % n);
                    let (j, q) = (s / n, s % n);
                    if p == j && q == i {
                        C64::new(1.0, 0.0)
                    } else {
                        C64::new(0.0, 0.0)
                    }
                });
                level_coords(alg, k, &swap)
            }
            1 => level_coords(alg, k, &random::random_unitary(k * n, &mut rng)),
            _ => random::gaussian_coords(alg.dim() * k * k, &mut rng),
        };
        if c.iter().all(|z| z.norm() == 0.0) {
            c = random::gaussian_coords(alg.dim() * k * k, &mut rng);
        }
        let mut value = ratio(&c);
        let mut eta = 0.1;
        for _ in 0..CB_STEPS {
            let x = alg.level_element(k, &c);
            let y = map.apply_coords(k, &c);
            let (sx, ux, vx) = top_singular(&x);
            let (sy, uy, vy) = top_singular(&y);
            if sx == 0.0 || sy == 0.0 {
                break;
            }
            let gy = log_norm_gradient(&map.images, k, sy, &uy, &vy);
            let gx = log_norm_gradient(&basis, k, sx, &ux, &vx);
            let g: Vec<C64> = gy.iter().zip(&gx).map(|(a, b)| a - b).collect();
            let gn = g.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let cn = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if gn == 0.0 {
                break;
            }
            let trial: Vec<C64> = c.iter().zip(&g).map(|(a, b)| a + b * (eta * cn / gn)).collect();
            let tv = ratio(&trial);
            if tv > value {
                value = tv;
                let tn = trial.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                c = trial.into_iter().map(|z| z / tn).collect();
                eta = (eta * 1.5).min(1.0);
            } else {
                eta *= 0.5;
                if eta < 1e-12 {
                    break;
                }
            }
        }
        // ties keep the earliest restart
        if best.as_ref().map_or(true, |(b, _)| value > *b) {
            best = Some((value, c));
        }
    }
    let (value, c) = best.expect("at least one restart");
    Ok(CbBound { value, level: k, restarts: restarts.max(1), witness: alg.level_element(k, &c) })
}

#[derive(Debug, Clone)]
pub struct PipelineOptions {
    pub levels: Vec<usize>,
    pub samples: usize,
    pub seed: u64,
    pub cert_tol: f64,
    /// Restarts for the cb lower bound of the inverse similarity; 0 skips it.
    pub cb_restarts: usize,
    /// Amplification level for the cb lower bound; defaults to the ambient dimension.
    pub cb_level: Option<usize>,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self { levels: vec![1, 2, 4], samples: 10, seed: 0, cert_tol: CERT_TOL, cb_restarts: 0, cb_level: None }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SimilarityReport {
    pub space_dim: usize,
    #[serde(serialize_with = "ser_matrices")]
    pub space: Vec<CMatrix>,
    pub involution_bound_2k: f64,
    pub certificate: SimilarityCertificate,
    pub optimizer_iterations: usize,
    pub image_star_closed: bool,
    pub cb_lower: Option<CbBound>,
    pub cb_upper: f64,
}

/// Recover `♯` from the level-1 cone, solve for `Q`, minimize its condition
/// number and certify the resulting similarity.
pub fn reconstruct(cone: &dyn MatrixCone, opts: &PipelineOptions) -> Result<SimilarityReport> {
    let alg = cone.algebra();
    let inv = recover_involution(cone, 1, opts.seed)?;
    let space = solve_q(alg, &inv)?;
    let start = find_pd(&space, opts.seed)?;
    let opt = minimize_condition(&space, &start)?;
    let rep = build_star_rep(alg, &inv, cone, &opt.q, &opts.levels, opts.samples, opts.seed, opts.cert_tol)?;
    let cb_lower = if opts.cb_restarts > 0 {
        let k = opts.cb_level.unwrap_or(alg.ambient_dim());
        Some(cb_lower_bound(&rep.inverse_map(), k, opts.cb_restarts, opts.seed)?)
    } else {
        None
    };
    Ok(SimilarityReport {
        space_dim: space.len(),
        space,
        involution_bound_2k: inv.bound_2k,
        cb_upper: cb_upper_bound_from_similarity(&rep.certificate),
        certificate: rep.certificate,
        optimizer_iterations: opt.iterations,
        image_star_closed: rep.image.is_star_closed(),
        cb_lower,
    })
}
