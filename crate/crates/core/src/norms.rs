//! Norms induced by an order unit: `|a| = inf { r : r e ± a in C }` on
//! self-adjoint elements and `|x| = sqrt(|x^♯ x|)` in general.

use serde::Serialize;

use crate::cone::{MatrixCone, TOL_HERM};
use crate::error::{Error, Result};
use crate::involution::StarOperation;
use crate::io::ser_matrix;
use crate::linalg::{self, frobenius, CMatrix, C64};
use crate::random;
use crate::search::{self, Bracket};

/// Pre-C*-seminorm below which a direction counts as a kernel direction.
pub const NULL_TOL: f64 = 1e-6;
/// Shifts used by the closedness surrogate, largest first.
pub const ARCHIMEDEAN_SHIFTS: [f64; 4] = [1e-2, 1e-4, 1e-6, 1e-8];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormReport {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub iterations: usize,
    pub oracle_calls: usize,
}

impl NormReport {
    fn from_bracket(b: Bracket) -> Self {
        Self { value: b.upper, lower: b.lower, upper: b.upper, iterations: b.iterations, oracle_calls: b.calls }
    }
}

fn check_shape(cone: &dyn MatrixCone, n: usize, x: &CMatrix) -> Result<()> {
    let big = n * cone.algebra().ambient_dim();
    if x.nrows() != big || x.ncols() != big {
        return Err(Error::DimensionMismatch { expected: big, found: x.nrows() });
    }
    if !cone.in_algebra(n, x) {
        let residual = cone.algebra().amplify(n).map(|a| a.projection_residual(x).1).unwrap_or(f64::NAN);
        return Err(Error::Membership { residual });
    }
    Ok(())
}

fn symmetric_threshold(cone: &dyn MatrixCone, n: usize, y: &CMatrix, upper: f64, bisect_tol: f64, squared: bool) -> Result<Bracket> {
    let e = cone.unit(n);
    search::threshold(
        |r| {
            let t = if squared { r * r } else { r };
            let shift = &e * C64::new(t, 0.0);
            cone.contains(n, &(&shift + y)) && cone.contains(n, &(&shift - y))
        },
        upper,
        bisect_tol,
    )
}

/// Order-unit seminorm of a `♯`-self-adjoint element.
pub fn order_unit_seminorm(
    cone: &dyn MatrixCone,
    star: &dyn StarOperation,
    n: usize,
    a: &CMatrix,
    bisect_tol: f64,
) -> Result<NormReport> {
    check_shape(cone, n, a)?;
    let defect = frobenius(&(a - star.apply_star(a)?));
    if defect > TOL_HERM * (1.0 + frobenius(a)) {
        return Err(Error::NotSelfAdjoint { defect });
    }
    let upper = 2.0 * linalg::spectral_norm(a) + 1.0;
    Ok(NormReport::from_bracket(symmetric_threshold(cone, n, a, upper, bisect_tol, false)?))
}

/// `|x| = sqrt(|x^♯ x|)`, cross-checked against the direct form
/// `inf { r : r^2 e ± x^♯ x in C }`.
pub fn pre_cstar_norm(
    cone: &dyn MatrixCone,
    star: &dyn StarOperation,
    n: usize,
    x: &CMatrix,
    bisect_tol: f64,
) -> Result<NormReport> {
    check_shape(cone, n, x)?;
    let y = star.apply_star(x)? * x;
    let via_sqrt = order_unit_seminorm(cone, star, n, &y, bisect_tol)?;
    let value = via_sqrt.value.sqrt();
    let direct = symmetric_threshold(cone, n, &y, (2.0 * linalg::spectral_norm(&y) + 1.0).sqrt(), bisect_tol, true)?;
    if (direct.upper - value).abs() > 2.0 * bisect_tol * (1.0 + value) {
        return Err(Error::FormulaMismatch { sqrt_route: value, direct: direct.upper });
    }
    Ok(NormReport {
        value,
        lower: via_sqrt.lower.sqrt(),
        upper: value,
        iterations: via_sqrt.iterations + direct.iterations,
        oracle_calls: via_sqrt.oracle_calls + direct.calls,
    })
}

/// Both routes to `|x|`, for callers that want to inspect the agreement.
pub fn pre_cstar_norm_routes(
    cone: &dyn MatrixCone,
    star: &dyn StarOperation,
    n: usize,
    x: &CMatrix,
    bisect_tol: f64,
) -> Result<(f64, f64)> {
    check_shape(cone, n, x)?;
    let y = star.apply_star(x)? * x;
    let via_sqrt = order_unit_seminorm(cone, star, n, &y, bisect_tol)?.value.sqrt();
    let direct = symmetric_threshold(cone, n, &y, (2.0 * linalg::spectral_norm(&y) + 1.0).sqrt(), bisect_tol, true)?;
    Ok((via_sqrt, direct.upper))
}

/// Basis of `{ x : |x| <= NULL_TOL }` in `M_n(A)`.
///
/// Thresholds `|·|` on the orthonormal amplified basis, then keeps a small
/// direction only if random combinations with the directions already kept stay
/// below the threshold.
pub fn null_space(cone: &dyn MatrixCone, star: &dyn StarOperation, n: usize, bisect_tol: f64) -> Result<Vec<CMatrix>> {
    let alg = cone.algebra();
    let d = alg.dim() * n * n;
    let mut coords = vec![C64::new(0.0, 0.0); d];
    let mut small = Vec::new();
    for k in 0..d {
        coords[k] = C64::new(1.0, 0.0);
        let b = alg.level_element(n, &coords);
        coords[k] = C64::new(0.0, 0.0);
        if pre_cstar_norm(cone, star, n, &b, bisect_tol)?.value <= NULL_TOL {
            small.push(b);
        }
    }
    let mut rng = random::seeded(0x6e75_6c6c);
    let mut kept: Vec<CMatrix> = Vec::new();
    for b in small {
        let mut ok = true;
        for _ in 0..3 {
            let mut combo = &b * random::complex_gaussian(&mut rng);
            for k in &kept {
                combo += k * random::complex_gaussian(&mut rng);
            }
            let norm = frobenius(&combo);
            if norm > 0.0 && pre_cstar_norm(cone, star, n, &combo.unscale(norm), bisect_tol)?.value > NULL_TOL {
                ok = false;
                break;
            }
        }
        if ok {
            kept.push(b);
        }
    }
    Ok(kept)
}

#[derive(Debug, Clone, Serialize)]
pub struct ArchimedeanReport {
    pub level: usize,
    pub samples: usize,
    pub order_unit_failures: usize,
    pub archimedean_failures: usize,
    pub passed: bool,
    #[serde(serialize_with = "crate::io::ser_opt_matrix")]
    pub witness: Option<CMatrix>,
}

/// For random `♯`-self-adjoint `a`: `r e + a in C` at `r = |a| + tol`, and
/// membership of `a + t e` for `t` down to `1e-8` at the boundary forces
/// membership of the boundary point itself within `tol_psd`.
pub fn check_order_unit_archimedean(
    cone: &dyn MatrixCone,
    star: &dyn StarOperation,
    n: usize,
    samples: usize,
    seed: u64,
    bisect_tol: f64,
) -> Result<ArchimedeanReport> {
    let mut rng = random::seeded(seed);
    let e = cone.unit(n);
    let mut report = ArchimedeanReport {
        level: n,
        samples,
        order_unit_failures: 0,
        archimedean_failures: 0,
        passed: true,
        witness: None,
    };
    for _ in 0..samples {
        let g = random::random_element(cone.algebra(), n, &mut rng);
        let a = (&g + star.apply_star(&g)?).scale(0.5);
        let norm = match order_unit_seminorm(cone, star, n, &a, bisect_tol) {
            Ok(r) => r.value,
            Err(Error::UnboundedAbove { .. }) => {
                report.order_unit_failures += 1;
                report.witness.get_or_insert(a);
                continue;
            }
            Err(err) => return Err(err),
        };
        let r = norm + bisect_tol * (1.0 + norm);
        if !cone.contains(n, &(&e * C64::new(r, 0.0) + &a)) {
            report.order_unit_failures += 1;
            report.witness.get_or_insert(a.clone());
        }
        let shift = crate::cone::unit_shift(cone, n, &a)?;
        let boundary = &a + &e * C64::new(shift.lower, 0.0);
        if !archimedean_at(cone, n, &boundary) {
            report.archimedean_failures += 1;
            report.witness.get_or_insert(boundary);
        }
    }
    report.passed = report.order_unit_failures == 0 && report.archimedean_failures == 0;
    Ok(report)
}

/// Closedness surrogate at a single point.
pub fn archimedean_at(cone: &dyn MatrixCone, n: usize, y: &CMatrix) -> bool {
    let e = cone.unit(n);
    let all_shifts = ARCHIMEDEAN_SHIFTS.iter().all(|t| cone.contains(n, &(y + &e * C64::new(*t, 0.0))));
    let smallest = ARCHIMEDEAN_SHIFTS[ARCHIMEDEAN_SHIFTS.len() - 1];
    !all_shifts || cone.violation(n, y) <= smallest + cone.tol_psd()
}

#[derive(Debug, Clone, Serialize)]
pub struct ElementNorm {
    #[serde(serialize_with = "ser_matrix")]
    pub element: CMatrix,
    pub report: NormReport,
}
