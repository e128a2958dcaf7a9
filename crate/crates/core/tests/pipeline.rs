//! Cross-module behaviour through the public API.

use matrix_order::algebra::{MAX_DIM, STRUCTURE_TOL};
use matrix_order::cases::{c1_condition1_decay, default_grid, j_symmetrize, kadison_pipeline, KadisonOptions};
use matrix_order::cone::{audit_star_admissible, lineality_space};
use matrix_order::involution::{decompose, recover_involution, NativeStar};
use matrix_order::io::{algebra_from_json, algebra_to_json, cone_from_json};
use matrix_order::linalg::{frobenius, matrix_unit, real_matrix};
use matrix_order::norms::{pre_cstar_norm, ARCHIMEDEAN_SHIFTS};
use matrix_order::search::{threshold, BISECT_TOL};
use matrix_order::similarity::{find_pd, minimize_condition, solve_q};
use matrix_order::{ConeOracle, Error, LinearMap, MatrixCone, OperatorAlgebra};
use serde_json::json;

fn worked() -> (OperatorAlgebra, ConeOracle) {
    let b = OperatorAlgebra::generate(&[real_matrix(2, 2, &[1.0, 1.0, 0.0, 0.0])], false, STRUCTURE_TOL, MAX_DIM).unwrap();
    let cone = ConeOracle::similarity(b.clone(), real_matrix(2, 2, &[1.0, 1.0, 0.0, 1.0])).unwrap();
    (b, cone)
}

#[test]
fn generation_respects_the_dimension_cap() {
    let err = OperatorAlgebra::generate(&[matrix_unit(3, 0, 1)], true, STRUCTURE_TOL, 4).unwrap_err();
    assert!(matches!(err, Error::DimensionCapExceeded { cap: 4, .. }), "{err:?}");
}

#[test]
fn algebra_json_round_trip_preserves_span() {
    let (b, _) = worked();
    let back = algebra_from_json(&algebra_to_json(&b), "").unwrap();
    assert!(b.span_residual(&back) < 1e-12 && back.span_residual(&b) < 1e-12);
    let from_gens = algebra_from_json(&json!({"generators": [{"dim": 2, "entries": [[1, 1], [0, 0]]}]}), "").unwrap();
    assert!(b.span_residual(&from_gens) < 1e-12);
}

#[test]
fn cone_json_builds_the_same_oracle() {
    let doc = json!({
        "variant": "similarity",
        "algebra": {"generators": [{"dim": 2, "entries": [[1, 1], [0, 0]]}]},
        "S": {"dim": 2, "entries": [[1, 1], [0, 1]]}
    });
    let cone = cone_from_json(&doc, std::path::Path::new("."), None).unwrap();
    let (b, reference) = worked();
    for x in [b.unit(), real_matrix(2, 2, &[1.0, 1.0, 0.0, 0.0]), real_matrix(2, 2, &[-1.0, -1.0, 0.0, 0.0])] {
        assert_eq!(cone.contains(1, &x), reference.contains(1, &x));
    }
}

#[test]
fn transported_pre_cstar_norm_is_the_norm_of_the_image() {
    let (b, cone) = worked();
    let s = real_matrix(2, 2, &[1.0, 1.0, 0.0, 1.0]);
    let s_inv = s.clone().try_inverse().unwrap();
    let star = NativeStar(&cone);
    for x in b.basis() {
        let r = pre_cstar_norm(&cone, &star, 1, x, BISECT_TOL).unwrap();
        let image = matrix_order::linalg::spectral_norm(&(&s * x * &s_inv));
        assert!((r.value - image).abs() < 1e-8, "{} vs {image}", r.value);
    }
}

#[test]
fn decomposition_is_unique_and_involution_matches() {
    let (b, cone) = worked();
    let x = b.element(&[matrix_order::linalg::c(0.3, -1.2), matrix_order::linalg::c(2.0, 0.5)]);
    let (x1, x2) = decompose(&cone, 1, &x, 4).unwrap();
    assert!(frobenius(&(&x1 + &x2 * matrix_order::linalg::I - &x)) < 1e-9);
    let inv = recover_involution(&cone, 1, 4).unwrap();
    assert!(frobenius(&(inv.sharp(&x).unwrap() - (x1 - x2 * matrix_order::linalg::I))) < 1e-9);
}

#[test]
fn solution_space_and_optimum_for_the_worked_cone() {
    let (b, cone) = worked();
    let inv = recover_involution(&cone, 1, 0).unwrap();
    let space = solve_q(&b, &inv).unwrap();
    assert_eq!(space.len(), 2);
    let start = find_pd(&space, 0).unwrap();
    let opt = minimize_condition(&space, &start).unwrap();
    assert!((opt.cond.sqrt() - (1.0 + 2f64.sqrt())).abs() < 1e-9);
}

#[test]
fn audits_of_the_worked_cone_pass_with_unit_constants() {
    let (_, cone) = worked();
    let report = audit_star_admissible(&cone, &[1, 2], 15, 2);
    assert!(report.passed(), "{:?}", report.failures().collect::<Vec<_>>());
    assert!(lineality_space(&cone, 2).is_empty());
}

#[test]
fn typed_errors_surface() {
    assert!(matches!(c1_condition1_decay(32, 1.0, &default_grid()), Err(Error::GridTooCoarse { required: 128, .. })));
    let upper = OperatorAlgebra::generate(&[matrix_unit(2, 0, 1)], false, STRUCTURE_TOL, MAX_DIM).unwrap();
    let pi = LinearMap::new(upper.clone(), upper.basis().to_vec()).unwrap();
    assert!(matches!(j_symmetrize(&pi), Err(Error::SourceNotStarClosed)));
    assert!(matches!(threshold(|_| false, 1.0, BISECT_TOL), Err(Error::UnboundedAbove { .. })));
    assert_eq!(ARCHIMEDEAN_SHIFTS.len(), 4);
}

#[test]
fn kadison_pipeline_sandwiches_the_cb_norm() {
    let alg = OperatorAlgebra::generate(&[matrix_unit(2, 0, 0)], false, STRUCTURE_TOL, MAX_DIM).unwrap();
    let s = real_matrix(2, 2, &[2.0, 1.0, 0.0, 1.0]);
    let report = kadison_pipeline(&alg, &s, &KadisonOptions { samples: 10, cb_restarts: 3, ..KadisonOptions::default() }).unwrap();
    assert!(report.audit.passed());
    assert!(report.certificate.cond <= report.planted_cond + 1e-6);
    assert!(report.cb_lower.value <= report.cb_upper + 1e-6);
    assert!(report.star_rep_residual < 1e-7);
    let cone = matrix_order::cases::doubled_similarity_cone(&alg, &s).unwrap();
    assert_eq!(cone.algebra().ambient_dim(), 4);
}
