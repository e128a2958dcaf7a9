//! Invariants checked on random inputs.

use matrix_order::algebra::{MAX_DIM, STRUCTURE_TOL};
use matrix_order::cases::{block_norm, j_symmetrize};
use matrix_order::cone::unit_shift;
use matrix_order::involution::{recover_involution, Adjoint};
use matrix_order::io::{matrix_from_json, matrix_to_json, to_canonical_json};
use matrix_order::linalg::{c, frobenius, real_matrix, spectral_norm};
use matrix_order::norms::order_unit_seminorm;
use matrix_order::random::{self, random_element, random_hermitian_element};
use matrix_order::search::BISECT_TOL;
use matrix_order::similarity::condition_number;
use matrix_order::{compress, doubling_embed, member, ConeOracle, LinearMap, OperatorAlgebra, C64};
use proptest::prelude::*;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn seminorm_is_a_norm_on_hermitian_elements(seed in any::<u64>(), n in 1usize..4, t in -5.0f64..5.0) {
        let mut rng = random::seeded(seed);
        let alg = random::random_star_subalgebra(n + 1, &mut rng);
        let cone = ConeOracle::standard(alg.clone());
        let a = random_hermitian_element(&alg, 1, &mut rng);
        let b = random_hermitian_element(&alg, 1, &mut rng);
        let na = order_unit_seminorm(&cone, &Adjoint, 1, &a, BISECT_TOL).unwrap().value;
        let nb = order_unit_seminorm(&cone, &Adjoint, 1, &b, BISECT_TOL).unwrap().value;
        let nab = order_unit_seminorm(&cone, &Adjoint, 1, &(&a + &b), BISECT_TOL).unwrap().value;
        let nta = order_unit_seminorm(&cone, &Adjoint, 1, &(&a * C64::new(t, 0.0)), BISECT_TOL).unwrap().value;
        prop_assert!(nab <= na + nb + 1e-8);
        prop_assert!((nta - t.abs() * na).abs() <= 1e-8 * (1.0 + na));
        prop_assert!((na - spectral_norm(&a)).abs() <= 1e-8 * (1.0 + na));
    }

    #[test]
    fn unit_shift_is_minus_lambda_min(seed in any::<u64>()) {
        let mut rng = random::seeded(seed);
        let alg = random::random_star_subalgebra(3, &mut rng);
        let cone = ConeOracle::standard(alg.clone());
        let h = random_hermitian_element(&alg, 2, &mut rng);
        let lmin = h.clone().symmetric_eigen().eigenvalues.min();
        let b = unit_shift(&cone, 2, &h).unwrap();
        prop_assert!((b.upper - (-lmin).max(0.0)).abs() <= 1e-8 * (1.0 + lmin.abs()));
    }

    #[test]
    fn compression_is_idempotent_positive_and_contractive(seed in any::<u64>(), m in 1u32..3) {
        let mut rng = random::seeded(seed);
        let alg = random::random_star_subalgebra(2, &mut rng);
        let cone = ConeOracle::standard(alg.clone());
        let n = m - 1;
        let g = random_element(&alg, 1 << m, &mut rng);
        let p = g.adjoint() * &g;
        let y = compress(&p, n, m).unwrap();
        prop_assert_eq!(compress(&y, n, m).unwrap(), y.clone());
        prop_assert!(member(&cone, 1 << m, &y).unwrap());
        prop_assert!(spectral_norm(&y) <= spectral_norm(&p) * (1.0 + 1e-12));
        prop_assert!((spectral_norm(&doubling_embed(&g)) - spectral_norm(&g)).abs() <= 1e-12 * spectral_norm(&g));
    }

    #[test]
    fn condition_of_gram_is_squared_norm_product(seed in any::<u64>(), n in 2usize..6) {
        let mut rng = random::seeded(seed);
        let s = random::random_invertible(n, 1e3, &mut rng);
        let s_inv = s.clone().try_inverse().unwrap();
        let np = spectral_norm(&s) * spectral_norm(&s_inv);
        let cond = condition_number(&(s.adjoint() * &s));
        prop_assert!(cond <= 1e3 * (1.0 + 1e-9));
        prop_assert!((cond - np * np).abs() <= 1e-8 * cond);
    }

    #[test]
    fn j_symmetric_doubling_holds_for_any_similarity(seed in any::<u64>()) {
        let mut rng = random::seeded(seed);
        let alg = random::random_star_subalgebra(3, &mut rng);
        let s = random::random_invertible(3, 100.0, &mut rng);
        let pi = LinearMap::conjugation(&alg, &s.clone().try_inverse().unwrap(), &s);
        let rep = j_symmetrize(&pi).unwrap();
        prop_assert!(rep.residual <= 1e-10);
        let a = random_element(&alg, 1, &mut rng);
        let lhs = spectral_norm(&rep.doubled.apply(1, &a).unwrap());
        let rhs = spectral_norm(&rep.doubled.apply(1, &a.adjoint()).unwrap());
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + lhs));
    }

    #[test]
    fn block_norm_matches_spectral_norm(fr in -3.0f64..3.0, fi in -3.0f64..3.0, dr in -3.0f64..3.0, di in -3.0f64..3.0) {
        let (f, df) = (c(fr, fi), c(dr, di));
        let m = matrix_order::CMatrix::from_row_slice(2, 2, &[f, df, c(0.0, 0.0), f]);
        let sv = m.svd(false, false).singular_values.max();
        prop_assert!((block_norm(f, df) - sv).abs() <= 1e-12 * (1.0 + sv));
    }

    #[test]
    fn matrix_json_round_trips(seed in any::<u64>(), n in 1usize..5) {
        let mut rng = random::seeded(seed);
        let m = random::gaussian_matrix(n, n, &mut rng);
        let text = to_canonical_json(&matrix_to_json(&m));
        let back = matrix_from_json(&serde_json::from_str(&text).unwrap(), "").unwrap();
        prop_assert_eq!(back, m);
    }
}

proptest! {
    #![proptest_config(config(8))]

    #[test]
    fn recovered_involution_is_conjugate_linear_and_involutive(seed in any::<u64>(), re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let mut rng = random::seeded(seed);
        let alg = random::random_star_subalgebra(3, &mut rng);
        let s = random::random_invertible(3, 100.0, &mut rng);
        let s_inv = s.clone().try_inverse().unwrap();
        let cone = ConeOracle::similarity(alg.conjugate(&s_inv, &s).unwrap(), s.clone()).unwrap();
        let inv = recover_involution(&cone, 1, seed).unwrap();
        let x = random_element(cone_algebra(&cone), 1, &mut rng);
        let lam = c(re, im);
        let xs = inv.sharp(&x).unwrap();
        prop_assert!(frobenius(&(inv.sharp(&xs).unwrap() - &x)) <= 1e-8 * (1.0 + frobenius(&x)));
        let scaled = inv.sharp(&(&x * lam)).unwrap();
        prop_assert!(frobenius(&(scaled - &xs * lam.conj())) <= 1e-8 * (1.0 + frobenius(&x)));
        // the recovered involution is the transported adjoint S^-1 (S x S^-1)^* S
        let transported = &s_inv * (&s * &x * &s_inv).adjoint() * &s;
        prop_assert!(frobenius(&(xs - transported)) <= 1e-8 * (1.0 + frobenius(&x)));
    }
}

fn cone_algebra(cone: &ConeOracle) -> &OperatorAlgebra {
    use matrix_order::MatrixCone;
    cone.algebra()
}

#[test]
fn generated_algebra_is_closed_under_products() {
    let mut rng = random::seeded(17);
    let g = real_matrix(3, 3, &[1.0, 2.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 3.0]);
    let alg = OperatorAlgebra::generate(&[g], false, STRUCTURE_TOL, MAX_DIM).unwrap();
    for _ in 0..20 {
        let a = random_element(&alg, 1, &mut rng);
        let b = random_element(&alg, 1, &mut rng);
        assert!(alg.projection_residual(&(a * b)).1 < 1e-9);
    }
}
