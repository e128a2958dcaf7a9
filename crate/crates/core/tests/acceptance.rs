//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.
//!
//! Oracles here are deliberately independent of the library's own routes:
//! nalgebra's SVD and eigensolvers, closed forms, and direct re-evaluation.

use std::panic::{self, AssertUnwindSafe};
use std::time::Instant;

use matrix_order::algebra::{MAX_DIM, STRUCTURE_TOL};
use matrix_order::cases::{self, C1Sample};
use matrix_order::cone::mutants::{AllHermitianCone, ZeroedCornerCone};
use matrix_order::cone::{
    audit_algebraically_admissible, audit_matrix_ordered, audit_star_admissible, estimate_main_constants, unit_shift,
    ConeAuditReport, MatrixCone, Verdict,
};
use matrix_order::involution::{recover_involution, verify_matrix_involution, Adjoint};
use matrix_order::linalg::{c, matrix_unit, real_matrix};
use matrix_order::norms::{order_unit_seminorm, pre_cstar_norm, pre_cstar_norm_routes};
use matrix_order::random::{self, random_element, random_hermitian_element};
use matrix_order::search::BISECT_TOL;
use matrix_order::similarity::{cb_lower_bound, condition_number, reconstruct, PipelineOptions};
use matrix_order::{compress, doubling_embed, member, CMatrix, ConeOracle, LinearMap, OperatorAlgebra, C64};
use rand::Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn largest_singular(x: &CMatrix) -> f64 {
    x.clone().svd(false, false).singular_values.max()
}

fn eig_spectral(h: &CMatrix) -> f64 {
    h.clone().symmetric_eigen().eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

/// Order-norm oracle equivalence on random adjoint-closed subalgebras of `M_6`.
fn order_norm_oracle() -> Outcome {
    let mut rng = random::seeded(101);
    let (mut worst_semi, mut worst_cstar) = (0.0f64, 0.0f64);
    for _ in 0..20 {
        let alg = random::random_star_subalgebra(6, &mut rng);
        let cone = ConeOracle::standard(alg.clone());
        for _ in 0..10 {
            let h = random_hermitian_element(&alg, 1, &mut rng);
            let semi = order_unit_seminorm(&cone, &Adjoint, 1, &h, BISECT_TOL).map_err(|e| e.to_string())?;
            worst_semi = worst_semi.max((semi.value - eig_spectral(&h)).abs());
            let x = random_element(&alg, 1, &mut rng);
            let cs = pre_cstar_norm(&cone, &Adjoint, 1, &x, BISECT_TOL).map_err(|e| e.to_string())?;
            worst_cstar = worst_cstar.max((cs.value - largest_singular(&x)).abs());
        }
    }
    ensure(worst_semi <= 1e-7 && worst_cstar <= 1e-7, || {
        format!("max deviation seminorm {worst_semi:.3e}, pre-C* {worst_cstar:.3e} (tol 1e-7)")
    })?;
    Ok(format!("200 elements, max deviation seminorm {worst_semi:.3e}, pre-C* {worst_cstar:.3e}"))
}

/// `sqrt(|x^* x|)` and the `r^2 e ± x^* x` bisection agree.
fn formula_agreement() -> Outcome {
    let mut rng = random::seeded(202);
    let mut worst = 0.0f64;
    let mut count = 0;
    for _ in 0..20 {
        let alg = random::random_star_subalgebra(6, &mut rng);
        let cone = ConeOracle::standard(alg.clone());
        for _ in 0..10 {
            let x = random_element(&alg, 1, &mut rng);
            let (a, b) = pre_cstar_norm_routes(&cone, &Adjoint, 1, &x, BISECT_TOL).map_err(|e| e.to_string())?;
            worst = worst.max((a - b).abs());
            count += 1;
        }
    }
    ensure(worst <= 2e-10, || format!("max route gap {worst:.3e} (tol 2e-10)"))?;
    Ok(format!("{count} samples, max route gap {worst:.3e}"))
}

fn worked_algebra() -> (OperatorAlgebra, CMatrix) {
    let alg = OperatorAlgebra::generate(&[matrix_unit(2, 0, 0)], false, STRUCTURE_TOL, MAX_DIM).unwrap();
    (alg, real_matrix(2, 2, &[1.0, 1.0, 0.0, 1.0]))
}

fn planted_cone(alg: &OperatorAlgebra, s: &CMatrix) -> ConeOracle {
    let s_inv = s.clone().try_inverse().expect("invertible");
    let image = alg.conjugate(&s_inv, s).expect("conjugate");
    ConeOracle::similarity(image, s.clone()).expect("similarity cone")
}

/// Level-n involution recovered independently equals the entrywise transpose.
fn level_involution() -> Outcome {
    let (worked, s) = worked_algebra();
    let mut rng = random::seeded(303);
    let s3 = random::random_invertible(3, 100.0, &mut rng);
    let sub = random::random_star_subalgebra(3, &mut rng);
    let cones = [
        ("standard M2", ConeOracle::standard(OperatorAlgebra::full_matrix_algebra(2))),
        ("worked similarity", planted_cone(&worked, &s)),
        ("random planted", planted_cone(&sub, &s3)),
    ];
    let mut worst = 0.0f64;
    for (name, cone) in &cones {
        let one = recover_involution(cone, 1, 7).map_err(|e| format!("{name}: {e}"))?;
        for n in [2, 4] {
            let at_n = recover_involution(cone, n, 7).map_err(|e| format!("{name} level {n}: {e}"))?;
            let cmp = verify_matrix_involution(&one, &at_n, 20, 11).map_err(|e| e.to_string())?;
            ensure(cmp.max_residual <= 1e-8, || format!("{name} level {n}: residual {:.3e}", cmp.max_residual))?;
            worst = worst.max(cmp.max_residual);
        }
    }
    Ok(format!("3 cones at levels 2 and 4, max residual {worst:.3e}"))
}

/// Planted similarities are recovered with a certificate no worse than the plant.
fn planted_recovery() -> Outcome {
    let mut rng = random::seeded(404);
    let mut worst_residual = 0.0f64;
    let mut worst_excess = f64::NEG_INFINITY;
    for trial in 0..50 {
        let n = rng.random_range(2..=6usize);
        let alg = random::random_star_subalgebra(n, &mut rng);
        let s = random::random_invertible(n, 1e4, &mut rng);
        let planted = condition_number(&(s.adjoint() * &s));
        let cone = planted_cone(&alg, &s);
        let opts = PipelineOptions { levels: vec![1, 2], samples: 4, seed: trial, ..PipelineOptions::default() };
        let report = reconstruct(&cone, &opts).map_err(|e| format!("trial {trial} (N = {n}): {e}"))?;
        let cert = &report.certificate;
        ensure(cert.residual_star <= 1e-7, || format!("trial {trial}: residual_star {:.3e}", cert.residual_star))?;
        ensure(cert.cond <= planted + 1e-6, || {
            format!("trial {trial} (N = {n}): cond(Q) {} exceeds planted {}", cert.cond, planted)
        })?;
        worst_residual = worst_residual.max(cert.residual_star);
        worst_excess = worst_excess.max(cert.cond - planted);
    }
    Ok(format!("50 plants, max residual_star {worst_residual:.3e}, max cond(Q) - cond(S*S) {worst_excess:.3e}"))
}

/// Closed-form minimum of `cond [[1, 1], [1, t]]` over `t > 1` by golden-section search.
fn worked_closed_form() -> f64 {
    let cond = |t: f64| {
        let tr = 1.0 + t;
        let disc = ((t - 1.0).powi(2) + 4.0).sqrt();
        (tr + disc) / (tr - disc)
    };
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (1.0 + 1e-9, 100.0);
    for _ in 0..200 {
        let x1 = b - g * (b - a);
        let x2 = a + g * (b - a);
        if cond(x1) < cond(x2) {
            b = x2;
        } else {
            a = x1;
        }
    }
    cond(0.5 * (a + b)).sqrt()
}

/// cb-norm sandwich on the worked instance.
fn cb_sandwich() -> Outcome {
    let (alg, s) = worked_algebra();
    let oracle = worked_closed_form();
    ensure((oracle - (1.0 + 2f64.sqrt())).abs() <= 1e-6, || format!("closed-form oracle gave {oracle}"))?;
    let report = reconstruct(&planted_cone(&alg, &s), &PipelineOptions::default()).map_err(|e| e.to_string())?;
    let np = report.certificate.norm_product;
    ensure((np - oracle).abs() <= 1e-3, || format!("|S||S^-1| = {np}, oracle {oracle}"))?;
    let s_inv = s.clone().try_inverse().unwrap();
    let map = LinearMap::conjugation(&alg, &s_inv, &s);
    let lower = cb_lower_bound(&map, 2, 6, 1).map_err(|e| e.to_string())?;
    ensure(lower.value >= 2.41, || format!("cb lower bound {} < 2.41", lower.value))?;
    ensure(lower.value <= np + 1e-6, || format!("cb lower bound {} exceeds upper {np}", lower.value))?;
    Ok(format!("|S||S^-1| = {np:.12}, oracle {oracle:.12}, cb lower bound at level 2 = {:.6}", lower.value))
}

/// Constants of the standard cone on `M_2`.
fn standard_constants() -> Outcome {
    let cone = ConeOracle::standard(OperatorAlgebra::full_matrix_algebra(2));
    let star = audit_star_admissible(&cone, &[1], 500, 606);
    let k = star.k.as_ref().ok_or("no K estimate")?;
    ensure(k.value <= 1.0 + 1e-6, || format!("K = {}", k.value))?;
    let r4 = star.r4.as_ref().ok_or("no r estimate")?;
    ensure(r4.value <= 1.0 + 1e-6, || format!("r4 estimate {} exceeds 1", r4.value))?;
    let d = real_matrix(2, 2, &[1.0, 0.0, 0.0, -1.0]);
    let tight = unit_shift(&cone, 1, &d).map_err(|e| e.to_string())?.upper / largest_singular(&d);
    ensure((tight - 1.0).abs() <= 1e-6, || format!("r4 at diag(1, -1) = {tight}"))?;
    let consts = estimate_main_constants(&cone, &[1, 2], 50, 606);
    let alpha = consts.alpha.as_ref().ok_or("no alpha estimate")?;
    ensure((alpha.value - 1.0).abs() <= 1e-6, || format!("alpha = {}", alpha.value))?;
    Ok(format!("K = {:.9}, r4 = {tight:.9} (sampled {:.9}), alpha = {:.9}", k.value, r4.value, alpha.value))
}

/// `psi_{n,m}` is a contractive, positive map commuting with doubling.
fn compression_suite() -> Outcome {
    let mut rng = random::seeded(707);
    let alg = random::random_star_subalgebra(3, &mut rng);
    let cone = ConeOracle::standard(alg.clone());
    let mut worst_commute = 0.0f64;
    let (mut contraction_fail, mut positivity_fail) = (0, 0);
    for (n, m) in [(0u32, 1u32), (1, 2)] {
        let level = 1usize << m;
        for _ in 0..200 {
            let x = random_element(&alg, level, &mut rng);
            let y = compress(&x, n, m).map_err(|e| e.to_string())?;
            if largest_singular(&y) > largest_singular(&x) * (1.0 + 1e-12) {
                contraction_fail += 1;
            }
            let g = random_element(&alg, level, &mut rng);
            let p = g.adjoint() * g;
            let ok_p = member(&cone, level, &p).map_err(|e| e.to_string())?;
            let ok_y = member(&cone, level, &compress(&p, n, m).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            if ok_p && !ok_y {
                positivity_fail += 1;
            }
            let lhs = compress(&doubling_embed(&x), n, m + 1).map_err(|e| e.to_string())?;
            let rhs = doubling_embed(&y);
            worst_commute = worst_commute.max(largest_singular(&(lhs - rhs)));
        }
    }
    ensure(contraction_fail == 0 && positivity_fail == 0 && worst_commute <= 1e-10, || {
        format!("contraction failures {contraction_fail}, positivity failures {positivity_fail}, commutation {worst_commute:.3e}")
    })?;
    Ok(format!("400 samples, zero violations, commutation residual {worst_commute:.3e}"))
}

/// J-symmetric doubling of a non-adjoint-preserving homomorphism.
fn jsym_suite() -> Outcome {
    let mut rng = random::seeded(808);
    let alg = OperatorAlgebra::full_matrix_algebra(2);
    let s = random::random_invertible(2, 50.0, &mut rng);
    let pi = LinearMap::conjugation(&alg, &s.clone().try_inverse().unwrap(), &s);
    let rep = cases::j_symmetrize(&pi).map_err(|e| e.to_string())?;
    ensure(rep.residual <= 1e-10, || format!("doubling residual {:.3e}", rep.residual))?;
    let report = cases::jsym_norm_identity(&rep, &[1, 2, 4], 50, 9).map_err(|e| e.to_string())?;
    ensure(report.max_deviation <= 1e-9, || format!("norm identity deviation {:.3e}", report.max_deviation))?;
    // an independent check of J-symmetry itself: rho(a^*) = J rho(a)^* J
    let j = &rep.j;
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let a = random_element(&alg, 1, &mut rng);
        let lhs = rep.doubled.apply(1, &a.adjoint()).map_err(|e| e.to_string())?;
        let rhs = j * rep.doubled.apply(1, &a).map_err(|e| e.to_string())?.adjoint() * j;
        worst = worst.max(largest_singular(&(lhs - rhs)));
    }
    ensure(worst <= 1e-9, || format!("J-symmetry defect {worst:.3e}"))?;
    Ok(format!(
        "doubling residual {:.3e}, norm identity deviation {:.3e} at levels 1, 2, 4",
        rep.residual, report.max_deviation
    ))
}

/// Sampled C^1 functions.
fn c1_suite() -> Outcome {
    let mut rng = random::seeded(909);
    let grid = cases::default_grid();
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let values: Vec<C64> = grid.iter().map(|_| random::complex_gaussian(&mut rng)).collect();
        let derivs: Vec<C64> = grid.iter().map(|_| random::complex_gaussian(&mut rng) * 3.0).collect();
        let sample = C1Sample::new(grid.clone(), values, derivs).map_err(|e| e.to_string())?;
        let closed = cases::c1_norm(&sample).map_err(|e| e.to_string())?;
        let direct = largest_singular(&cases::c1_embed(&sample));
        worst = worst.max((closed - direct).abs() / direct.max(1.0));
    }
    let golden = C1Sample::from_fn(vec![0.5], |_| c(1.0, 0.0), |_| c(1.0, 0.0)).map_err(|e| e.to_string())?;
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let g_closed = cases::c1_norm(&golden).map_err(|e| e.to_string())?;
    let g_direct = largest_singular(&cases::c1_embed(&golden));
    ensure((g_closed - phi).abs() <= 1e-10 && (g_direct - phi).abs() <= 1e-10, || {
        format!("golden case closed {g_closed}, direct {g_direct}")
    })?;
    ensure(worst <= 1e-10, || format!("closed form vs operator norm {worst:.3e}"))?;
    let ineq = cases::c1_inequality_check(&grid, 500, 910).map_err(|e| e.to_string())?;
    ensure(ineq.holds, || format!("{} upper, {} lower violations", ineq.upper_violations, ineq.lower_violations))?;
    let fine = cases::equispaced_grid(257);
    let table = cases::decay_table(&[4, 8, 16, 32], &fine).map_err(|e| e.to_string())?;
    for p in &table {
        ensure(p.ratio <= 1.0 / p.k as f64, || format!("k = {}: ratio {} > 1/k", p.k, p.ratio))?;
    }
    let ratios: Vec<String> = table.iter().map(|p| format!("{}:{:.4}", p.k, p.ratio)).collect();
    Ok(format!("norm gap {worst:.3e}, golden {g_closed:.12}, 500 inequality samples clean, decay {}", ratios.join(" ")))
}

fn witnesses_reproduce(report: &ConeAuditReport, cone: &dyn MatrixCone) -> Result<usize, String> {
    let mut n = 0;
    for check in report.failures() {
        let w = check.witness.as_ref().ok_or_else(|| format!("{} '{}' failed without a witness", report.cone, check.axiom))?;
        ensure(w.reproduces(cone), || format!("{} '{}' witness does not reproduce", report.cone, check.axiom))?;
        n += 1;
    }
    Ok(n)
}

fn failed(report: &ConeAuditReport, axiom: &str) -> bool {
    report.check(axiom).is_some_and(|c| c.verdict == Verdict::Fail)
}

/// Audit failures carry standalone witnesses, and planted defects are caught.
fn audit_soundness() -> Outcome {
    let m2 = OperatorAlgebra::full_matrix_algebra(2);
    let all_herm = AllHermitianCone::new(m2.clone());
    let corner = ZeroedCornerCone::new(m2.clone());
    let standard = ConeOracle::standard(m2);
    let mut witnesses = 0;
    let mut reports = Vec::new();
    for cone in [&all_herm as &dyn MatrixCone, &corner, &standard] {
        let reps = [
            audit_algebraically_admissible(cone, 20, 1),
            audit_matrix_ordered(cone, &[1, 2], 20, 1),
            audit_star_admissible(cone, &[1, 2], 20, 1),
        ];
        for r in &reps {
            witnesses += witnesses_reproduce(r, cone)?;
        }
        reports.push(reps);
    }
    let [herm, corner_reps, std_reps] = &reports[..] else { unreachable!() };
    ensure(failed(&herm[0], "(ii) pointed") && failed(&herm[1], "(b) pointed") && failed(&herm[2], "2(ii) pointed"), || {
        "all-Hermitian cone was not flagged as non-pointed by every audit".into()
    })?;
    ensure(failed(&corner_reps[0], "(iii) conjugation") && failed(&corner_reps[1], "(c) conjugation"), || {
        "zeroed-corner cone was not flagged for conjugation".into()
    })?;
    ensure(std_reps.iter().all(|r| r.passed()), || "standard cone failed an audit".into())?;
    Ok(format!("{witnesses} failure witnesses reproduced; both mutants caught; standard cone clean"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("order-norm oracle equivalence", order_norm_oracle),
        ("|x| formula agreement", formula_agreement),
        ("level-n involution is the entrywise transpose", level_involution),
        ("planted-similarity recovery", planted_recovery),
        ("similarity sandwich on the worked instance", cb_sandwich),
        ("standard-cone constants", standard_constants),
        ("compression suite", compression_suite),
        ("J-symmetric suite", jsym_suite),
        ("C^1 example", c1_suite),
        ("audit soundness", audit_soundness),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(format!("panicked: {}", p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
