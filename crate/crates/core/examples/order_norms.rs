//! Order-unit seminorms and pre-C*-norms computed from cone membership alone,
//! compared with the spectral norm.
//!
//! ```bash
//! cargo run --example order_norms
//! ```

use matrix_order::algebra::{MAX_DIM, STRUCTURE_TOL};
use matrix_order::involution::{Adjoint, NativeStar};
use matrix_order::linalg::{matrix_unit, real_matrix, spectral_norm};
use matrix_order::norms::{check_order_unit_archimedean, null_space, order_unit_seminorm, pre_cstar_norm};
use matrix_order::search::BISECT_TOL;
use matrix_order::cone::mutants::AllHermitianCone;
use matrix_order::{ConeOracle, OperatorAlgebra, Result};

fn main() -> Result<()> {
    let m2 = OperatorAlgebra::full_matrix_algebra(2);
    let standard = ConeOracle::standard(m2.clone());

    let d = real_matrix(2, 2, &[3.0, 0.0, 0.0, -1.0]);
    let r = order_unit_seminorm(&standard, &Adjoint, 1, &d, BISECT_TOL)?;
    println!("|diag(3, -1)| = {:.12}  (spectral {:.12}, {} oracle calls)", r.value, spectral_norm(&d), r.oracle_calls);

    let e12 = matrix_unit(2, 0, 1);
    let r = pre_cstar_norm(&standard, &Adjoint, 1, &e12, BISECT_TOL)?;
    println!("|E_12|        = {:.12}", r.value);

    match order_unit_seminorm(&standard, &Adjoint, 1, &e12, BISECT_TOL) {
        Err(e) => println!("seminorm of E_12: {e}"),
        Ok(r) => println!("seminorm of E_12 unexpectedly {}", r.value),
    }

    // a cone transported by a non-unitary similarity: the norm is that of S b S^-1
    let b = real_matrix(2, 2, &[1.0, 1.0, 0.0, 0.0]);
    let worked = OperatorAlgebra::generate(&[b.clone()], false, STRUCTURE_TOL, MAX_DIM)?;
    let cone = ConeOracle::similarity(worked, real_matrix(2, 2, &[1.0, 1.0, 0.0, 1.0]))?;
    let r = order_unit_seminorm(&cone, &NativeStar(&cone), 1, &b, BISECT_TOL)?;
    println!("|b| in the transported order = {:.12} (spectral norm of b is {:.6})", r.value, spectral_norm(&b));

    let report = check_order_unit_archimedean(&standard, &Adjoint, 2, 20, 3, BISECT_TOL)?;
    println!("order unit / Archimedean at level 2: passed {}", report.passed);

    // a degenerate cone: every Hermitian element is positive, so the seminorm vanishes
    let degenerate = AllHermitianCone::new(m2);
    println!("null space of the all-Hermitian cone: dim {}", null_space(&degenerate, &Adjoint, 1, BISECT_TOL)?.len());
    Ok(())
}
