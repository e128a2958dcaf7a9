//! Recover the involution a cone determines from `x = x1 + i x2` and compare
//! the independently recovered level-n map with the entrywise transpose.
//!
//! ```bash
//! cargo run --example involution_recovery
//! ```

use matrix_order::algebra::{MAX_DIM, STRUCTURE_TOL};
use matrix_order::involution::{decompose, real_cone_span, recover_involution, verify_matrix_involution};
use matrix_order::linalg::{frobenius, real_matrix};
use matrix_order::{ConeOracle, OperatorAlgebra, Result};

fn main() -> Result<()> {
    let b = real_matrix(2, 2, &[1.0, 1.0, 0.0, 0.0]);
    let alg = OperatorAlgebra::generate(&[b.clone()], false, STRUCTURE_TOL, MAX_DIM)?;
    let cone = ConeOracle::similarity(alg, real_matrix(2, 2, &[1.0, 1.0, 0.0, 1.0]))?;

    let span = real_cone_span(&cone, 1, 0)?;
    println!("real span of C - C: dim {} after {} samples", span.dim(), span.samples);

    let (x1, x2) = decompose(&cone, 1, &b, 0)?;
    println!("b = x1 + i x2 with |x2| = {:.2e}", frobenius(&x2));
    println!("x1 =\n{x1:.6}");

    let inv = recover_involution(&cone, 1, 0)?;
    println!("b^# = b: residual {:.2e}", frobenius(&(inv.sharp(&b)? - &b)));
    println!("b^* = b: residual {:.2e} (the involution is not the adjoint)", frobenius(&(b.adjoint() - &b)));

    for n in [2, 4] {
        let at_n = recover_involution(&cone, n, 0)?;
        let cmp = verify_matrix_involution(&inv, &at_n, 10, 1)?;
        println!("level {n}: recovered vs entrywise transpose, residual {:.2e}", cmp.max_residual);
    }
    Ok(())
}
