//! Close generators into a unital algebra and inspect the result.
//!
//! ```bash
//! cargo run --example close_algebra
//! ```

use matrix_order::algebra::{MAX_DIM, STRUCTURE_TOL};
use matrix_order::linalg::{matrix_unit, real_matrix};
use matrix_order::{OperatorAlgebra, Result};

fn main() -> Result<()> {
    // upper triangular 2x2 matrices: one nilpotent generator plus a projection
    let upper = OperatorAlgebra::generate(&[matrix_unit(2, 0, 1), matrix_unit(2, 0, 0)], false, STRUCTURE_TOL, MAX_DIM)?;
    println!("upper triangular: dim {}, adjoint-closed {}", upper.dim(), upper.is_star_closed());

    // adding adjoints gives all of M_2
    let full = OperatorAlgebra::generate(&[matrix_unit(2, 0, 1)], true, STRUCTURE_TOL, MAX_DIM)?;
    println!("with adjoints:    dim {}, adjoint-closed {}", full.dim(), full.is_star_closed());

    // span{I, b} for an idempotent b that is not self-adjoint
    let b = real_matrix(2, 2, &[1.0, 1.0, 0.0, 0.0]);
    let worked = OperatorAlgebra::generate(&[b.clone()], false, STRUCTURE_TOL, MAX_DIM)?;
    println!("span{{I, b}}:      dim {}, adjoint-closed {}", worked.dim(), worked.is_star_closed());
    println!("coordinates of b: {:?}", worked.project(&b)?);

    // level-2 view: M_2(A) sits inside M_4
    let level2 = worked.amplify(2)?;
    println!("M_2(span{{I, b}}): dim {} in M_{}", level2.dim(), level2.ambient_dim());
    Ok(())
}
