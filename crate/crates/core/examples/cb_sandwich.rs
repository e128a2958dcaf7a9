//! Two-sided bounds on a completely bounded norm: an optimized lower bound at
//! a finite level against the similarity upper bound.
//!
//! ```bash
//! cargo run --example cb_sandwich
//! ```

use matrix_order::algebra::{MAX_DIM, STRUCTURE_TOL};
use matrix_order::linalg::{matrix_unit, real_matrix, spectral_norm};
use matrix_order::similarity::cb_lower_bound;
use matrix_order::{LinearMap, OperatorAlgebra, Result};

fn main() -> Result<()> {
    // a -> S^-1 a S on span{I, E_11}
    let alg = OperatorAlgebra::generate(&[matrix_unit(2, 0, 0)], false, STRUCTURE_TOL, MAX_DIM)?;
    let s = real_matrix(2, 2, &[1.0, 1.0, 0.0, 1.0]);
    let s_inv = s.clone().try_inverse().expect("invertible");
    let map = LinearMap::conjugation(&alg, &s_inv, &s);
    let naive = spectral_norm(&s) * spectral_norm(&s_inv);
    let best = 1.0 + 2f64.sqrt();
    for k in [1, 2] {
        let lower = cb_lower_bound(&map, k, 6, 1)?;
        println!("level {k}: lower bound {:.9}", lower.value);
    }
    println!("optimal similarity bound 1 + sqrt 2 = {best:.9}; |S||S^-1| = {naive:.9}");

    // the transpose on M_2 is bounded but not completely bounded by 1
    let m2 = OperatorAlgebra::full_matrix_algebra(2);
    let transpose = LinearMap::new(m2.clone(), m2.basis().iter().map(|b| b.transpose()).collect())?;
    println!("transpose at level 2: {:.6}", cb_lower_bound(&transpose, 2, 6, 1)?.value);
    Ok(())
}
