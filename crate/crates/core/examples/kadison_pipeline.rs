//! End to end on a bounded homomorphism `a -> S^-1 a S`: J-symmetric doubling,
//! cone audit, involution, similarity and cb bounds.
//!
//! ```bash
//! cargo run --example kadison_pipeline
//! ```

use matrix_order::algebra::{MAX_DIM, STRUCTURE_TOL};
use matrix_order::cases::{kadison_pipeline, KadisonOptions};
use matrix_order::linalg::{matrix_unit, real_matrix};
use matrix_order::{OperatorAlgebra, Result};

fn main() -> Result<()> {
    let alg = OperatorAlgebra::generate(&[matrix_unit(2, 0, 0)], false, STRUCTURE_TOL, MAX_DIM)?;
    let s = real_matrix(2, 2, &[1.0, 1.0, 0.0, 1.0]);
    let report = kadison_pipeline(&alg, &s, &KadisonOptions::default())?;
    println!("J-symmetry residual       {:.2e}", report.jsym_residual);
    println!("audit passed              {}", report.audit.passed());
    println!("r4 at most one            {}", report.r4_at_most_one);
    println!("involution span dim       {}", report.involution_span_dim);
    println!("level-2 involution resid  {:.2e}", report.involution_level2_residual);
    println!("solution space dim        {}", report.space_dim);
    println!("certificate cond          {:.6} (planted {:.6})", report.certificate.cond, report.planted_cond);
    println!("star rep residual         {:.2e}", report.star_rep_residual);
    println!("cb norm in                [{:.6}, {:.6}]", report.cb_lower.value, report.cb_upper);
    Ok(())
}
