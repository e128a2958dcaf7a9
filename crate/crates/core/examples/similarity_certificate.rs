//! Reconstruct a similarity making a non-selfadjoint algebra adjoint-closed,
//! with the optimal condition number and a checkable certificate.
//!
//! ```bash
//! cargo run --example similarity_certificate
//! ```

use matrix_order::random::{random_invertible, random_star_subalgebra, seeded};
use matrix_order::similarity::{condition_number, reconstruct, PipelineOptions};
use matrix_order::{ConeOracle, Result};

fn main() -> Result<()> {
    let mut rng = seeded(5);
    let alg = random_star_subalgebra(4, &mut rng);
    let s = random_invertible(4, 1e3, &mut rng);
    let s_inv = s.clone().try_inverse().expect("invertible");
    // B = S^-1 A S carries the cone transported from A
    let cone = ConeOracle::similarity(alg.conjugate(&s_inv, &s)?, s.clone())?;
    println!("algebra dim {} in M_4, planted cond(S*S) = {:.4}", alg.dim(), condition_number(&(s.adjoint() * &s)));

    let report = reconstruct(&cone, &PipelineOptions { cb_restarts: 3, ..PipelineOptions::default() })?;
    let cert = &report.certificate;
    println!("solution space for Q: dim {}", report.space_dim);
    println!("optimal cond(Q) = {:.6} after {} iterations", cert.cond, report.optimizer_iterations);
    println!("|S||S^-1| = {:.6}", cert.norm_product);
    println!("adjoint residual {:.2e}, cone residual {:.2e}, inverse failures {}", cert.residual_star, cert.residual_cone, cert.inverse_failures);
    println!("image adjoint-closed: {}", report.image_star_closed);
    if let Some(lower) = &report.cb_lower {
        println!("cb norm of the inverse similarity in [{:.6}, {:.6}]", lower.value, report.cb_upper);
    }
    Ok(())
}
