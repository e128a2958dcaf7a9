//! Continuously differentiable functions represented by 2x2 upper triangular
//! blocks: the norm formula, its comparison with sup norms, and how
//! condition (1) fails as the frequency grows.
//!
//! ```bash
//! cargo run --example c1_example
//! ```

use matrix_order::cases::{c1_inequality_check, c1_norm, decay_table, equispaced_grid, C1Sample};
use matrix_order::linalg::c;
use matrix_order::Result;

fn main() -> Result<()> {
    let golden = C1Sample::from_fn(vec![0.0], |_| c(1.0, 0.0), |_| c(1.0, 0.0))?;
    println!("|f| for f = f' = 1: {:.12} (golden ratio {:.12})", c1_norm(&golden)?, (1.0 + 5f64.sqrt()) / 2.0);

    let grid = equispaced_grid(257);
    let sine = C1Sample::from_fn(grid.clone(), |x| c((6.0 * x).sin(), 0.0), |x| c(6.0 * (6.0 * x).cos(), 0.0))?;
    println!("|sin 6x| = {:.6}, sup |f| = {:.6}, sup |f'| = {:.6}", c1_norm(&sine)?, sine.sup_value(), sine.sup_deriv());

    let ineq = c1_inequality_check(&grid, 200, 7)?;
    println!("inequalities on {} samples: holds {}, tightest ratio {:.6}", ineq.samples, ineq.holds, ineq.tightest_ratio);

    println!("   k   |c + d| / |c|   1/k");
    for p in decay_table(&[4, 8, 16, 32], &grid)? {
        println!("{:4}   {:.6}        {:.6}", p.k, p.ratio, 1.0 / p.k as f64);
    }
    Ok(())
}
