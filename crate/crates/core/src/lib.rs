//! Numerical workbench for matrix-ordered operator algebras.
//!
//! Algebras are unital subalgebras of `M_N` given by orthonormal bases; a cone
//! family `{C_n}` is given by a membership oracle at each matrix level. From
//! there the crate audits cone axioms, computes order-unit and pre-C*-norms,
//! recovers the involution a cone determines, and reconstructs a similarity
//! `S` that makes `S B S^-1` adjoint-closed, with cb-norm bounds on both sides.

pub mod algebra;
pub mod cases;
pub mod cli;
pub mod cone;
pub mod error;
pub mod involution;
pub mod io;
pub mod linalg;
pub mod norms;
pub mod random;
pub mod search;
pub mod similarity;

pub use algebra::{doubling_embed, AlgebraElement, OperatorAlgebra};
pub use cone::{compress, member, ConeOracle, MatrixCone};
pub use error::{Error, Result};
pub use involution::{InvolutionMap, StarOperation};
pub use linalg::{CMatrix, C64};
pub use similarity::{LinearMap, SimilarityCertificate};
