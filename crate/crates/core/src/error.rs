use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("span dimension would exceed cap {cap} (rank tolerance {rank_tol:e})")]
    DimensionCapExceeded { cap: usize, rank_tol: f64 },

    #[error("element is not in the algebra (projection residual {residual:e})")]
    Membership { residual: f64 },

    #[error("element is not self-adjoint (defect {defect:e})")]
    NotSelfAdjoint { defect: f64 },

    #[error("order-unit predicate still fails at r = {upper:e}; unit is not an order unit for this element")]
    UnboundedAbove { upper: f64 },

    #[error("bisection did not converge within {iterations} iterations")]
    NumericalStall { iterations: usize },

    #[error("the two norm formulas disagree: {sqrt_route} vs {direct}")]
    FormulaMismatch { sqrt_route: f64, direct: f64 },

    #[error("cone span still growing at dimension {dimension} after {rounds} sampling rounds")]
    SpanUnstable { dimension: usize, rounds: usize },

    #[error("(C - C) and i(C - C) intersect nontrivially: rank {rank}, expected {expected}")]
    DecompositionNotUnique { rank: usize, expected: usize },

    #[error("(C - C) + i(C - C) does not exhaust the algebra: rank {rank}, expected {expected}")]
    DecompositionInfeasible { rank: usize, expected: usize },

    #[error("no positive definite solution (best lambda_min {best_min_eigenvalue:e})")]
    NoPositiveSolution { best_min_eigenvalue: f64 },

    #[error("similarity certificate rejected: star residual {residual:e} exceeds {tolerance:e}")]
    CertificationFailed { residual: f64, tolerance: f64 },

    #[error("source algebra is not closed under the adjoint")]
    SourceNotStarClosed,

    #[error("grid has {points} points but frequency needs at least {required}")]
    GridTooCoarse { points: usize, required: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
