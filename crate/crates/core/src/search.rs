//! Monotone threshold search used by every order-unit computation.

use crate::error::{Error, Result};

pub const BISECT_TOL: f64 = 1e-10;
pub const MAX_ITERATIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lower: f64,
    pub upper: f64,
    pub iterations: usize,
    pub calls: usize,
}

impl Bracket {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }
}

/// Locate the threshold of a predicate that is false below it and true above
/// it on `[lo, hi]`, given `pred(hi)`. Bisects down to machine resolution; the
/// final width must be at most `rel_tol * (1 + upper)`.
pub fn bisect(mut pred: impl FnMut(f64) -> bool, lo: f64, hi: f64, rel_tol: f64) -> Result<Bracket> {
    let mut calls = 0;
    let (mut lo, mut hi) = (lo, hi);
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        calls += 1;
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    if hi - lo > rel_tol * (1.0 + hi) {
        return Err(Error::NumericalStall { iterations });
    }
    Ok(Bracket { lower: lo, upper: hi, iterations, calls })
}

/// `inf { t >= 0 : pred(t) }` for a monotone predicate. The initial upper bound
/// is doubled up to three times before giving up.
pub fn threshold(mut pred: impl FnMut(f64) -> bool, initial_upper: f64, rel_tol: f64) -> Result<Bracket> {
    if pred(0.0) {
        return Ok(Bracket { lower: 0.0, upper: 0.0, iterations: 0, calls: 1 });
    }
    let mut hi = initial_upper.max(f64::MIN_POSITIVE);
    let mut calls = 1;
    let mut found = false;
    for _ in 0..4 {
        calls += 1;
        if pred(hi) {
            found = true;
            break;
        }
        hi *= 2.0;
    }
    if !found {
        return Err(Error::UnboundedAbove { upper: hi / 2.0 });
    }
    let mut b = bisect(pred, 0.0, hi, rel_tol)?;
    b.calls += calls;
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let b = threshold(|t| t * t >= 2.0, 1.0, BISECT_TOL).unwrap();
        assert!(b.lower <= 2f64.sqrt() && 2f64.sqrt() <= b.upper);
        assert!(b.upper - b.lower <= 1e-15);
    }

    #[test]
    fn zero_when_true_at_origin() {
        let b = threshold(|_| true, 1.0, BISECT_TOL).unwrap();
        assert_eq!((b.lower, b.upper), (0.0, 0.0));
    }

    #[test]
    fn reports_unbounded() {
        assert!(matches!(threshold(|t| t > 100.0, 1.0, BISECT_TOL), Err(Error::UnboundedAbove { .. })));
    }
}
