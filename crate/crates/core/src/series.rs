//! Truncation control shared by every infinite series in the crate.

use crate::error::{Error, Result};

/// Hard ceiling for automatic escalation of the reflection index.
pub const ESCALATION_CAP: usize = 1 << 14;

/// Truncation of an infinite series.
///
/// Two-sided sums run over `n` in `-n_max..=n_max`, one-sided sums over
/// `1..=n_max`. `tail_tol` is the absolute size the last included term must
/// fall below for a Gaussian reflection series to be accepted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    pub n_max: usize,
    pub tail_tol: f64,
}

impl SeriesControl {
    pub const DEFAULT_N_MAX: usize = 100;
    pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

    pub fn new(n_max: usize, tail_tol: f64) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::domain("n_max must be at least 1"));
        }
        if !(tail_tol.is_finite() && tail_tol >= 0.0) {
            return Err(Error::domain(format!("tail_tol must be finite and >= 0, got {tail_tol}")));
        }
        Ok(SeriesControl { n_max, tail_tol })
    }

    pub fn with_n_max(n_max: usize) -> Result<Self> {
        Self::new(n_max, Self::DEFAULT_TAIL_TOL)
    }
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl {
            n_max: Self::DEFAULT_N_MAX,
            tail_tol: Self::DEFAULT_TAIL_TOL,
        }
    }
}

/// Sum `term(n)` over `n` in `-N..=N`, starting at `N = sc.n_max` and
/// doubling `N` (up to [`ESCALATION_CAP`]) while the largest of the two
/// outermost terms still exceeds `sc.tail_tol`.
///
/// Terms `n` and `-n` are added as a pair so that a series and its index
/// flip produce identical floating-point results.
pub(crate) fn symmetric_sum<F: Fn(i64) -> f64>(sc: &SeriesControl, term: F) -> Result<f64> {
    let cap = sc.n_max.max(ESCALATION_CAP);
    let mut sum = term(0);
    let mut limit = sc.n_max;
    let mut n = 1usize;
    loop {
        let mut last = 0.0f64;
        while n <= limit {
            let k = n as i64;
            let (up, down) = (term(k), term(-k));
            sum += up + down;
            last = up.abs().max(down.abs());
            n += 1;
        }
        if !last.is_finite() || !sum.is_finite() {
            return Err(Error::SeriesNotConverged {
                n_max: limit,
                last_term: last,
                tail_tol: sc.tail_tol,
            });
        }
        if last <= sc.tail_tol {
            return Ok(sum);
        }
        if limit >= cap {
            return Err(Error::SeriesNotConverged {
                n_max: limit,
                last_term: last,
                tail_tol: sc.tail_tol,
            });
        }
        limit = (limit * 2).min(cap);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(SeriesControl::new(0, 1e-12).is_err());
        assert!(SeriesControl::new(5, -1.0).is_err());
        assert!(SeriesControl::new(5, f64::NAN).is_err());
        assert_eq!(SeriesControl::default().n_max, 100);
    }

    #[test]
    fn escalates_until_tail_is_small() {
        let sc = SeriesControl::new(4, 1e-10).unwrap();
        // geometric terms 2^-|n|: need |n| >= 34 for 2^-n <= 1e-10
        let s = symmetric_sum(&sc, |n| 0.5f64.powi(n.unsigned_abs() as i32)).unwrap();
        assert!((s - 3.0).abs() < 1e-9);
    }

    #[test]
    fn gives_up_at_cap() {
        let sc = SeriesControl::new(4, 1e-10).unwrap();
        let err = symmetric_sum(&sc, |n| 1.0 / (1.0 + n.abs() as f64)).unwrap_err();
        assert!(matches!(err, Error::SeriesNotConverged { n_max, .. } if n_max == ESCALATION_CAP));
    }
}
