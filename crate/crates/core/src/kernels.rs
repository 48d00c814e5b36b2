//! Gaussian kernel `g_t(x)` and its first two spatial derivatives.
//!
//! Every reflection series in [`crate::analytic`] is a sum of these kernels
//! evaluated at image points, with `t` the variance of the terminal value
//! (`T` for standard Brownian motion, `sigma^2 T` for the scaled process).

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Beyond this many standard deviations all three kernels return exactly 0.
pub const CUTOFF_SDS: f64 = 40.0;

/// Variance parameter of the kernel. Always finite and strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct TimeScale(f64);

impl TimeScale {
    pub fn new(t: f64) -> Result<Self> {
        if t.is_finite() && t > 0.0 {
            Ok(TimeScale(t))
        } else {
            Err(Error::domain(format!("time scale must be finite and > 0, got {t}")))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

#[inline]
fn base(x: f64, t: f64) -> Option<f64> {
    if x.abs() > CUTOFF_SDS * t.sqrt() {
        None
    } else {
        Some((-x * x / (2.0 * t)).exp())
    }
}

/// `exp(-x^2 / 2t) / sqrt(2 pi t)`.
#[inline]
pub fn g(x: f64, t: TimeScale) -> f64 {
    let t = t.0;
    base(x, t).map_or(0.0, |e| e / (2.0 * PI * t).sqrt())
}

/// `-x exp(-x^2 / 2t) / sqrt(2 pi t^3)`.
#[inline]
pub fn g_prime(x: f64, t: TimeScale) -> f64 {
    let t = t.0;
    base(x, t).map_or(0.0, |e| -x * e / (2.0 * PI * t * t * t).sqrt())
}

/// `(x^2 - t) exp(-x^2 / 2t) / sqrt(2 pi t^5)`.
#[inline]
pub fn g_second(x: f64, t: TimeScale) -> f64 {
    let t = t.0;
    base(x, t).map_or(0.0, |e| (x * x - t) * e / (2.0 * PI * t.powi(5)).sqrt())
}

/// Checked variants that reject a non-finite `x`.
pub mod checked {
    use super::*;

    fn finite(x: f64) -> Result<f64> {
        if x.is_finite() {
            Ok(x)
        } else {
            Err(Error::domain(format!("kernel argument must be finite, got {x}")))
        }
    }

    pub fn g(x: f64, t: f64) -> Result<f64> {
        Ok(super::g(finite(x)?, TimeScale::new(t)?))
    }

    pub fn g_prime(x: f64, t: f64) -> Result<f64> {
        Ok(super::g_prime(finite(x)?, TimeScale::new(t)?))
    }

    pub fn g_second(x: f64, t: f64) -> Result<f64> {
        Ok(super::g_second(finite(x)?, TimeScale::new(t)?))
    }
}
