//! Reflection-series densities for the extremes and terminal value of a
//! Brownian motion with drift `mu` and volatility `sigma` started at 0.
//!
//! With `M` the running maximum, `m` the running minimum and `X` the
//! terminal value on `[0, T]`:
//!
//! * [`psi_kernel`] is `P(M <= h, m >= -l, X in dx) / dx`,
//! * [`trivariate_density`] is its mixed derivative in `h` and `l`, i.e. the
//!   joint density of `(M, -m, X)`,
//! * [`joint_range_terminal_density`] is the joint density of `(M - m, X)`.
//!
//! The drift enters only through the Girsanov tilt
//! `exp(mu x / sigma^2 - mu^2 T / (2 sigma^2))`; every image sum is taken
//! with kernel variance `sigma^2 T`.

use crate::error::{Error, Result};
use crate::kernels::{g, g_prime, g_second, TimeScale};
use crate::series::{symmetric_sum, SeriesControl};

/// Drift, volatility and horizon of the process `dW = mu dt + sigma dZ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProcessParams {
    mu: f64,
    sigma: f64,
    t: f64,
}

impl ProcessParams {
    pub fn new(mu: f64, sigma: f64, t: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(Error::domain(format!("mu must be finite, got {mu}")));
        }
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::domain(format!("sigma must be finite and > 0, got {sigma}")));
        }
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::domain(format!("t must be finite and > 0, got {t}")));
        }
        Ok(ProcessParams { mu, sigma, t })
    }

    /// Driftless, unit-volatility process over horizon `t`.
    pub fn standard(t: f64) -> Result<Self> {
        Self::new(0.0, 1.0, t)
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// Variance `sigma^2 T` of the terminal value.
    pub fn variance(&self) -> TimeScale {
        TimeScale::new(self.sigma * self.sigma * self.t).expect("validated at construction")
    }

    /// Girsanov factor turning driftless densities into drifted ones.
    pub fn tilt(&self, x: f64) -> f64 {
        if self.mu == 0.0 {
            return 1.0;
        }
        let s2 = self.sigma * self.sigma;
        (self.mu * x / s2 - self.mu * self.mu * self.t / (2.0 * s2)).exp()
    }
}

/// Upper barrier `h`, lower barrier magnitude `l` and terminal value `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Barriers {
    pub h: f64,
    pub l: f64,
    pub x: f64,
}

impl Barriers {
    pub fn new(h: f64, l: f64, x: f64) -> Result<Self> {
        if !(h.is_finite() && h > 0.0 && l.is_finite() && l > 0.0) {
            return Err(Error::domain(format!("barriers must be finite and > 0, got h={h}, l={l}")));
        }
        if !x.is_finite() {
            return Err(Error::domain(format!("terminal value must be finite, got {x}")));
        }
        Ok(Barriers { h, l, x })
    }

    pub fn in_support(&self) -> bool {
        -self.l <= self.x && self.x <= self.h
    }
}

/// `P(M <= h, m >= -l, X in dx) / dx`.
pub fn psi_kernel(p: &ProcessParams, b: &Barriers, sc: &SeriesControl) -> Result<f64> {
    if !b.in_support() {
        return Ok(0.0);
    }
    let v = p.variance();
    let period = 2.0 * (b.h + b.l);
    let (h, x) = (b.h, b.x);
    let sum = symmetric_sum(sc, |n| {
        let shift = n as f64 * period;
        g(shift - x, v) - g(shift + x - 2.0 * h, v)
    })?;
    Ok(p.tilt(x) * sum)
}

/// Joint density of `(M, -m, X)` at `(h, l, x)`: the mixed derivative
/// `d^2 psi / dh dl`, summing `4n [n g''(2n(h+l) - x) - (n-1) g''(2n(h+l) + x - 2h)]`.
pub fn trivariate_density(p: &ProcessParams, b: &Barriers, sc: &SeriesControl) -> Result<f64> {
    if !b.in_support() {
        return Ok(0.0);
    }
    let v = p.variance();
    let period = 2.0 * (b.h + b.l);
    let (h, x) = (b.h, b.x);
    let sum = symmetric_sum(sc, |n| {
        if n == 0 {
            return 0.0;
        }
        let nf = n as f64;
        let shift = nf * period;
        4.0 * nf * (nf * g_second(shift - x, v) - (nf - 1.0) * g_second(shift + x - 2.0 * h, v))
    })?;
    Ok(p.tilt(x) * sum)
}

/// Same density written with the reflection index flipped (`n -> -n`):
/// `4n [n g''(2n(h+l) + x) - (n+1) g''(2n(h+l) - x + 2h)]`.
pub fn trivariate_density_douady_form(p: &ProcessParams, b: &Barriers, sc: &SeriesControl) -> Result<f64> {
    if !b.in_support() {
        return Ok(0.0);
    }
    let v = p.variance();
    let period = 2.0 * (b.h + b.l);
    let (h, x) = (b.h, b.x);
    let sum = symmetric_sum(sc, |n| {
        if n == 0 {
            return 0.0;
        }
        let nf = n as f64;
        let shift = nf * period;
        4.0 * nf * (nf * g_second(shift + x, v) - (nf + 1.0) * g_second(shift - x + 2.0 * h, v))
    })?;
    Ok(p.tilt(x) * sum)
}

/// Joint density of the range `r = M - m` and the terminal value `x`.
///
/// Integrating the trivariate density along `h + l = r` over the interval
/// `h in (max(0, x), min(r, r + x))` (length `r - |x|`) gives
/// `sum_n 4n^2 g''(2nr + x) (r - |x|) - 2n(n+1) [g'(2nr + 2r - |x|) - g'(2nr + |x|)]`.
pub fn joint_range_terminal_density(p: &ProcessParams, r: f64, x: f64, sc: &SeriesControl) -> Result<f64> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::domain(format!("range must be finite and > 0, got {r}")));
    }
    if !x.is_finite() {
        return Err(Error::domain(format!("terminal value must be finite, got {x}")));
    }
    let ax = x.abs();
    if ax > r {
        return Ok(0.0);
    }
    let v = p.variance();
    let width = r - ax;
    let sum = symmetric_sum(sc, |n| {
        let nf = n as f64;
        let shift = 2.0 * nf * r;
        let first = 4.0 * nf * nf * g_second(shift + x, v) * width;
        let second = 2.0 * nf * (nf + 1.0) * (g_prime(shift + 2.0 * r - ax, v) - g_prime(shift + ax, v));
        first - second
    })?;
    Ok(p.tilt(x) * sum)
}
