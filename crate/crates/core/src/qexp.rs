//! Deformed exponentials.
//!
//! * `e_{q,w}(a t) = 1 / (-a((q-1)t + w); q)_inf`, the eigenfunction of the Hahn
//!   derivative: `D_t e_{q,w}(a t) = a e_{q,w}(a t)`. It equals 1 at `t = w0` and
//!   has real poles wherever a factor of the product vanishes.
//! * `e_q(x) = sum x^n / [n]_q!`, convergent for `|x| < 1 / (1 - q)`.
//! * `e_{1/q}(x) = sum x^n / [n]_{1/q}! = sum q^(n(n-1)/2) x^n / [n]_q!`, entire.

use crate::error::{QwError, Result};
use crate::numbers::q_number;
use crate::params::{DeformationParams, TruncationPolicy};
use crate::pochhammer::q_shifted_factorial_inf;
use crate::series::sum_series;

/// Closest approach to the radius of convergence accepted by [`exp_q_series`].
pub const RADIUS_MARGIN: f64 = 1.5e-8;

/// `e_{q,w}(a t)`.
pub fn exp_qw(a: f64, t: f64, params: &DeformationParams, policy: &TruncationPolicy) -> Result<f64> {
    let arg = -a * params.step(t);
    match q_shifted_factorial_inf(arg, params.q(), policy) {
        Ok(p) => Ok(1.0 / p.value),
        Err(QwError::ZeroFactor { index }) => Err(QwError::PoleEncountered { index }),
        Err(e) => Err(e),
    }
}

/// `e_q(x)`; rejects `|x| (1 - q) >= 1` instead of returning a divergent partial sum.
pub fn exp_q_series(x: f64, q: f64, policy: &TruncationPolicy) -> Result<f64> {
    let scaled = x.abs() * (1.0 - q);
    if scaled >= 1.0 - RADIUS_MARGIN {
        return Err(QwError::OutOfRadius { scaled });
    }
    let mut term = 1.0;
    let sum = sum_series(policy, 1.0, |n| {
        if n > 0 {
            term *= x / q_number(n as u32, q);
        }
        term
    })?;
    Ok(sum.value)
}

/// `e_{1/q}(x)`, summed through `[n]_q!` so no factor grows like `q^-n`.
pub fn exp_qinv_series(x: f64, q: f64, policy: &TruncationPolicy) -> Result<f64> {
    let mut term = 1.0;
    let mut q_pow = 1.0; // q^(n-1)
    let sum = sum_series(policy, 1.0, |n| {
        if n > 0 {
            term *= x * q_pow / q_number(n as u32, q);
            q_pow *= q;
        }
        term
    })?;
    Ok(sum.value)
}

/// Both sides of `e_{1/q}(a) - e_{1/q}(-a) = 2 sum_n a^(2n+1) / [2n+1]_{1/q}!`.
///
/// `lhs` comes from two calls to [`exp_qinv_series`]; `rhs` sums the odd terms
/// directly in the form `q^(n(2n+1)) a^(2n+1) / [2n+1]_q!`.
pub fn odd_part_qinv(a: f64, q: f64, policy: &TruncationPolicy) -> Result<(f64, f64)> {
    let lhs = exp_qinv_series(a, q, policy)? - exp_qinv_series(-a, q, policy)?;
    let rhs = 2.0 * odd_series(a, q, policy)?;
    Ok((lhs, rhs))
}

/// `sum_n q^(n(2n+1)) y^(2n+1) / [2n+1]_q!`.
pub fn odd_series(y: f64, q: f64, policy: &TruncationPolicy) -> Result<f64> {
    let y2 = y * y;
    let mut term = y;
    let sum = sum_series(policy, 1.0, |n| {
        if n > 0 {
            let m = 2 * n as u32;
            term *= y2 * q.powi(2 * m as i32 - 1) / (q_number(m, q) * q_number(m + 1, q));
        }
        term
    })?;
    Ok(sum.value)
}
