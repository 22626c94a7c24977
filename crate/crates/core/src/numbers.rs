//! q-numbers, (q,w)-numbers and q-factorials.

use crate::error::{QwError, Result};
use crate::params::DeformationParams;

/// Jackson q-number `[k]_q = (1 - q^k) / (1 - q) = 1 + q + ... + q^(k-1)`.
pub fn q_number(k: u32, q: f64) -> f64 {
    if k == 0 {
        return 0.0;
    }
    (1.0 - q.powi(k as i32)) / (1.0 - q)
}

/// Hahn (q,w)-number `[k]_{q,w} = w [k]_q`; increases to `w0` as `k -> inf`.
pub fn qw_number(k: u32, params: &DeformationParams) -> f64 {
    params.w() * q_number(k, params.q())
}

/// `[n]_q! = [1]_q [2]_q ... [n]_q`, with `[0]_q! = 1`.
pub fn q_factorial(n: u32, q: f64) -> f64 {
    (1..=n).map(|j| q_number(j, q)).product()
}

/// `[n]_{1/q}! = q^(-n(n-1)/2) [n]_q!`.
///
/// Computed from `[n]_q!` so that no individual factor grows like `q^-j`.
/// Fails with [`QwError::Overflow`] once the power of `q` leaves the f64 range.
pub fn q_inv_factorial(n: u32, q: f64) -> Result<f64> {
    let pairs = f64::from(n) * (f64::from(n) - 1.0) / 2.0;
    let log_scale = -pairs * q.ln();
    if log_scale > f64::MAX.ln() {
        return Err(QwError::Overflow("q^(-n(n-1)/2)"));
    }
    let value = log_scale.exp() * q_factorial(n, q);
    if !value.is_finite() {
        return Err(QwError::Overflow("[n]_{1/q}!"));
    }
    Ok(value)
}
