//! q-shifted factorials `(a;q)_N` and `(a;q)_inf`, and Gaussian binomials.

use crate::error::{QwError, Result};
use crate::params::TruncationPolicy;

/// A factor `1 - q^k a` smaller than this in magnitude counts as zero.
pub const ZERO_FACTOR_THRESHOLD: f64 = 1e-13;

/// `(a;q)_N = (1 - a)(1 - q a) ... (1 - q^(N-1) a)`; `(a;q)_0 = 1`.
pub fn q_shifted_factorial(a: f64, q: f64, n: usize) -> f64 {
    let mut prod = 1.0;
    let mut qk_a = a;
    for _ in 0..n {
        prod *= 1.0 - qk_a;
        qk_a *= q;
    }
    prod
}

/// Truncated infinite product with its bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductValue {
    pub value: f64,
    /// Factors multiplied in.
    pub factors: usize,
}

/// `(a;q)_inf`, cut after the first factor with `|q^k a| < policy.tol`.
///
/// The relative truncation error is roughly `|q^k a| / (1 - q)`. A factor that
/// vanishes within [`ZERO_FACTOR_THRESHOLD`] makes the whole product zero and is
/// reported as [`QwError::ZeroFactor`].
pub fn q_shifted_factorial_inf(a: f64, q: f64, policy: &TruncationPolicy) -> Result<ProductValue> {
    let mut prod = 1.0;
    let mut qk_a = a;
    for k in 0..policy.max_terms() {
        let factor = 1.0 - qk_a;
        if factor.abs() < ZERO_FACTOR_THRESHOLD {
            return Err(QwError::ZeroFactor { index: k });
        }
        prod *= factor;
        if qk_a.abs() < policy.tol() {
            return Ok(ProductValue { value: prod, factors: k + 1 });
        }
        qk_a *= q;
    }
    Err(QwError::NonConvergent { max_terms: policy.max_terms() })
}

/// Gaussian binomial `(q;q)_n / ((q;q)_k (q;q)_(n-k))`, zero for `k > n`.
pub fn gaussian_binomial(n: usize, k: usize, q: f64) -> f64 {
    if k > n {
        return 0.0;
    }
    q_shifted_factorial(q, q, n) / (q_shifted_factorial(q, q, k) * q_shifted_factorial(q, q, n - k))
}
