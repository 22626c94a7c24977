//! Deformation parameters, truncation policy and the scalar-function operand.

use serde::{Deserialize, Serialize};

use crate::error::{QwError, Result};

/// The Hahn deformation pair `(q, w)` together with the lattice fixed point
/// `w0 = w / (1 - q)`.
///
/// Restricted to `0 < q < 1` and `w >= 0`. `w = 0` is plain Jackson q-calculus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeformationParams {
    q: f64,
    w: f64,
    w0: f64,
}

impl DeformationParams {
    pub fn new(q: f64, w: f64) -> Result<Self> {
        if !q.is_finite() || q <= 0.0 || q >= 1.0 {
            return Err(QwError::InvalidParams(format!("q must lie in (0, 1), got {q}")));
        }
        if !w.is_finite() || w < 0.0 {
            return Err(QwError::InvalidParams(format!("w must be finite and >= 0, got {w}")));
        }
        Ok(Self { q, w, w0: w / (1.0 - q) })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn w(&self) -> f64 {
        self.w
    }

    /// Fixed point of `t -> q t + w`.
    pub fn w0(&self) -> f64 {
        self.w0
    }

    /// Lattice step `(q t + w) - t = (q - 1) t + w`, the Hahn difference denominator.
    pub fn step(&self, t: f64) -> f64 {
        (self.q - 1.0) * t + self.w
    }

    /// `[2]_q = 1 + q`.
    pub fn q2(&self) -> f64 {
        1.0 + self.q
    }
}

/// Stopping contract shared by every infinite series and product.
///
/// `tol` is an absolute threshold on terms (or on `|q^k a|` for products);
/// hitting `max_terms` first is reported as [`QwError::NonConvergent`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationPolicy {
    tol: f64,
    max_terms: usize,
}

impl TruncationPolicy {
    pub const DEFAULT_TOL: f64 = 1e-14;
    pub const DEFAULT_MAX_TERMS: usize = 100_000;

    pub fn new(tol: f64, max_terms: usize) -> Result<Self> {
        if !tol.is_finite() || tol <= 0.0 {
            return Err(QwError::InvalidPolicy(format!("tol must be finite and > 0, got {tol}")));
        }
        if max_terms == 0 {
            return Err(QwError::InvalidPolicy("max_terms must be positive".into()));
        }
        Ok(Self { tol, max_terms })
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    /// Same term budget, tolerance multiplied by `factor`.
    pub(crate) fn scaled(&self, factor: f64) -> Self {
        Self { tol: self.tol * factor, max_terms: self.max_terms }
    }
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self { tol: Self::DEFAULT_TOL, max_terms: Self::DEFAULT_MAX_TERMS }
    }
}

/// A real function of one real variable.
///
/// Implementations must be deterministic. Any `Fn(f64) -> f64` qualifies.
pub trait ScalarFunction {
    fn eval(&self, t: f64) -> f64;
}

impl<F> ScalarFunction for F
where
    F: Fn(f64) -> f64,
{
    fn eval(&self, t: f64) -> f64 {
        self(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_range_q_and_negative_w() {
        assert!(DeformationParams::new(1.0, 0.1).is_err());
        assert!(DeformationParams::new(0.0, 0.1).is_err());
        assert!(DeformationParams::new(1.2, 0.1).is_err());
        assert!(DeformationParams::new(0.5, -0.1).is_err());
        assert!(DeformationParams::new(f64::NAN, 0.1).is_err());
        assert!(DeformationParams::new(0.5, 0.0).is_ok());
    }

    #[test]
    fn fixed_point() {
        let p = DeformationParams::new(0.5, 0.1).unwrap();
        assert_eq!(p.w0(), 0.2);
        assert_eq!(p.step(p.w0()), 0.0);
        let jackson = DeformationParams::new(0.3, 0.0).unwrap();
        assert_eq!(jackson.w0(), 0.0);
    }

    #[test]
    fn policy_validation() {
        assert!(TruncationPolicy::new(0.0, 10).is_err());
        assert!(TruncationPolicy::new(1e-10, 0).is_err());
        let p = TruncationPolicy::default();
        assert_eq!(p.tol(), 1e-14);
    }
}
