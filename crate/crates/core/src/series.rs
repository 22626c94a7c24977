//! Compensated accumulation and the shared series stopping rule.

use crate::error::{QwError, Result};
use crate::params::TruncationPolicy;

/// Number of consecutive sub-tolerance terms required before a series is cut.
pub const QUIET_TERMS: usize = 3;

/// Kahan-Babuska-Neumaier running sum.
#[derive(Debug, Default, Clone, Copy)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = NeumaierSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Result of a truncated series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub value: f64,
    /// Number of terms accumulated, including the trailing quiet ones.
    pub terms: usize,
}

/// Sums `term(0) + term(1) + ...` until [`QUIET_TERMS`] consecutive terms satisfy
/// `|scale * term| < policy.tol`.
///
/// `scale` is a prefactor the caller applies afterwards; the stopping rule looks
/// at the scaled contribution.
pub fn sum_series<F>(policy: &TruncationPolicy, scale: f64, mut term: F) -> Result<SeriesSum>
where
    F: FnMut(usize) -> f64,
{
    let mut acc = NeumaierSum::new();
    let mut quiet = 0;
    for k in 0..policy.max_terms() {
        let x = term(k);
        acc.add(x);
        if (scale * x).abs() < policy.tol() {
            quiet += 1;
            if quiet == QUIET_TERMS {
                return Ok(SeriesSum { value: acc.value(), terms: k + 1 });
            }
        } else {
            quiet = 0;
        }
    }
    Err(QwError::NonConvergent { max_terms: policy.max_terms() })
}
