//! The Hahn difference operator, its inverse (the Hahn integral from `w0`),
//! (q,w)-polynomials and the lattice map `t -> q t + w`.

use crate::error::Result;
use crate::numbers::qw_number;
use crate::params::{DeformationParams, ScalarFunction, TruncationPolicy};
use crate::series::sum_series;

/// Relative distance to `w0` below which `t` is treated as the fixed point.
pub const FIXED_POINT_BRANCH_TOL: f64 = 1e-12;

/// Relative central-difference step used at the fixed point.
pub const FIXED_POINT_DIFF_STEP: f64 = 1e-6;

/// Whether `t` falls on the `t = w0` branch of the Hahn derivative.
pub fn at_fixed_point(t: f64, params: &DeformationParams) -> bool {
    (t - params.w0()).abs() <= FIXED_POINT_BRANCH_TOL * (1.0 + params.w0().abs())
}

/// Hahn derivative `(f(q t + w) - f(t)) / ((q - 1) t + w)`.
///
/// At `t = w0` the quotient degenerates; there the ordinary derivative is
/// returned, estimated by a second-order central difference with step
/// `1e-6 (1 + |w0|)`.
pub fn hahn_derivative<F: ScalarFunction + ?Sized>(f: &F, t: f64, params: &DeformationParams) -> f64 {
    if at_fixed_point(t, params) {
        let h = FIXED_POINT_DIFF_STEP * (1.0 + params.w0().abs());
        return (f.eval(t + h) - f.eval(t - h)) / (2.0 * h);
    }
    (f.eval(advance(t, params)) - f.eval(t)) / params.step(t)
}

/// Hahn integral from `w0` to `t`:
/// `((1 - q) t - w) * sum_k q^k f(q^k t + [k]_{q,w})`.
///
/// The series stops after three consecutive terms whose contribution
/// `|q^k f(t_k) ((1 - q) t - w)|` is below `policy.tol`.
pub fn hahn_integral<F: ScalarFunction + ?Sized>(
    f: &F,
    t: f64,
    params: &DeformationParams,
    policy: &TruncationPolicy,
) -> Result<f64> {
    let q = params.q();
    let prefactor = (1.0 - q) * t - params.w();
    let w0 = params.w0();
    let offset = t - w0;
    let mut qk = 1.0;
    let sum = sum_series(policy, prefactor, |_| {
        let term = qk * f.eval(w0 + qk * offset);
        qk *= q;
        term
    })?;
    Ok(prefactor * sum.value)
}

/// `(t; q, w)_n = prod_{j=1..n} (t - [j]_{q,w})`.
pub fn qw_polynomial(t: f64, n: u32, params: &DeformationParams) -> f64 {
    (1..=n).map(|j| t - qw_number(j, params)).product()
}

/// One lattice step, `q t + w`.
pub fn advance(t: f64, params: &DeformationParams) -> f64 {
    params.q() * t + params.w()
}

/// `n` lattice steps at once, `q^n t + [n]_{q,w}`.
pub fn advance_n(t: f64, n: u32, params: &DeformationParams) -> f64 {
    params.q().powi(n as i32) * t + qw_number(n, params)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(q: f64, w: f64) -> DeformationParams {
        DeformationParams::new(q, w).unwrap()
    }

    #[test]
    fn derivative_of_constant_and_identity() {
        let p = params(0.5, 0.1);
        for t in [-3.0, 0.0, 0.7, 5.0] {
            assert_eq!(hahn_derivative(&|_t: f64| 4.2, t, &p), 0.0);
            assert!((hahn_derivative(&|t: f64| t, t, &p) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn derivative_of_square() {
        // (q t + w) + t at q = 0.5, w = 0.1, t = 1
        let p = params(0.5, 0.1);
        let d = hahn_derivative(&|t: f64| t * t, 1.0, &p);
        assert!((d - 1.6).abs() < 1e-14);
    }

    #[test]
    fn derivative_at_fixed_point_is_ordinary_derivative() {
        let p = params(0.5, 0.1);
        let d = hahn_derivative(&|t: f64| t.powi(3), p.w0(), &p);
        assert!((d - 3.0 * 0.04).abs() < 1e-10);
        let jackson = params(0.3, 0.0);
        let d = hahn_derivative(&|t: f64| t.sin(), 0.0, &jackson);
        assert!((d - 1.0).abs() < 1e-10);
    }

    #[test]
    fn integral_trivial_cases() {
        let p = params(0.5, 0.1);
        let pol = TruncationPolicy::default();
        assert_eq!(hahn_integral(&|_t: f64| 0.0, 2.0, &p, &pol).unwrap(), 0.0);
        assert_eq!(hahn_integral(&|t: f64| t * t + 1.0, p.w0(), &p, &pol).unwrap(), 0.0);
    }

    #[test]
    fn derivative_inverts_integral() {
        let p = params(0.5, 0.1);
        let pol = TruncationPolicy::default();
        let f = |t: f64| t * t;
        let antiderivative = |t: f64| hahn_integral(&f, t, &p, &pol).unwrap();
        for t in [0.3, 1.0, 2.0] {
            let back = hahn_derivative(&antiderivative, t, &p);
            assert!((back - f(t)).abs() < 1e-8, "t={t}: {back}");
        }
    }

    #[test]
    fn integral_of_one_is_distance_from_fixed_point() {
        let p = params(0.6, 0.3);
        let pol = TruncationPolicy::default();
        for t in [-1.0, 0.0, 2.5] {
            let i = hahn_integral(&|_t: f64| 1.0, t, &p, &pol).unwrap();
            assert!((i - (t - p.w0())).abs() < 1e-13);
        }
    }

    #[test]
    fn polynomial_trivial_cases() {
        let p = params(0.4, 0.25);
        assert_eq!(qw_polynomial(3.3, 0, &p), 1.0);
        for n in 1..5 {
            assert_eq!(qw_polynomial(p.w(), n, &p), 0.0);
        }
    }

    #[test]
    fn lattice_map() {
        let p = params(0.5, 0.1);
        assert!((advance(p.w0(), &p) - p.w0()).abs() < 1e-16);
        assert_eq!(advance_n(1.7, 0, &p), 1.7);
        // 0.125 + 0.1 * 1.75
        assert!((advance_n(1.0, 3, &p) - 0.3).abs() < 1e-15);
        let mut t = 1.0;
        for _ in 0..3 {
            t = advance(t, &p);
        }
        assert!((t - 0.3).abs() < 1e-15);
    }

    #[test]
    fn lattice_converges_geometrically() {
        let p = params(0.7, 0.2);
        let t = 3.0;
        for n in 0..60 {
            let dist = (advance_n(t, n, &p) - p.w0()).abs();
            let expected = p.q().powi(n as i32) * (t - p.w0()).abs();
            assert!((dist - expected).abs() < 1e-14, "n={n}");
        }
    }
}
