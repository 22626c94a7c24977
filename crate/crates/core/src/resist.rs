//! Vertical motion in a medium whose drag is proportional to the deformed average
//! velocity `(v(t) + v(q t + w)) / [2]_q`.
//!
//! Equation of motion: `m D_t v = m g - k (v(t) + v(q t + w)) / [2]_q`, with the
//! initial velocity taken as the value at the fixed point, `v(w0) = v0`.
//!
//! Writing `kappa = k / (m [2]_q)`, `s = (q - 1) t + w` and `x = kappa s`, the
//! equation becomes `(1 - x) v(t) = -g s + (1 + x) v(q t + w)`. Each solution is
//! offered three ways:
//!
//! * closed form through `e_{q,w}` and `e_{1/q}`,
//! * the resummed odd series with weights `q^(n(2n+1)) / [2n+1]_q!`,
//! * `N` explicit backward steps of the functional equation with `v(t_N) ~ v0`.

use serde::{Deserialize, Serialize};

use crate::error::{QwError, Result};
use crate::hahn::{advance, hahn_derivative};
use crate::numbers::q_factorial;
use crate::params::{DeformationParams, ScalarFunction, TruncationPolicy};
use crate::pochhammer::{gaussian_binomial, q_shifted_factorial, ZERO_FACTOR_THRESHOLD};
use crate::qexp::{exp_qinv_series, exp_qw, odd_series};
use crate::series::NeumaierSum;

/// Backward steps used by [`drag_velocity_iterative`] unless overridden.
pub const DEFAULT_DRAG_STEPS: usize = 120;
/// Backward steps used by [`gravity_drag_velocity_iterative`] unless overridden.
pub const DEFAULT_GRAVITY_DRAG_STEPS: usize = 150;

/// Mass, drag coefficient, gravitational acceleration and initial velocity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DragParams {
    m: f64,
    k: f64,
    g: f64,
    v0: f64,
}

impl DragParams {
    pub fn new(m: f64, k: f64, g: f64, v0: f64) -> Result<Self> {
        if !(m.is_finite() && m > 0.0) {
            return Err(QwError::InvalidDrag(format!("mass must be finite and > 0, got {m}")));
        }
        if !(k.is_finite() && k > 0.0) {
            return Err(QwError::InvalidDrag(format!("drag coefficient must be finite and > 0, got {k}")));
        }
        if !g.is_finite() || !v0.is_finite() {
            return Err(QwError::InvalidDrag("g and v0 must be finite".into()));
        }
        Ok(Self { m, k, g, v0 })
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn v0(&self) -> f64 {
        self.v0
    }
}

/// `kappa = k / (m [2]_q)`.
pub fn kappa(dp: &DragParams, q: f64) -> f64 {
    dp.k / (dp.m * (1.0 + q))
}

/// Pure drag: `v(t) = v0 e_{q,w}(-kappa t) / e_{q,w}(kappa t)`.
pub fn drag_velocity(dp: &DragParams, t: f64, params: &DeformationParams, policy: &TruncationPolicy) -> Result<f64> {
    let kap = kappa(dp, params.q());
    let decay = exp_qw(-kap, t, params, policy)?;
    let growth = exp_qw(kap, t, params, policy)?;
    Ok(dp.v0 * decay / growth)
}

/// Pure drag after `steps` backward iterations of the functional equation:
/// `v(t) = (-x;q)_N / (x;q)_N * v(t_N)` with `v(t_N)` replaced by `v0`.
pub fn drag_velocity_iterative(dp: &DragParams, t: f64, params: &DeformationParams, steps: usize) -> Result<f64> {
    let x = kappa(dp, params.q()) * params.step(t);
    check_denominator(x, params.q(), steps)?;
    let ratio = q_shifted_factorial(-x, params.q(), steps) / q_shifted_factorial(x, params.q(), steps);
    Ok(ratio * dp.v0)
}

/// Gravity plus drag in closed form:
///
/// `v(t) = v0 e(-kappa t)/e(kappa t)
///        + g/(2 kappa) e(-kappa t) [e_{1/q}(kappa (t - w0)) - e_{1/q}(-kappa (t - w0))]`
///
/// with `e = e_{q,w}`. Reduces to [`drag_velocity`] when `g = 0`.
pub fn gravity_drag_velocity(
    dp: &DragParams,
    t: f64,
    params: &DeformationParams,
    policy: &TruncationPolicy,
) -> Result<f64> {
    let homogeneous = drag_velocity(dp, t, params, policy)?;
    if dp.g == 0.0 {
        return Ok(homogeneous);
    }
    let kap = kappa(dp, params.q());
    let y = kap * (t - params.w0());
    let bracket = exp_qinv_series(y, params.q(), policy)? - exp_qinv_series(-y, params.q(), policy)?;
    let decay = exp_qw(-kap, t, params, policy)?;
    Ok(homogeneous + dp.g / (2.0 * kap) * decay * bracket)
}

/// `n`-th term of the resummed series, `q^(n(2n+1)) y^(2n+1) / [2n+1]_q!`,
/// evaluated directly.
pub fn resummed_series_term(n: u32, y: f64, q: f64) -> f64 {
    let odd = 2 * n + 1;
    q.powi((n * odd) as i32) * y.powi(odd as i32) / q_factorial(odd, q)
}

/// Gravity plus drag through the resummed odd series:
///
/// `v(t) = v0 e(-kappa t)/e(kappa t)
///        + (g/kappa) e(-kappa t) sum_n q^(n(2n+1)) (kappa (t - w0))^(2n+1) / [2n+1]_q!`
pub fn gravity_drag_velocity_series(
    dp: &DragParams,
    t: f64,
    params: &DeformationParams,
    policy: &TruncationPolicy,
) -> Result<f64> {
    let homogeneous = drag_velocity(dp, t, params, policy)?;
    if dp.g == 0.0 {
        return Ok(homogeneous);
    }
    let q = params.q();
    let kap = kappa(dp, q);
    let y = kap * (t - params.w0());
    let series = odd_series(y, q, policy)?;
    let decay = exp_qw(-kap, t, params, policy)?;
    Ok(homogeneous + dp.g / kap * decay * series)
}

/// Gravity plus drag after `steps` backward iterations:
///
/// `v(t) = (-x;q)_N/(x;q)_N v(t_N) - g s sum_{j<N} q^j (-x;q)_j / (x;q)_{j+1}`
///
/// with `v(t_N)` replaced by `v0`.
pub fn gravity_drag_velocity_iterative(
    dp: &DragParams,
    t: f64,
    params: &DeformationParams,
    steps: usize,
) -> Result<f64> {
    let q = params.q();
    let s = params.step(t);
    let x = kappa(dp, q) * s;
    check_denominator(x, q, steps)?;

    let mut num = 1.0; // (-x;q)_j
    let mut den = 1.0; // (x;q)_j
    let mut qj = 1.0;
    let mut sum = NeumaierSum::new();
    for _ in 0..steps {
        den *= 1.0 - qj * x;
        sum.add(qj * num / den);
        num *= 1.0 + qj * x;
        qj *= q;
    }
    Ok(num / den * dp.v0 - dp.g * s * sum.value())
}

fn check_denominator(x: f64, q: f64, steps: usize) -> Result<()> {
    let mut qj_x = x;
    for j in 0..steps {
        if (1.0 - qj_x).abs() < ZERO_FACTOR_THRESHOLD {
            return Err(QwError::ZeroFactor { index: j });
        }
        qj_x *= q;
    }
    Ok(())
}

/// Newtonian limit `v0 e^(-kt/m) + (m g / k)(1 - e^(-kt/m))`.
pub fn classical_drag_velocity(dp: &DragParams, t: f64) -> f64 {
    let rate = dp.k / dp.m;
    let decay = (-rate * t).exp();
    dp.v0 * decay - dp.m * dp.g / dp.k * (-rate * t).exp_m1()
}

/// The two sides of the finite resummation identity behind the series route,
/// for argument `x = kappa s` and `steps` = N:
///
/// * iteration side: `-x sum_{j<N} q^j (-x;q)_j / (x;q)_{j+1}`
/// * resummed side: `-(x;q)_N^-1 sum_{n <= (N-1)/2} [N, 2n+1]_q q^(n(2n+1)) x^(2n+1)`
///
/// Both equal `(1 - (-x;q)_N / (x;q)_N) / 2`; multiplied by `g / kappa` they give
/// the gravity contribution after `N` steps.
pub fn resummation_sides(x: f64, q: f64, steps: usize) -> Result<(f64, f64)> {
    check_denominator(x, q, steps)?;

    let mut num = 1.0;
    let mut den = 1.0;
    let mut qj = 1.0;
    let mut iter_sum = NeumaierSum::new();
    for _ in 0..steps {
        den *= 1.0 - qj * x;
        iter_sum.add(qj * num / den);
        num *= 1.0 + qj * x;
        qj *= q;
    }
    let iteration_side = -x * iter_sum.value();

    let mut odd = NeumaierSum::new();
    let mut n = 0usize;
    while 2 * n < steps {
        let k = 2 * n + 1;
        odd.add(gaussian_binomial(steps, k, q) * q.powi((n * k) as i32) * x.powi(k as i32));
        n += 1;
    }
    let resummed_side = -odd.value() / q_shifted_factorial(x, q, steps);
    Ok((iteration_side, resummed_side))
}

/// Residual of the equation of motion, `m D_t v + k (v(t) + v(q t + w)) / [2]_q - m g`.
pub fn equation_of_motion_residual<F: ScalarFunction + ?Sized>(
    dp: &DragParams,
    v: &F,
    t: f64,
    params: &DeformationParams,
) -> f64 {
    let avg = (v.eval(t) + v.eval(advance(t, params))) / params.q2();
    dp.m * hahn_derivative(v, t, params) + dp.k * avg - dp.m * dp.g
}
