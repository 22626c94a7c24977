//! Deformed kinematics: uniform velocity and uniform acceleration.
//!
//! Three independent routes produce the uniformly accelerated trajectory:
//!
//! * the closed form `x(t) = x0 + v0 t + a t (t - w) / [2]_q`,
//! * [`iterate_first_order`], which telescopes `x(q t + w) - x(t) = ((q-1)t + w) v(t)`
//!   down the lattice to the fixed point `w0`,
//! * [`solve_second_order_constant_accel`], which works from `D_t^2 x = a` through the
//!   auxiliary function `h(t) = x(q t + w) - q x(t)`.
//!
//! For `w = 0` the closed form is the Jackson Galilei formula `x0 + v0 t + a t^2 / [2]_q`.
//! With `w > 0` the extra `-a w t / [2]_q` is what makes `D_t x = v0 + a t` hold
//! exactly (`D_t t^2 = [2]_q t + w`).

use std::cell::RefCell;

use serde::{Deserialize, Serialize};

use crate::error::{QwError, Result};
use crate::hahn::hahn_derivative;
use crate::params::{DeformationParams, ScalarFunction, TruncationPolicy};
use crate::series::{NeumaierSum, QUIET_TERMS};

/// Initial position, initial velocity and constant acceleration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KinematicState {
    pub x0: f64,
    pub v0: f64,
    pub a: f64,
}

impl KinematicState {
    pub fn new(x0: f64, v0: f64, a: f64) -> Self {
        Self { x0, v0, a }
    }
}

/// Outcome of a lattice iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationReport {
    pub value: f64,
    /// Lattice steps taken.
    pub steps: usize,
    /// Distance of the last lattice point from `w0`, `q^steps |t - w0|`.
    pub residual: f64,
}

/// `x(t) = x0 + v0 t`.
pub fn uniform_velocity_position(state: &KinematicState, t: f64) -> f64 {
    state.x0 + state.v0 * t
}

/// `v(t) = v0 + a t`.
pub fn uniform_accel_velocity(state: &KinematicState, t: f64) -> f64 {
    state.v0 + state.a * t
}

/// Deformed Galilei formula `x0 + v0 t + a t (t - w) / [2]_q`.
pub fn uniform_accel_position(state: &KinematicState, t: f64, params: &DeformationParams) -> f64 {
    state.x0 + state.v0 * t + state.a * t * (t - params.w()) / params.q2()
}

/// Newtonian reference `x0 + v0 t + a t^2 / 2`.
pub fn classical_position(state: &KinematicState, t: f64) -> f64 {
    state.x0 + state.v0 * t + 0.5 * state.a * t * t
}

/// Position at the fixed point, `x(w0) = x(0) + v0 w0 + q a w0^2 / [2]_q`.
pub fn position_at_fixed_point(state: &KinematicState, params: &DeformationParams) -> f64 {
    uniform_accel_position(state, params.w0(), params)
}

/// Lattice increments `((q-1) t_k + w) rhs(t_k)` at `t_k = w0 + q^k (t - w0)`.
fn increments<'a, F: ScalarFunction + ?Sized>(
    rhs: &'a F,
    t: f64,
    params: &'a DeformationParams,
) -> impl Iterator<Item = f64> + 'a {
    let q = params.q();
    let w0 = params.w0();
    let offset = t - w0;
    let step = params.step(t);
    let mut qk = 1.0;
    std::iter::from_fn(move || {
        let inc = qk * step * rhs.eval(w0 + qk * offset);
        qk *= q;
        Some(inc)
    })
}

/// Solves `x(q t + w) - x(t) = ((q - 1) t + w) rhs(t)` for `x(t)` given `x(w0)`.
///
/// Telescopes `x(t) = x(w0) - sum_k [x(t_{k+1}) - x(t_k)]` in ascending `k` with
/// compensated summation, stopping after three consecutive increments below
/// `policy.tol`.
pub fn iterate_first_order<F: ScalarFunction + ?Sized>(
    rhs: &F,
    t: f64,
    params: &DeformationParams,
    x_at_w0: f64,
    policy: &TruncationPolicy,
) -> Result<IterationReport> {
    let mut acc = NeumaierSum::new();
    let mut quiet = 0;
    for (k, inc) in increments(rhs, t, params).take(policy.max_terms()).enumerate() {
        acc.add(inc);
        quiet = if inc.abs() < policy.tol() { quiet + 1 } else { 0 };
        if quiet == QUIET_TERMS {
            let steps = k + 1;
            return Ok(IterationReport {
                value: x_at_w0 - acc.value(),
                steps,
                residual: params.q().powi(steps as i32) * (t - params.w0()).abs(),
            });
        }
    }
    Err(QwError::NonConvergent { max_terms: policy.max_terms() })
}

/// Uniformly accelerated motion by first-order iteration of `D_t x = v0 + a t`.
///
/// The anchor `x(w0)` is itself obtained by iterating from `t = 0`, so this route
/// never touches the closed form.
pub fn iterative_accel_position(
    state: &KinematicState,
    t: f64,
    params: &DeformationParams,
    policy: &TruncationPolicy,
) -> Result<IterationReport> {
    let velocity = |tau: f64| state.v0 + state.a * tau;
    let from_origin = iterate_first_order(&velocity, 0.0, params, 0.0, policy)?;
    let x_w0 = state.x0 - from_origin.value;
    iterate_first_order(&velocity, t, params, x_w0, policy)
}

/// Particular solution `R(t) = x~(t) - x(w0)` of the second-order pipeline.
///
/// Stage one telescopes `h(q t + w) - h(t) = q a ((q-1)t + w)^2` along the lattice of
/// `t`, giving `h(t_k) - h(w0)` for every lattice point as a suffix sum of the same
/// increments. Stage two resolves `x~(q t + w) - q x~(t) = h(t)`: iterating it toward
/// `w0` and using `h(w0) = (1 - q) x(w0)` leaves
/// `x~(t) = x(w0) - sum_k q^-(k+1) (h(t_k) - h(w0))`.
///
/// The `q^-(k+1)` amplification means stage one has to be resolved to `tol^2`.
fn second_order_particular(a: f64, t: f64, params: &DeformationParams, policy: &TruncationPolicy) -> Result<f64> {
    let q = params.q();
    let h_rhs = |tau: f64| q * a * params.step(tau);
    let fine = policy.scaled(policy.tol());

    let mut h_incs = Vec::new();
    let mut quiet = 0;
    for inc in increments(&h_rhs, t, params).take(fine.max_terms()) {
        h_incs.push(inc);
        quiet = if inc.abs() < fine.tol() { quiet + 1 } else { 0 };
        if quiet == QUIET_TERMS {
            break;
        }
    }
    if quiet < QUIET_TERMS {
        return Err(QwError::NonConvergent { max_terms: fine.max_terms() });
    }

    // h(t_k) - h(w0) = -sum_{j >= k} inc_j, accumulated from the small end
    let mut tail = NeumaierSum::new();
    let mut h_offsets = vec![0.0; h_incs.len()];
    for (k, inc) in h_incs.iter().enumerate().rev() {
        tail.add(*inc);
        h_offsets[k] = -tail.value();
    }

    let mut acc = NeumaierSum::new();
    let mut quiet = 0;
    let mut q_inv = 1.0 / q;
    for (k, dh) in h_offsets.iter().enumerate() {
        if k >= policy.max_terms() {
            return Err(QwError::NonConvergent { max_terms: policy.max_terms() });
        }
        let term = q_inv * dh;
        acc.add(term);
        quiet = if term.abs() < policy.tol() { quiet + 1 } else { 0 };
        if quiet == QUIET_TERMS {
            break;
        }
        q_inv /= q;
    }
    Ok(-acc.value())
}

/// Uniformly accelerated motion through the second-order equation `D_t^2 x = a`.
///
/// With `R` the particular solution (see the module docs), the general solution is
/// `x(t) = x(w0) + R(t) + C (t - w0)`; `C(t - w0)` solves the homogeneous
/// `x(q t + w) = q x(t)`. `C` is fixed by `D_t x(0) = v0` and `x(w0)` by `x(0) = x0`,
/// both evaluated numerically on `R`.
pub fn solve_second_order_constant_accel(
    state: &KinematicState,
    t: f64,
    params: &DeformationParams,
    policy: &TruncationPolicy,
) -> Result<f64> {
    let failure = RefCell::new(None);
    let particular = |tau: f64| match second_order_particular(state.a, tau, params, policy) {
        Ok(v) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            f64::NAN
        }
    };

    let slope = state.v0 - hahn_derivative(&particular, 0.0, params);
    let r0 = particular(0.0);
    let rt = particular(t);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let w0 = params.w0();
    let x_w0 = state.x0 - r0 + slope * w0;
    Ok(x_w0 + rt + slope * (t - w0))
}
