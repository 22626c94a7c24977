//! Randomized verification of the operator and series identities.
//!
//! Every check evaluates both sides independently and reports the worst scaled
//! residual `|lhs - rhs| / max(1, |lhs|, |rhs|)` per identity and per `q`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::hahn::{advance, hahn_derivative, qw_polynomial};
use crate::numbers::q_number;
use crate::params::{DeformationParams, TruncationPolicy};
use crate::qexp::{exp_qw, odd_part_qinv};
use crate::resist::resummation_sides;

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub q_grid: Vec<f64>,
    pub w_grid: Vec<f64>,
    pub seed: u64,
    /// Random cases per identity and per `q`.
    pub cases: usize,
    /// Replaces every per-identity tolerance when set.
    pub tol_override: Option<f64>,
    pub policy: TruncationPolicy,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            q_grid: vec![0.3, 0.5, 0.9],
            w_grid: vec![0.0, 0.1, 1.0],
            seed: 0x9e37_79b9,
            cases: 200,
            tol_override: None,
            policy: TruncationPolicy::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityResult {
    pub name: &'static str,
    pub q: f64,
    pub max_residual: f64,
    pub tolerance: f64,
}

impl IdentityResult {
    pub fn passed(&self) -> bool {
        self.max_residual < self.tolerance
    }
}

/// Name and default tolerance of every identity in the suite, in report order.
pub const IDENTITIES: &[(&str, f64)] = &[
    ("leibniz", 1e-10),
    ("quotient", 1e-10),
    ("power_rule", 1e-10),
    ("shifted_power_rule", 1e-10),
    ("qw_polynomial_derivative", 1e-10),
    ("sum_q_numbers", 1e-12),
    ("sum_weighted_q_numbers", 1e-12),
    ("exp_eigenfunction", 1e-9),
    ("odd_part_qinv", 1e-12),
    ("resummation", 1e-10),
];

pub fn scaled_residual(lhs: f64, rhs: f64) -> f64 {
    let diff = (lhs - rhs).abs();
    if diff.is_nan() {
        return f64::INFINITY;
    }
    diff / 1f64.max(lhs.abs()).max(rhs.abs())
}

/// Random polynomial coefficients in `[-1, 1]`, lowest degree first.
fn random_poly(rng: &mut ChaCha8Rng, max_degree: usize) -> Vec<f64> {
    let degree = rng.gen_range(0..=max_degree);
    (0..=degree).map(|_| rng.gen_range(-1.0..=1.0)).collect()
}

fn horner(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
}

/// Random evaluation point in `[-2, 2]` at least 0.5 away from `w0`.
fn random_point(rng: &mut ChaCha8Rng, params: &DeformationParams) -> f64 {
    loop {
        let t = rng.gen_range(-2.0..=2.0);
        if (t - params.w0()).abs() >= 0.5 {
            return t;
        }
    }
}

struct Worst(f64);

impl Worst {
    fn push(&mut self, r: f64) {
        if r > self.0 || r.is_nan() {
            self.0 = if r.is_nan() { f64::INFINITY } else { r };
        }
    }
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<IdentityResult>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::new();
    for &(name, default_tol) in IDENTITIES {
        for &q in &cfg.q_grid {
            let max_residual = match name {
                "sum_q_numbers" => sum_q_numbers(q),
                "sum_weighted_q_numbers" => sum_weighted_q_numbers(q),
                "odd_part_qinv" => odd_part(q, &cfg.policy)?,
                "resummation" => resummation(q, cfg.cases, &mut rng)?,
                "exp_eigenfunction" => exp_eigenfunction(q, &cfg.policy)?,
                _ => {
                    let mut worst = Worst(0.0);
                    for case in 0..cfg.cases {
                        let w = cfg.w_grid[case % cfg.w_grid.len()];
                        let params = DeformationParams::new(q, w)?;
                        worst.push(operator_case(name, &params, &mut rng));
                    }
                    worst.0
                }
            };
            out.push(IdentityResult { name, q, max_residual, tolerance: cfg.tol_override.unwrap_or(default_tol) });
        }
    }
    Ok(out)
}

fn operator_case(name: &str, params: &DeformationParams, rng: &mut ChaCha8Rng) -> f64 {
    let t = random_point(rng, params);
    let t1 = advance(t, params);
    match name {
        "leibniz" => {
            let (f, g) = (random_poly(rng, 4), random_poly(rng, 4));
            let lhs = hahn_derivative(&|x: f64| horner(&f, x) * horner(&g, x), t, params);
            let df = hahn_derivative(&|x: f64| horner(&f, x), t, params);
            let dg = hahn_derivative(&|x: f64| horner(&g, x), t, params);
            scaled_residual(lhs, df * horner(&g, t) + horner(&f, t1) * dg)
        }
        "quotient" => {
            let f = random_poly(rng, 4);
            let g = loop {
                let g = random_poly(rng, 4);
                if horner(&g, t).abs() > 0.5 && horner(&g, t1).abs() > 0.5 {
                    break g;
                }
            };
            let lhs = hahn_derivative(&|x: f64| horner(&f, x) / horner(&g, x), t, params);
            let df = hahn_derivative(&|x: f64| horner(&f, x), t, params);
            let dg = hahn_derivative(&|x: f64| horner(&g, x), t, params);
            let (gt, gt1) = (horner(&g, t), horner(&g, t1));
            scaled_residual(lhs, (df * gt - horner(&f, t) * dg) / (gt * gt1))
        }
        "power_rule" => {
            let n = rng.gen_range(0..=8);
            let lhs = hahn_derivative(&|x: f64| x.powi(n), t, params);
            let rhs: f64 = (0..n).map(|k| t1.powi(k) * t.powi(n - k - 1)).sum();
            scaled_residual(lhs, rhs)
        }
        "shifted_power_rule" => {
            let n = rng.gen_range(0..=6);
            let a = rng.gen_range(-2.0..=2.0);
            let b = rng.gen_range(-2.0..=2.0);
            let lhs = hahn_derivative(&|x: f64| (a * x + b).powi(n), t, params);
            let rhs: f64 = a * (0..n).map(|k| (a * t1 + b).powi(k) * (a * t + b).powi(n - k - 1)).sum::<f64>();
            scaled_residual(lhs, rhs)
        }
        "qw_polynomial_derivative" => {
            let n = rng.gen_range(1..=6);
            let lhs = hahn_derivative(&|x: f64| qw_polynomial(x, n, params), t, params);
            scaled_residual(lhs, q_number(n, params.q()) * qw_polynomial(t, n - 1, params))
        }
        other => unreachable!("not an operator identity: {other}"),
    }
}

/// `sum_{k<N} [k]_q = (N - [N]_q) / (1 - q)` for `N = 1..=50`.
fn sum_q_numbers(q: f64) -> f64 {
    let mut worst = Worst(0.0);
    let mut lhs = 0.0;
    for n in 1..=50u32 {
        lhs += q_number(n - 1, q);
        worst.push(scaled_residual(lhs, (f64::from(n) - q_number(n, q)) / (1.0 - q)));
    }
    worst.0
}

/// `sum_{k<N} q^k [k]_q = q / (1 + q) [N]_q [N-1]_q` for `N = 1..=50`.
fn sum_weighted_q_numbers(q: f64) -> f64 {
    let mut worst = Worst(0.0);
    let mut lhs = 0.0;
    for n in 1..=50u32 {
        lhs += q.powi(n as i32 - 1) * q_number(n - 1, q);
        worst.push(scaled_residual(lhs, q / (1.0 + q) * q_number(n, q) * q_number(n - 1, q)));
    }
    worst.0
}

/// Grid of `(a, w, t)` for the eigenfunction check, away from poles and from the
/// fixed point of every `q` in the default grid.
pub const EXP_GRID_RATES: [f64; 3] = [-1.0, 0.7, 1.5];
pub const EXP_GRID_POINTS: [(f64, f64); 3] = [(0.0, 0.5), (0.1, 0.0), (1.0, 1.5)];

fn exp_eigenfunction(q: f64, policy: &TruncationPolicy) -> Result<f64> {
    let mut worst = Worst(0.0);
    for a in EXP_GRID_RATES {
        for (w, t) in EXP_GRID_POINTS {
            let params = DeformationParams::new(q, w)?;
            let e = |x: f64| exp_qw(a, x, &params, policy).unwrap_or(f64::NAN);
            let lhs = hahn_derivative(&e, t, &params);
            worst.push(scaled_residual(lhs, a * e(t)));
        }
    }
    Ok(worst.0)
}

fn odd_part(q: f64, policy: &TruncationPolicy) -> Result<f64> {
    let mut worst = Worst(0.0);
    for a in [0.25, 0.5, 1.0, 2.0] {
        let (lhs, rhs) = odd_part_qinv(a, q, policy)?;
        worst.push((lhs - rhs).abs());
    }
    Ok(worst.0)
}

fn resummation(q: f64, cases: usize, rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = Worst(0.0);
    for _ in 0..cases {
        let x = rng.gen_range(-0.9..=0.9);
        let n = rng.gen_range(0..=25);
        let (lhs, rhs) = resummation_sides(x, q, n)?;
        worst.push(scaled_residual(lhs, rhs));
    }
    Ok(worst.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_suite_passes() {
        let results = run_suite(&SuiteConfig::default()).unwrap();
        assert_eq!(results.len(), IDENTITIES.len() * 3);
        for r in &results {
            assert!(r.passed(), "{} q={} residual={:e}", r.name, r.q, r.max_residual);
        }
    }

    #[test]
    fn deterministic_for_a_seed() {
        let cfg = SuiteConfig { cases: 20, ..SuiteConfig::default() };
        let a = run_suite(&cfg).unwrap();
        let b = run_suite(&cfg).unwrap();
        let res = |v: &[IdentityResult]| v.iter().map(|r| r.max_residual.to_bits()).collect::<Vec<_>>();
        assert_eq!(res(&a), res(&b));
    }

    #[test]
    fn impossible_tolerance_fails() {
        let cfg = SuiteConfig { cases: 20, tol_override: Some(1e-30), ..SuiteConfig::default() };
        assert!(run_suite(&cfg).unwrap().iter().any(|r| !r.passed()));
    }
}
