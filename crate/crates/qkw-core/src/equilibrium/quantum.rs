use alloc::vec::Vec;

use crate::channel::ChannelError;
use crate::circuit::{Agent, StrategyEnsemble, StrategyProfile};
use crate::economy::EconomyParams;

use super::BestResponseResult;

/// Steady payoffs (V_A, V_B, V_C) of the entangled family at (q_A, q_B,
/// q_C), from the limit state of the configured initial distribution.
pub fn quantum_payoffs(
    q: [f64; 3],
    theta: f64,
    params: &EconomyParams,
    initial: &[f64; 8],
) -> Result<[f64; 3], ChannelError> {
    let e = StrategyEnsemble::pure(StrategyProfile::quantum(q, theta)?);
    super::ensemble_payoffs(&e, params, initial)
}

/// Which payoff derivative is being evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GradientAxis {
    /// dV_A / dq_A.
    AliceOwn,
    /// dV_B / dq_B.
    BobOwn,
}

/// Closed-form steady-payoff derivatives of the entangled family at maximal
/// entanglement, as rational functions of (q_A, q_B) and the costs.
pub fn quantum_gradient_closed_form(
    axis: GradientAxis,
    q_a: f64,
    q_b: f64,
    params: &EconomyParams,
) -> f64 {
    let [c1, c2, c3] = params.costs();
    let du = params.discount() * params.utility();
    let n = 4.0 * (1.0 + q_a) + q_b * (3.0 + q_a);
    match axis {
        GradientAxis::AliceOwn => ((c3 - c2) * q_b * (4.0 - q_b) + du * q_b * q_b) / (n * n),
        GradientAxis::BobOwn => {
            ((c3 - c1) * 2.0 * (1.0 - q_a) * (1.0 + q_a) + du * 2.0 * (1.0 + q_a) * (1.0 + q_a))
                / (n * n)
        }
    }
}

/// Central finite difference of the simulated steady payoff along the same
/// axis (step clamped into [0, 1] one-sidedly at the boundary).
pub fn quantum_gradient_finite_difference(
    axis: GradientAxis,
    q_a: f64,
    q_b: f64,
    theta: f64,
    params: &EconomyParams,
    initial: &[f64; 8],
    step: f64,
) -> Result<f64, ChannelError> {
    let (agent, coord) = match axis {
        GradientAxis::AliceOwn => (0usize, q_a),
        GradientAxis::BobOwn => (1usize, q_b),
    };
    let lo = (coord - step).max(0.0);
    let hi = (coord + step).min(1.0);
    let eval = |v: f64| -> Result<f64, ChannelError> {
        let q = match axis {
            GradientAxis::AliceOwn => [v, q_b, 0.0],
            GradientAxis::BobOwn => [q_a, v, 0.0],
        };
        Ok(quantum_payoffs(q, theta, params, initial)?[agent])
    };
    Ok((eval(hi)? - eval(lo)?) / (hi - lo))
}

/// Best response of Alice (over q_A) or Bob (over q_B) with the opponent's
/// coordinate fixed.
pub fn quantum_best_response(
    agent: Agent,
    opponent: f64,
    n: usize,
    theta: f64,
    params: &EconomyParams,
    initial: &[f64; 8],
) -> Result<BestResponseResult, ChannelError> {
    let mut curve = Vec::with_capacity(n);
    for k in 0..n {
        let v = k as f64 / (n - 1) as f64;
        let q = match agent {
            Agent::A => [v, opponent, 0.0],
            Agent::B => [opponent, v, 0.0],
            Agent::C => [opponent, 0.0, v],
        };
        let payoffs = quantum_payoffs(q, theta, params, initial)?;
        curve.push((v, payoffs[agent as usize]));
    }
    Ok(BestResponseResult::from_curve(agent, curve))
}

/// Mutual best responses of (q_A, q_B) on an n x n grid.
pub fn quantum_equilibria(
    n: usize,
    theta: f64,
    params: &EconomyParams,
    initial: &[f64; 8],
) -> Result<Vec<(f64, f64)>, ChannelError> {
    let axis: Vec<f64> = (0..n).map(|k| k as f64 / (n - 1) as f64).collect();
    let mut va = Vec::with_capacity(n * n);
    let mut vb = Vec::with_capacity(n * n);
    for &qa in &axis {
        for &qb in &axis {
            let p = quantum_payoffs([qa, qb, 0.0], theta, params, initial)?;
            va.push(p[0]);
            vb.push(p[1]);
        }
    }
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let col_best = (0..n).map(|p| va[p * n + j]).fold(f64::NEG_INFINITY, f64::max);
            let row_best = (0..n).map(|q| vb[i * n + q]).fold(f64::NEG_INFINITY, f64::max);
            if va[i * n + j] >= col_best - super::ARGMAX_TOL
                && vb[i * n + j] >= row_best - super::ARGMAX_TOL
            {
                out.push((axis[i], axis[j]));
            }
        }
    }
    Ok(out)
}
