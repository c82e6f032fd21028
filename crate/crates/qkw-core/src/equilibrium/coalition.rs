use alloc::vec::Vec;

use crate::channel::ChannelError;
use crate::circuit::{Agent, StrategyEnsemble, StrategyProfile};
use crate::economy::EconomyParams;
use crate::qsim::{kron, mat_i, mat_x, mat_y, mat_z};

use super::{ensemble_payoffs as payoffs_of, ARGMAX_TOL};

#[derive(Debug, Clone, Copy)]
pub struct CoalitionSurfacePoint {
    pub p: f64,
    pub q_b: f64,
    pub q_c_prime: f64,
    pub v: [f64; 3],
}

/// Bob-Charlie coalition surface for a fixed Alice dial q_A'.
#[derive(Debug, Clone)]
pub struct CoalitionReport {
    pub q_a_prime: f64,
    pub surface: Vec<CoalitionSurfacePoint>,
    /// Payoffs at the no-attack point q_B = q_C' = 0 (p irrelevant there).
    pub baseline: [f64; 3],
    /// Surface points attaining both max V_B and max V_C within tolerance.
    pub joint_optima: Vec<CoalitionSurfacePoint>,
    /// Surface points not Pareto-dominated in (V_B, V_C).
    pub pareto_front: Vec<CoalitionSurfacePoint>,
    pub max_v_b: f64,
    pub max_v_c: f64,
}

/// Sweep the coalition's (p, q_B, q_C') grid for a fixed q_A'.
pub fn coalition_analysis(
    q_a_prime: f64,
    params: &EconomyParams,
    n: usize,
    theta: f64,
    initial: &[f64; 8],
) -> Result<CoalitionReport, ChannelError> {
    let axis: Vec<f64> = (0..n).map(|k| k as f64 / (n - 1) as f64).collect();
    let mut surface = Vec::with_capacity(n * n * n);
    for &p in &axis {
        for &q_b in &axis {
            for &q_c in &axis {
                let e = StrategyEnsemble::coalition(p, q_a_prime, q_b, q_c, theta)?;
                let v = payoffs_of(&e, params, initial)?;
                surface.push(CoalitionSurfacePoint { p, q_b, q_c_prime: q_c, v });
            }
        }
    }
    let baseline = surface
        .iter()
        .find(|pt| pt.q_b == 0.0 && pt.q_c_prime == 0.0)
        .expect("grid contains the origin")
        .v;
    let max_v_b = surface.iter().map(|pt| pt.v[1]).fold(f64::NEG_INFINITY, f64::max);
    let max_v_c = surface.iter().map(|pt| pt.v[2]).fold(f64::NEG_INFINITY, f64::max);
    let joint_optima = surface
        .iter()
        .copied()
        .filter(|pt| pt.v[1] >= max_v_b - ARGMAX_TOL && pt.v[2] >= max_v_c - ARGMAX_TOL)
        .collect();
    let pareto_front = surface
        .iter()
        .copied()
        .filter(|pt| {
            !surface.iter().any(|o| {
                o.v[1] >= pt.v[1] + ARGMAX_TOL && o.v[2] >= pt.v[2] - ARGMAX_TOL
                    || o.v[1] >= pt.v[1] - ARGMAX_TOL && o.v[2] >= pt.v[2] + ARGMAX_TOL
            })
        })
        .collect();
    Ok(CoalitionReport {
        q_a_prime,
        surface,
        baseline,
        joint_optima,
        pareto_front,
        max_v_b,
        max_v_c,
    })
}

/// Which two-agent pair attempts the correlated attack coalition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pair {
    BobCharlie,
    AliceBob,
    AliceCharlie,
}

impl Pair {
    pub fn agents(self) -> (Agent, Agent) {
        match self {
            Pair::BobCharlie => (Agent::B, Agent::C),
            Pair::AliceBob => (Agent::A, Agent::B),
            Pair::AliceCharlie => (Agent::A, Agent::C),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Pair::BobCharlie => "BC",
            Pair::AliceBob => "AB",
            Pair::AliceCharlie => "AC",
        }
    }
}

#[derive(Debug, Clone)]
pub struct PairSearchReport {
    pub pair: Pair,
    /// Payoffs with every attack dial at zero.
    pub baseline: [f64; 3],
    /// Grid choices (p, dial_first, dial_second) weakly improving both pair
    /// members with at least one strict improvement.
    pub improvements: Vec<([f64; 3], [f64; 3])>,
    /// Best joint point found for the pair (max of min-improvement).
    pub best: ([f64; 3], [f64; 3]),
}

fn plain_unitary(agent: Agent, held: crate::circuit::Good) -> [num_complex::Complex64; 16] {
    // the q = 0 members of the entangled family
    let (i2, y) = (mat_i(), mat_y());
    let m = match (agent, held.label()) {
        (Agent::A, 2) | (Agent::B, 1) => kron(&y, &i2),
        (Agent::C, 1) => kron(&i2, &y),
        _ => kron(&y, &y),
    };
    let mut out = [num_complex::Complex64::new(0.0, 0.0); 16];
    out.copy_from_slice(&m);
    out
}

fn mix16(
    a: f64,
    ma: &[num_complex::Complex64],
    mb: &[num_complex::Complex64],
    phased: bool,
) -> [num_complex::Complex64; 16] {
    // commuting Pauli pairs need the relative phase i to stay unitary; with a
    // single live dial the phase is invisible in every branch probability
    let w = if phased {
        num_complex::Complex64::new(0.0, num_traits::Float::sqrt(a))
    } else {
        num_complex::Complex64::new(num_traits::Float::sqrt(a), 0.0)
    };
    let mut out = [num_complex::Complex64::new(0.0, 0.0); 16];
    for (k, o) in out.iter_mut().enumerate() {
        *o = ma[k] * num_traits::Float::sqrt(1.0 - a) + mb[k] * w;
    }
    out
}

/// Profile in which exactly one agent turns their quantum attack dial and
/// everyone else plays plain. The attack operators come from the entangled
/// family: Alice against Bob uses Y⊗X on her costlier-good pair, Alice
/// against Charlie uses X⊗I on her cheaper-good pair, Bob and Charlie use
/// Z⊗Y on the wire pair facing the victim.
fn single_attack_profile(
    attacker: Agent,
    victim: Agent,
    dial: f64,
    theta: f64,
) -> Result<StrategyProfile, crate::circuit::CircuitError> {
    use crate::circuit::Good;
    let (i2, x, y, z) = (mat_i(), mat_x(), mat_y(), mat_z());
    let mut mats: Vec<(Agent, Good, [num_complex::Complex64; 16])> = Vec::new();
    for agent in Agent::ALL {
        for held in agent.holdable() {
            mats.push((agent, held, plain_unitary(agent, held)));
        }
    }
    let (slot_good, attack, phased) = match (attacker, victim) {
        (Agent::A, Agent::B) => (Good::G3, kron(&y, &x), false),
        (Agent::A, Agent::C) => (Good::G2, kron(&x, &i2), false),
        (Agent::B, Agent::A) => (Good::G3, kron(&z, &y), false),
        // Charlie's plain I⊗Y commutes with his attack Z⊗Y
        (Agent::C, Agent::A) => (Good::G1, kron(&z, &y), true),
        _ => (Good::G3, kron(&z, &y), false),
    };
    for (agent, held, m) in mats.iter_mut() {
        if *agent == attacker && *held == slot_good {
            *m = mix16(dial, &plain_unitary(*agent, *held), &attack, phased);
        }
    }
    let unitaries: Vec<(Agent, crate::circuit::StrategyUnitary)> = mats
        .into_iter()
        .map(|(agent, held, m)| {
            crate::circuit::StrategyUnitary::new(held, m).map(|u| (agent, u))
        })
        .collect::<Result<_, _>>()?;
    let arr: [(Agent, crate::circuit::StrategyUnitary); 6] =
        unitaries.try_into().expect("six slots");
    StrategyProfile::from_unitaries(arr, theta)
}

/// Mirror the Bob-Charlie construction for an arbitrary pair: correlate (with
/// probability p) between "first member attacks the other/Alice" and "second
/// member attacks", all other dials plain, and search the grid for choices
/// that weakly improve both members over the all-plain baseline.
pub fn pair_improvement_search(
    pair: Pair,
    params: &EconomyParams,
    n: usize,
    theta: f64,
    initial: &[f64; 8],
) -> Result<PairSearchReport, ChannelError> {
    let (first, second) = pair.agents();
    let (victim_of_first, victim_of_second) = match pair {
        Pair::BobCharlie => (Agent::A, Agent::A),
        Pair::AliceBob => (Agent::B, Agent::A),
        Pair::AliceCharlie => (Agent::C, Agent::A),
    };
    let axis: Vec<f64> = (0..n).map(|k| k as f64 / (n - 1) as f64).collect();
    let baseline = {
        let prof = single_attack_profile(first, victim_of_first, 0.0, theta)?;
        payoffs_of(&StrategyEnsemble::pure(prof), params, initial)?
    };
    let mut improvements = Vec::new();
    let mut best: ([f64; 3], [f64; 3]) = ([0.0, 0.0, 0.0], baseline);
    let mut best_gain = f64::NEG_INFINITY;
    for &p in &axis {
        for &d1 in &axis {
            for &d2 in &axis {
                let prof1 = single_attack_profile(first, victim_of_first, d1, theta)?;
                let prof2 = single_attack_profile(second, victim_of_second, d2, theta)?;
                let e = StrategyEnsemble::mixed(alloc::vec![(p, prof1), (1.0 - p, prof2)])?;
                let v = payoffs_of(&e, params, initial)?;
                let g1 = v[first as usize] - baseline[first as usize];
                let g2 = v[second as usize] - baseline[second as usize];
                let gain = g1.min(g2);
                if gain > best_gain {
                    best_gain = gain;
                    best = ([p, d1, d2], v);
                }
                if g1 >= -ARGMAX_TOL && g2 >= -ARGMAX_TOL && (g1 > ARGMAX_TOL || g2 > ARGMAX_TOL)
                {
                    improvements.push(([p, d1, d2], v));
                }
            }
        }
    }
    Ok(PairSearchReport { pair, baseline, improvements, best })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::COALITION_THETA;
    use crate::equilibrium::production_start;

    #[test]
    fn coalition_baseline_matches_plain_quantum_point() {
        let params = EconomyParams::from_cost_coordinates(0.4, 0.4, 100.0, 0.9, 1.0).unwrap();
        let init = production_start();
        let rep = coalition_analysis(0.0, &params, 3, COALITION_THETA, &init).unwrap();
        let plain = crate::equilibrium::quantum_payoffs(
            [0.0, 0.0, 0.0],
            COALITION_THETA,
            &params,
            &init,
        )
        .unwrap();
        // with q_A' = 0 and no attacks the limit never leaves {211, 231},
        // where Alice's fixed Y⊗X slot is inert, so the baseline coincides
        // with the plain entangled point exactly
        for k in 0..3 {
            assert!((rep.baseline[k] - plain[k]).abs() < 1e-9);
        }
        assert_eq!(rep.surface.len(), 27);
    }
}
