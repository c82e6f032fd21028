//! Best-response and equilibrium search over the classical, entangled and
//! coalition strategy families, phase diagrams over cost coordinates,
//! coalition analysis and goods-flow graphs.

mod classical;
mod coalition;
mod flow;
mod quantum;

pub use classical::{
    classical_equilibria, classify_costs, phase_cell, phase_diagram, pure_grid_equilibria,
    sweep_axis, ClassicalSweep, EquilibriumPoint, PhaseCell, PhaseClass, SweepCell,
};
pub use coalition::{
    coalition_analysis, pair_improvement_search, CoalitionReport, CoalitionSurfacePoint, Pair,
    PairSearchReport,
};
pub use flow::{flow_graph, FlowEdge, FlowGraph};
pub use quantum::{
    quantum_best_response, quantum_equilibria, quantum_gradient_closed_form,
    quantum_gradient_finite_difference, quantum_payoffs, GradientAxis,
};

use alloc::vec::Vec;

use crate::channel::{decompose_population, population_block, ChannelError};
use crate::circuit::{Agent, StrategyEnsemble};
use crate::economy::{payoff_value, EconomyParams};

/// Steady payoffs of all three agents for an arbitrary ensemble, from the
/// limit state of the given initial distribution.
pub fn ensemble_payoffs(
    ensemble: &StrategyEnsemble,
    params: &EconomyParams,
    initial: &[f64; 8],
) -> Result<[f64; 3], ChannelError> {
    let block = population_block(ensemble)?;
    let rho = decompose_population(&block.t8, Some(initial))
        .limit_distribution()
        .expect("initial supplied");
    Ok(core::array::from_fn(|a| {
        let agent = Agent::ALL[a];
        payoff_value(&params.cost_vector(agent), &block.w[a], &rho, params)
    }))
}

/// Payoff tolerance for membership in an argmax set.
pub const ARGMAX_TOL: f64 = 1e-8;

/// Default initial distribution: point mass on |231> (each agent holds their
/// production good).
pub fn production_start() -> [f64; 8] {
    let mut p = [0.0; 8];
    p[2] = 1.0;
    p
}

/// Best-response data of one agent along their own coordinate, opponents
/// fixed.
#[derive(Debug, Clone)]
pub struct BestResponseResult {
    pub agent: Agent,
    /// (own coordinate, payoff) samples along the grid.
    pub curve: Vec<(f64, f64)>,
    /// All grid coordinates whose payoff is within [`ARGMAX_TOL`] of the
    /// best; never silently collapsed to one endpoint.
    pub argmax: Vec<f64>,
}

impl BestResponseResult {
    pub(crate) fn from_curve(agent: Agent, curve: Vec<(f64, f64)>) -> Self {
        let best = curve.iter().map(|&(_, v)| v).fold(f64::NEG_INFINITY, f64::max);
        let argmax = curve
            .iter()
            .filter(|&&(_, v)| v >= best - ARGMAX_TOL)
            .map(|&(x, _)| x)
            .collect();
        Self { agent, curve, argmax }
    }

    pub fn best_payoff(&self) -> f64 {
        self.curve.iter().map(|&(_, v)| v).fold(f64::NEG_INFINITY, f64::max)
    }
}
