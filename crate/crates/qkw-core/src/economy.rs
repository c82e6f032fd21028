//! Storage costs, consumption probabilities and discounted payoffs on the
//! commodity space.

use alloc::vec::Vec;
use core::fmt;

use crate::channel::{ChannelError, CommodityBasis, CommodityDensity, TransitionChannel, STEADY_TOL};
use crate::circuit::{round_branches, Agent, CircuitError, StrategyEnsemble};

#[derive(Debug, Clone, PartialEq)]
pub enum EconomyError {
    /// Parameter constraints u > c_k, 0 < delta < 1, c1 < c2 < c3 violated.
    BadParameters { what: &'static str },
    /// A payoff was requested at a state that is not steady.
    NotSteady { residual: f64 },
    /// Marginal holdings need a diagonal, normalized state.
    NotDiagonal { offdiagonal: f64 },
    NotNormalized { trace: f64 },
    NegativeHorizon { t: i64 },
    Channel(ChannelError),
    Circuit(CircuitError),
}

impl fmt::Display for EconomyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EconomyError::BadParameters { what } => write!(f, "bad economy parameters: {what}"),
            EconomyError::NotSteady { residual } => {
                write!(f, "state is not steady (residual {residual:e})")
            }
            EconomyError::NotDiagonal { offdiagonal } => {
                write!(f, "state is not diagonal (off-diagonal mass {offdiagonal:e})")
            }
            EconomyError::NotNormalized { trace } => write!(f, "state trace {trace} != 1"),
            EconomyError::NegativeHorizon { t } => write!(f, "horizon {t} < 0"),
            EconomyError::Channel(e) => write!(f, "{e}"),
            EconomyError::Circuit(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for EconomyError {}

impl From<ChannelError> for EconomyError {
    fn from(e: ChannelError) -> Self {
        EconomyError::Channel(e)
    }
}

impl From<CircuitError> for EconomyError {
    fn from(e: CircuitError) -> Self {
        EconomyError::Circuit(e)
    }
}

/// Common utility, discount factor and per-good storage costs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EconomyParams {
    u: f64,
    delta: f64,
    costs: [f64; 3],
}

impl EconomyParams {
    pub fn new(u: f64, delta: f64, costs: [f64; 3]) -> Result<Self, EconomyError> {
        if !(costs[0] < costs[1] && costs[1] < costs[2]) {
            return Err(EconomyError::BadParameters { what: "need c1 < c2 < c3" });
        }
        if !(0.0 < delta && delta < 1.0) {
            return Err(EconomyError::BadParameters { what: "need 0 < delta < 1" });
        }
        if costs.iter().any(|&c| u <= c) {
            return Err(EconomyError::BadParameters { what: "need u > c_k for every k" });
        }
        Ok(Self { u, delta, costs })
    }

    /// Build costs from the phase-diagram coordinates x = (c2-c1)/(u*delta)
    /// and y = (c3-c2)/(u*delta), keeping c1 fixed.
    pub fn from_cost_coordinates(
        x: f64,
        y: f64,
        u: f64,
        delta: f64,
        c1: f64,
    ) -> Result<Self, EconomyError> {
        let ud = u * delta;
        Self::new(u, delta, [c1, c1 + x * ud, c1 + (x + y) * ud])
    }

    pub fn utility(&self) -> f64 {
        self.u
    }

    pub fn discount(&self) -> f64 {
        self.delta
    }

    pub fn costs(&self) -> [f64; 3] {
        self.costs
    }

    pub fn cost_of(&self, good: crate::circuit::Good) -> f64 {
        self.costs[good.label() as usize - 1]
    }

    /// (c2 - c1) / (u * delta).
    pub fn x(&self) -> f64 {
        (self.costs[1] - self.costs[0]) / (self.u * self.delta)
    }

    /// (c3 - c2) / (u * delta).
    pub fn y(&self) -> f64 {
        (self.costs[2] - self.costs[1]) / (self.u * self.delta)
    }

    /// Per-basis-state storage cost of the given agent.
    pub fn cost_vector(&self, agent: Agent) -> [f64; 8] {
        core::array::from_fn(|k| self.cost_of(CommodityBasis::triple(k)[agent as usize]))
    }
}

/// Per-basis-state probability that the agent's consumption flag reads 1
/// after one round, derived from the circuit's branch expansions.
pub fn consumption_vector(
    agent: Agent,
    ensemble: &StrategyEnsemble,
) -> Result<[f64; 8], EconomyError> {
    let mut w = [0.0; 8];
    for (weight, profile) in ensemble.parts() {
        for (k, slot) in w.iter_mut().enumerate() {
            let branches = round_branches(CommodityBasis::triple(k), profile)?;
            let p: f64 = branches
                .iter()
                .filter(|b| b.flag(agent))
                .map(|b| b.probability())
                .sum();
            *slot += weight * p;
        }
    }
    Ok(w)
}

/// All three consumption vectors at once (shares the branch expansions).
pub fn consumption_vectors(ensemble: &StrategyEnsemble) -> Result<[[f64; 8]; 3], EconomyError> {
    let mut w = [[0.0; 8]; 3];
    for (weight, profile) in ensemble.parts() {
        for k in 0..8 {
            for b in round_branches(CommodityBasis::triple(k), profile)? {
                for agent in Agent::ALL {
                    if b.flag(agent) {
                        w[agent as usize][k] += weight * b.probability();
                    }
                }
            }
        }
    }
    Ok(w)
}

/// Discounted profit accumulated over rounds 0..=t from the initial block:
/// consumption utility u*f(tau) minus storage costs, discounted by
/// delta^tau, with the convention that nothing is consumed at tau = 0.
pub fn finite_horizon_profit(
    agent: Agent,
    channel: &TransitionChannel,
    rho0: &CommodityDensity,
    t: i64,
    params: &EconomyParams,
) -> Result<f64, EconomyError> {
    if t < 0 {
        return Err(EconomyError::NegativeHorizon { t });
    }
    let tr = rho0.trace();
    if (tr.re - 1.0).abs() > 1e-9 || tr.im.abs() > 1e-9 {
        return Err(EconomyError::NotNormalized { trace: tr.re });
    }
    let w = consumption_vector(agent, channel.ensemble())?;
    let v = params.cost_vector(agent);
    let mut rho = rho0.clone();
    let mut prev_diag: Option<[f64; 8]> = None;
    let mut discount = 1.0f64;
    let mut total = 0.0f64;
    for _tau in 0..=t {
        let diag = rho.diagonal();
        let consumed = match prev_diag {
            None => 0.0,
            Some(p) => dot(&w, &p),
        };
        total += (params.utility() * consumed - dot(&v, &diag)) * discount;
        discount *= params.discount();
        prev_diag = Some(diag);
        rho = channel.apply_unchecked(&rho);
    }
    Ok(total)
}

/// Per-round payoff functional at a verified steady state:
/// V = (-v + delta*u*w) . diag(rho).
pub fn steady_payoff(
    agent: Agent,
    rho: &CommodityDensity,
    params: &EconomyParams,
    channel: &TransitionChannel,
) -> Result<f64, EconomyError> {
    let off = rho.offdiagonal_max();
    if off > STEADY_TOL {
        return Err(EconomyError::NotDiagonal { offdiagonal: off });
    }
    let diag = rho.diagonal();
    let next = channel.step_distribution(&diag);
    let residual: f64 = diag.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
    if residual > STEADY_TOL {
        return Err(EconomyError::NotSteady { residual });
    }
    let w = consumption_vector(agent, channel.ensemble())?;
    Ok(payoff_value(&params.cost_vector(agent), &w, &diag, params))
}

/// The payoff functional on raw parts; used by grid sweeps that precompute
/// w-vectors and steady distributions.
pub fn payoff_value(v: &[f64; 8], w: &[f64; 8], rho_diag: &[f64; 8], params: &EconomyParams) -> f64 {
    let mut acc = 0.0;
    for k in 0..8 {
        acc += (-v[k] + params.discount() * params.utility() * w[k]) * rho_diag[k];
    }
    acc
}

fn dot(a: &[f64; 8], b: &[f64; 8]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Probabilities that Alice holds good 2, Bob holds good 3 and Charlie holds
/// good 1, read off a diagonal state's basis marginals.
pub fn marginal_holdings(rho: &CommodityDensity) -> Result<(f64, f64, f64), EconomyError> {
    let off = rho.offdiagonal_max();
    if off > STEADY_TOL {
        return Err(EconomyError::NotDiagonal { offdiagonal: off });
    }
    let d = rho.diagonal();
    let total: f64 = d.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(EconomyError::NotNormalized { trace: total });
    }
    let p12 = d[0] + d[1] + d[2] + d[3];
    let p23 = d[2] + d[3] + d[6] + d[7];
    let p31 = d[0] + d[2] + d[4] + d[6];
    Ok((p12, p23, p31))
}

/// Long-run payoff summary: limit state, per-agent steady payoffs, the
/// finite-horizon profit series and marginal holdings.
#[derive(Debug, Clone)]
pub struct PayoffReport {
    pub steady: [f64; 8],
    pub v: [f64; 3],
    pub series: [Vec<(i64, f64)>; 3],
    pub holdings: (f64, f64, f64),
}

pub fn payoff_report(
    params: &EconomyParams,
    channel: &TransitionChannel,
    initial: &[f64; 8],
    horizon: i64,
) -> Result<PayoffReport, EconomyError> {
    let decomposition = channel.steady_states(Some(initial));
    let steady = decomposition.limit_distribution().expect("initial supplied");
    let rho_c = CommodityDensity::from_distribution(&steady)?;
    let rho0 = CommodityDensity::from_distribution(initial)?;
    let mut v = [0.0; 3];
    let mut series: [Vec<(i64, f64)>; 3] = Default::default();
    for agent in Agent::ALL {
        v[agent as usize] = steady_payoff(agent, &rho_c, params, channel)?;
        let mut s = Vec::new();
        for t in 0..=horizon {
            s.push((t, finite_horizon_profit(agent, channel, &rho0, t, params)?));
        }
        series[agent as usize] = s;
    }
    let holdings = marginal_holdings(&rho_c)?;
    Ok(PayoffReport { steady, v, series, holdings })
}
