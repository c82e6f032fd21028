use alloc::vec::Vec;

use crate::channel::{decompose_population, population_block, ChannelError};
use crate::circuit::{Agent, StrategyEnsemble, StrategyProfile};
use crate::economy::{payoff_value, EconomyError, EconomyParams};

use super::{BestResponseResult, ARGMAX_TOL};

/// Steady distribution and consumption vectors of one (s_A, s_C) grid cell.
/// Both are cost-independent, so one sweep serves every cost point.
#[derive(Debug, Clone)]
pub struct SweepCell {
    pub rho: [f64; 8],
    pub w: [[f64; 8]; 3],
    /// Number of closed classes of the cell's population block; payoffs use
    /// the limit from the configured initial distribution.
    pub closed_classes: usize,
}

/// Circuit-driven (s_A, s_C) sweep at fixed s_B and theta. Cells are stored
/// row-major, s_A index first.
#[derive(Debug, Clone)]
pub struct ClassicalSweep {
    grid: Vec<f64>,
    s_b: f64,
    theta: f64,
    initial: [f64; 8],
    cells: Vec<SweepCell>,
}

impl ClassicalSweep {
    /// Evaluate one cell; pure, so callers may fan grid cells out to worker
    /// threads and assemble with [`ClassicalSweep::from_cells`].
    pub fn compute_cell(
        s_a: f64,
        s_b: f64,
        s_c: f64,
        theta: f64,
        initial: &[f64; 8],
    ) -> Result<SweepCell, ChannelError> {
        let profile = StrategyProfile::classical([s_a, s_b, s_c], theta)?;
        let block = population_block(&StrategyEnsemble::pure(profile))?;
        let dec = decompose_population(&block.t8, Some(initial));
        Ok(SweepCell {
            rho: dec.limit_distribution().expect("initial supplied"),
            w: block.w,
            closed_classes: dec.closed.len(),
        })
    }

    pub fn compute(
        n: usize,
        s_b: f64,
        theta: f64,
        initial: [f64; 8],
    ) -> Result<Self, ChannelError> {
        let grid = axis(n);
        let mut cells = Vec::with_capacity(n * n);
        for &s_a in &grid {
            for &s_c in &grid {
                cells.push(Self::compute_cell(s_a, s_b, s_c, theta, &initial)?);
            }
        }
        Ok(Self { grid, s_b, theta, initial, cells })
    }

    /// Assemble from externally computed cells (row-major over the axis
    /// returned by [`sweep_axis`]).
    pub fn from_cells(
        n: usize,
        s_b: f64,
        theta: f64,
        initial: [f64; 8],
        cells: Vec<SweepCell>,
    ) -> Self {
        assert_eq!(cells.len(), n * n);
        Self { grid: axis(n), s_b, theta, initial, cells }
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn s_b(&self) -> f64 {
        self.s_b
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn initial(&self) -> &[f64; 8] {
        &self.initial
    }

    pub fn cell(&self, i_sa: usize, j_sc: usize) -> &SweepCell {
        &self.cells[i_sa * self.grid.len() + j_sc]
    }

    pub fn payoff(&self, i_sa: usize, j_sc: usize, agent: Agent, params: &EconomyParams) -> f64 {
        let cell = self.cell(i_sa, j_sc);
        payoff_value(&params.cost_vector(agent), &cell.w[agent as usize], &cell.rho, params)
    }

    /// Payoff triples over the whole grid, row-major.
    pub fn payoff_surface(&self, params: &EconomyParams) -> Vec<[f64; 3]> {
        let n = self.grid.len();
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                out.push([
                    self.payoff(i, j, Agent::A, params),
                    self.payoff(i, j, Agent::B, params),
                    self.payoff(i, j, Agent::C, params),
                ]);
            }
        }
        out
    }

    /// Alice's best response to a fixed s_C grid index.
    pub fn best_response_a(&self, j_sc: usize, params: &EconomyParams) -> BestResponseResult {
        let curve = (0..self.grid.len())
            .map(|i| (self.grid[i], self.payoff(i, j_sc, Agent::A, params)))
            .collect();
        BestResponseResult::from_curve(Agent::A, curve)
    }

    /// Charlie's best response to a fixed s_A grid index.
    pub fn best_response_c(&self, i_sa: usize, params: &EconomyParams) -> BestResponseResult {
        let curve = (0..self.grid.len())
            .map(|j| (self.grid[j], self.payoff(i_sa, j, Agent::C, params)))
            .collect();
        BestResponseResult::from_curve(Agent::C, curve)
    }
}

/// The shared [0, 1] axis with n nodes.
pub fn sweep_axis(n: usize) -> Vec<f64> {
    axis(n)
}

fn axis(n: usize) -> Vec<f64> {
    assert!(n >= 2, "grid needs at least two nodes per axis");
    (0..n).map(|k| k as f64 / (n - 1) as f64).collect()
}

/// A located equilibrium: either an exact grid fixed point of the two
/// best-response maps, or a crossing of the best-response curves between two
/// grid nodes (a mixed equilibrium reported as its bracketing interval).
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumPoint {
    pub s_a: (f64, f64),
    pub s_c: (f64, f64),
    pub pure: bool,
}

impl EquilibriumPoint {
    pub fn is_at(&self, s_a: f64, s_c: f64, tol: f64) -> bool {
        self.s_a.0 - tol <= s_a && s_a <= self.s_a.1 + tol && self.s_c.0 - tol <= s_c
            && s_c <= self.s_c.1 + tol
    }
}

/// All equilibria of the (Alice, Charlie) game at the sweep's s_B.
///
/// Exact grid fixed points of the composed best-response map are reported as
/// pure; a sign change of the displacement d(s_C) = BR_C(BR_A(s_C)) - s_C
/// between adjacent nodes is a best-response-curve crossing, i.e. a mixed
/// equilibrium inside that bracket.
pub fn classical_equilibria(
    sweep: &ClassicalSweep,
    params: &EconomyParams,
) -> Vec<EquilibriumPoint> {
    let n = sweep.grid().len();
    let mut va = Vec::with_capacity(n * n);
    let mut vc = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            va.push(sweep.payoff(i, j, Agent::A, params));
            vc.push(sweep.payoff(i, j, Agent::C, params));
        }
    }
    // first-maximal argmax indices
    let br_a: Vec<usize> = (0..n)
        .map(|j| {
            (0..n)
                .max_by(|&p, &q| va[p * n + j].partial_cmp(&va[q * n + j]).unwrap())
                .unwrap()
        })
        .collect();
    let br_c: Vec<usize> = (0..n)
        .map(|i| {
            (0..n)
                .max_by(|&p, &q| vc[i * n + p].partial_cmp(&vc[i * n + q]).unwrap())
                .unwrap()
        })
        .collect();
    let d: Vec<i64> = (0..n).map(|j| br_c[br_a[j]] as i64 - j as i64).collect();

    let grid = sweep.grid();
    let mut out = Vec::new();
    for j in 0..n {
        if d[j] == 0 {
            let a = grid[br_a[j]];
            out.push(EquilibriumPoint { s_a: (a, a), s_c: (grid[j], grid[j]), pure: true });
        }
        if j + 1 < n && d[j] * d[j + 1] < 0 {
            let (lo, hi) = (br_a[j].min(br_a[j + 1]), br_a[j].max(br_a[j + 1]));
            out.push(EquilibriumPoint {
                s_a: (grid[lo], grid[hi]),
                s_c: (grid[j], grid[j + 1]),
                pure: false,
            });
        }
    }
    out
}

/// Exact-grid mutual best responses within the payoff tolerance; a subset of
/// what [`classical_equilibria`] reports, exposed for diagnostics.
pub fn pure_grid_equilibria(
    sweep: &ClassicalSweep,
    params: &EconomyParams,
) -> Vec<(f64, f64)> {
    let n = sweep.grid().len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let va = sweep.payoff(i, j, Agent::A, params);
            let vc = sweep.payoff(i, j, Agent::C, params);
            let col_best = (0..n)
                .map(|p| sweep.payoff(p, j, Agent::A, params))
                .fold(f64::NEG_INFINITY, f64::max);
            let row_best = (0..n)
                .map(|q| sweep.payoff(i, q, Agent::C, params))
                .fold(f64::NEG_INFINITY, f64::max);
            if va >= col_best - ARGMAX_TOL && vc >= row_best - ARGMAX_TOL {
                out.push((sweep.grid()[i], sweep.grid()[j]));
            }
        }
    }
    out
}

/// Region classification of one cost cell by its equilibrium list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseClass {
    /// Unique equilibrium (1, 1): both fundamental.
    Fund,
    /// Unique equilibrium (0, 1): Alice speculates.
    Spec,
    /// Unique equilibrium (1, 0): Charlie speculates.
    Alt,
    /// Unique equilibrium elsewhere (mixed or interior).
    Mixed,
    /// More than one equilibrium.
    Multiple,
}

impl PhaseClass {
    pub fn name(self) -> &'static str {
        match self {
            PhaseClass::Fund => "FUND",
            PhaseClass::Spec => "SPEC",
            PhaseClass::Alt => "ALT",
            PhaseClass::Mixed => "MIXED",
            PhaseClass::Multiple => "MULTIPLE",
        }
    }
}

#[derive(Debug, Clone)]
pub struct PhaseCell {
    pub x: f64,
    pub y: f64,
    pub class: PhaseClass,
    pub equilibria: Vec<EquilibriumPoint>,
}

/// Classify one cost point from an existing sweep.
pub fn classify_costs(
    sweep: &ClassicalSweep,
    params: &EconomyParams,
) -> (PhaseClass, Vec<EquilibriumPoint>) {
    let eqs = classical_equilibria(sweep, params);
    let class = if eqs.len() > 1 {
        PhaseClass::Multiple
    } else {
        match eqs.first() {
            None => PhaseClass::Mixed,
            Some(e) if !e.pure => PhaseClass::Mixed,
            Some(e) => {
                let at = |a: f64, c: f64| e.is_at(a, c, 1e-12);
                if at(1.0, 1.0) {
                    PhaseClass::Fund
                } else if at(0.0, 1.0) {
                    PhaseClass::Spec
                } else if at(1.0, 0.0) {
                    PhaseClass::Alt
                } else {
                    PhaseClass::Mixed
                }
            }
        }
    };
    (class, eqs)
}

/// Phase diagram over cost coordinates; c1, u and delta come from the
/// template parameters, c2 and c3 are solved from each cell's (x, y).
pub fn phase_diagram(
    sweep: &ClassicalSweep,
    x_range: (f64, f64),
    y_range: (f64, f64),
    resolution: usize,
    template: &EconomyParams,
) -> Result<Vec<PhaseCell>, EconomyError> {
    if resolution < 2 || x_range.0 >= x_range.1 || y_range.0 >= y_range.1 {
        return Err(EconomyError::BadParameters { what: "degenerate phase-diagram ranges" });
    }
    let mut out = Vec::with_capacity(resolution * resolution);
    for iy in 0..resolution {
        for ix in 0..resolution {
            let x = x_range.0 + (x_range.1 - x_range.0) * ix as f64 / (resolution - 1) as f64;
            let y = y_range.0 + (y_range.1 - y_range.0) * iy as f64 / (resolution - 1) as f64;
            out.push(phase_cell(sweep, x, y, template)?);
        }
    }
    Ok(out)
}

/// One phase-diagram cell; pure, so the CLI evaluates cells in parallel.
pub fn phase_cell(
    sweep: &ClassicalSweep,
    x: f64,
    y: f64,
    template: &EconomyParams,
) -> Result<PhaseCell, EconomyError> {
    let params = EconomyParams::from_cost_coordinates(
        x,
        y,
        template.utility(),
        template.discount(),
        template.costs()[0],
    )?;
    let (class, equilibria) = classify_costs(sweep, &params);
    Ok(PhaseCell { x, y, class, equilibria })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::production_start;

    #[test]
    fn axis_endpoints() {
        let a = sweep_axis(11);
        assert_eq!(a[0], 0.0);
        assert_eq!(a[10], 1.0);
        assert!((a[3] - 0.3).abs() < 1e-12);
    }

    #[test]
    fn fundamental_cell_has_two_state_limit() {
        let cell =
            ClassicalSweep::compute_cell(1.0, 1.0, 1.0, 0.0, &production_start()).unwrap();
        assert!((cell.rho[0] - 0.5).abs() < 1e-10);
        assert!((cell.rho[2] - 0.5).abs() < 1e-10);
    }

    #[test]
    fn coarse_sweep_finds_fundamental_equilibrium_at_wide_costs() {
        let sweep = ClassicalSweep::compute(6, 1.0, 0.0, production_start()).unwrap();
        let params =
            EconomyParams::from_cost_coordinates(0.4, 0.4, 100.0, 0.9, 1.0).unwrap();
        let eqs = classical_equilibria(&sweep, &params);
        assert_eq!(eqs.len(), 1);
        assert!(eqs[0].pure);
        assert!(eqs[0].is_at(1.0, 1.0, 1e-12));
        let (class, _) = classify_costs(&sweep, &params);
        assert_eq!(class, PhaseClass::Fund);
    }
}
