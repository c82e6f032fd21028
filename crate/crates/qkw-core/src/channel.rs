//! The round superoperator on the eight-dimensional commodity space, its
//! iteration, steady states via Markov-chain decomposition, the entanglement
//! decay certificate and Monte Carlo trajectory sampling.

mod markov;
mod trajectory;

pub use markov::{ClosedClass, ClosedClassDecomposition};
pub use trajectory::{sample_trajectory, TrajectoryStep};

use crate::circuit::{round_branches, Agent};

/// The population block and consumption vectors of a strategy ensemble,
/// derived from branch expansions alone. Equivalent to the diagonal part of
/// the full channel but much cheaper; grid sweeps live on this.
#[derive(Debug, Clone)]
pub struct PopulationBlock {
    /// Column-stochastic `t8[target][source]`.
    pub t8: [[f64; 8]; 8],
    /// Per-agent consumption probability vectors.
    pub w: [[f64; 8]; 3],
}

pub fn population_block(ensemble: &StrategyEnsemble) -> Result<PopulationBlock, ChannelError> {
    let mut t8 = [[0.0; 8]; 8];
    let mut w = [[0.0; 8]; 3];
    for (weight, profile) in ensemble.parts() {
        for k in 0..8 {
            for b in round_branches(commodity_triple(k), profile)? {
                let p = weight * b.probability();
                t8[commodity_index(b.goods)][k] += p;
                for agent in Agent::ALL {
                    if b.flag(agent) {
                        w[agent as usize][k] += p;
                    }
                }
            }
        }
    }
    Ok(PopulationBlock { t8, w })
}

/// Closed-class decomposition of a population block (same machinery the
/// channel's `steady_states` uses).
pub fn decompose_population(
    t8: &[[f64; 8]; 8],
    initial: Option<&[f64; 8]>,
) -> ClosedClassDecomposition {
    markov::decompose(t8, initial)
}

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec;
use core::fmt;
use num_complex::Complex64;
use num_traits::Float;

use crate::circuit::{
    commodity_index, commodity_triple, dyad_image, CircuitError, Good, StrategyEnsemble,
};

/// Threshold below which a transition-matrix entry is treated as a phantom
/// zero when building the reachability digraph.
pub const EDGE_EPS: f64 = 1e-12;

/// Residual bound for reported steady states.
pub const STEADY_TOL: f64 = 1e-10;

/// The fixed commodity basis {211, 212, 231, 232, 311, 312, 331, 332}.
#[derive(Debug, Clone, Copy)]
pub struct CommodityBasis;

impl CommodityBasis {
    pub const DIM: usize = 8;

    pub fn index_of(goods: [Good; 3]) -> usize {
        commodity_index(goods)
    }

    pub fn triple(index: usize) -> [Good; 3] {
        commodity_triple(index)
    }

    pub fn label(index: usize) -> String {
        let g = commodity_triple(index);
        let mut s = String::with_capacity(3);
        for x in g {
            s.push((b'0' + x.label()) as char);
        }
        s
    }

    pub fn parse_label(s: &str) -> Option<usize> {
        let b = s.as_bytes();
        if b.len() != 3 {
            return None;
        }
        let g = [
            Good::from_label(b[0].checked_sub(b'0')?)?,
            Good::from_label(b[1].checked_sub(b'0')?)?,
            Good::from_label(b[2].checked_sub(b'0')?)?,
        ];
        let idx = commodity_index(g);
        (commodity_triple(idx) == g).then_some(idx)
    }
}

/// A density block on the commodity space: an 8x8 complex matrix over the
/// fixed basis (row-major).
#[derive(Debug, Clone, PartialEq)]
pub struct CommodityDensity {
    data: [Complex64; 64],
}

impl CommodityDensity {
    pub fn zero() -> Self {
        Self { data: [Complex64::new(0.0, 0.0); 64] }
    }

    pub fn basis(index: usize) -> Self {
        let mut d = Self::zero();
        d.data[index * 8 + index] = Complex64::new(1.0, 0.0);
        d
    }

    /// The dyad |row><col| between two basis states.
    pub fn dyad(row: usize, col: usize) -> Self {
        let mut d = Self::zero();
        d.data[row * 8 + col] = Complex64::new(1.0, 0.0);
        d
    }

    pub fn from_distribution(p: &[f64; 8]) -> Result<Self, ChannelError> {
        let total: f64 = p.iter().sum();
        if p.iter().any(|&x| x < -1e-12) || (total - 1.0).abs() > 1e-9 {
            return Err(ChannelError::NotADistribution { total });
        }
        let mut d = Self::zero();
        for (i, &x) in p.iter().enumerate() {
            d.data[i * 8 + i] = Complex64::new(x, 0.0);
        }
        Ok(d)
    }

    pub fn from_matrix(data: [Complex64; 64]) -> Self {
        Self { data }
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * 8 + col]
    }

    pub fn data(&self) -> &[Complex64; 64] {
        &self.data
    }

    pub fn diagonal(&self) -> [f64; 8] {
        core::array::from_fn(|i| self.data[i * 8 + i].re)
    }

    pub fn trace(&self) -> Complex64 {
        (0..8).map(|i| self.data[i * 8 + i]).sum()
    }

    pub fn purity(&self) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for r in 0..8 {
            for c in 0..8 {
                acc += self.data[r * 8 + c] * self.data[c * 8 + r];
            }
        }
        acc.re
    }

    /// Largest off-diagonal magnitude.
    pub fn offdiagonal_max(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..8 {
            for c in 0..8 {
                if r != c {
                    worst = worst.max(self.data[r * 8 + c].norm());
                }
            }
        }
        worst
    }

    pub fn scaled(&self, k: f64) -> Self {
        let mut d = Self::zero();
        for (o, &x) in d.data.iter_mut().zip(self.data.iter()) {
            *o = x * k;
        }
        d
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut d = Self::zero();
        for i in 0..64 {
            d.data[i] = self.data[i] + other.data[i];
        }
        d
    }

    pub fn l1_distance(&self, other: &Self) -> f64 {
        self.data.iter().zip(other.data.iter()).map(|(a, b)| (a - b).norm()).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ChannelError {
    NotADistribution { total: f64 },
    /// Input to `apply` must have unit trace.
    NotNormalized { trace: f64 },
    /// Negative iteration count other than the -1 sentinel.
    BadHorizon { t: i64 },
    Circuit(CircuitError),
}

impl fmt::Display for ChannelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChannelError::NotADistribution { total } => {
                write!(f, "weights do not form a distribution (sum {total})")
            }
            ChannelError::NotNormalized { trace } => {
                write!(f, "density must have unit trace (got {trace})")
            }
            ChannelError::BadHorizon { t } => write!(f, "invalid horizon {t}"),
            ChannelError::Circuit(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for ChannelError {}

impl From<CircuitError> for ChannelError {
    fn from(e: CircuitError) -> Self {
        ChannelError::Circuit(e)
    }
}

/// The round superoperator: its action on vectorized dyads (a 64x64 complex
/// matrix) together with the column-stochastic 8x8 population block and the
/// generating strategy ensemble.
#[derive(Debug, Clone)]
pub struct TransitionChannel {
    /// Row-major 64x64; dyad |r><c| is vector index r*8+c.
    matrix: Box<[Complex64]>,
    t8: [[f64; 8]; 8],
    ensemble: StrategyEnsemble,
}

impl TransitionChannel {
    pub fn build(ensemble: &StrategyEnsemble) -> Result<Self, ChannelError> {
        let mut matrix = vec![Complex64::new(0.0, 0.0); 64 * 64].into_boxed_slice();
        for (weight, profile) in ensemble.parts() {
            for k in 0..8 {
                for l in 0..8 {
                    let img = dyad_image(commodity_triple(k), commodity_triple(l), profile)?;
                    let col = k * 8 + l;
                    for v in 0..64 {
                        matrix[v * 64 + col] += img[v] * weight;
                    }
                }
            }
        }
        let mut t8 = [[0.0; 8]; 8];
        for r in 0..8 {
            for k in 0..8 {
                t8[r][k] = matrix[(r * 8 + r) * 64 + (k * 8 + k)].re;
            }
        }
        Ok(Self { matrix, t8, ensemble: ensemble.clone() })
    }

    /// The 8x8 population block, `t8[target][source]` (column-stochastic).
    pub fn t8(&self) -> &[[f64; 8]; 8] {
        &self.t8
    }

    pub fn dyad_matrix(&self) -> &[Complex64] {
        &self.matrix
    }

    pub fn ensemble(&self) -> &StrategyEnsemble {
        &self.ensemble
    }

    /// One round on a commodity density block; trace is preserved.
    pub fn apply_unchecked(&self, rho: &CommodityDensity) -> CommodityDensity {
        let mut out = [Complex64::new(0.0, 0.0); 64];
        for (v, o) in out.iter_mut().enumerate() {
            let row = &self.matrix[v * 64..(v + 1) * 64];
            let mut acc = Complex64::new(0.0, 0.0);
            for (w, &m) in row.iter().enumerate() {
                if m.norm_sqr() != 0.0 {
                    acc += m * rho.data()[w];
                }
            }
            *o = acc;
        }
        CommodityDensity::from_matrix(out)
    }

    /// One round on a unit-trace density block.
    pub fn apply(&self, rho: &CommodityDensity) -> Result<CommodityDensity, ChannelError> {
        let tr = rho.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > 1e-9 {
            return Err(ChannelError::NotNormalized { trace: tr.re });
        }
        Ok(self.apply_unchecked(rho))
    }

    /// t rounds; t = 0 is the identity and the sentinel t = -1 returns the
    /// zero block (the convention payoff accumulation relies on).
    pub fn iterate(&self, rho: &CommodityDensity, t: i64) -> Result<CommodityDensity, ChannelError> {
        if t == -1 {
            return Ok(CommodityDensity::zero());
        }
        if t < 0 {
            return Err(ChannelError::BadHorizon { t });
        }
        let mut cur = rho.clone();
        for _ in 0..t {
            cur = self.apply_unchecked(&cur);
        }
        Ok(cur)
    }

    /// One round restricted to populations: `p -> t8 p`.
    pub fn step_distribution(&self, p: &[f64; 8]) -> [f64; 8] {
        let mut out = [0.0; 8];
        for (r, o) in out.iter_mut().enumerate() {
            *o = (0..8).map(|k| self.t8[r][k] * p[k]).sum();
            if *o < 0.0 && *o > -1e-15 {
                *o = 0.0;
            }
        }
        out
    }

    /// Closed-class decomposition of the population block, with stationary
    /// distributions, and (given an initial distribution) absorption weights
    /// and the limit state.
    pub fn steady_states(&self, initial: Option<&[f64; 8]>) -> ClosedClassDecomposition {
        markov::decompose(&self.t8, initial)
    }

    /// Verify the entanglement decay bound over all off-diagonal dyads.
    pub fn decay_certificate(&self) -> DecayReport {
        let mut max_ratio = 0.0f64;
        let mut max_two_diff = 0.0f64;
        let mut gate_violations = 0usize;
        for k in 0..8 {
            for l in 0..8 {
                if k == l {
                    continue;
                }
                let gk = commodity_triple(k);
                let gl = commodity_triple(l);
                let differences = gk.iter().zip(gl.iter()).filter(|(a, b)| a != b).count();
                let col = k * 8 + l;
                let mut img = [Complex64::new(0.0, 0.0); 64];
                for (v, o) in img.iter_mut().enumerate() {
                    *o = self.matrix[v * 64 + col];
                }
                let norm = spectral_norm_8x8(&img);
                if differences >= 2 {
                    max_two_diff = max_two_diff.max(norm);
                    if norm > EDGE_EPS {
                        gate_violations += 1;
                    }
                } else {
                    max_ratio = max_ratio.max(norm);
                    if norm > 1.0 / 3.0 + 1e-9 {
                        gate_violations += 1;
                    }
                }
            }
        }
        DecayReport { max_offdiagonal_ratio: max_ratio, max_two_difference_norm: max_two_diff, gate_violations }
    }
}

/// Largest singular value of an 8x8 complex matrix via power iteration on
/// M†M, maximized over basis starts so no eigenvector is missed.
pub fn spectral_norm_8x8(m: &[Complex64; 64]) -> f64 {
    let mut best = 0.0f64;
    for start in 0..8 {
        let mut v = [Complex64::new(0.0, 0.0); 8];
        v[start] = Complex64::new(1.0, 0.0);
        let mut norm = 0.0f64;
        for _ in 0..200 {
            let mut w = [Complex64::new(0.0, 0.0); 8];
            for r in 0..8 {
                for c in 0..8 {
                    w[r] += m[r * 8 + c] * v[c];
                }
            }
            let mut u = [Complex64::new(0.0, 0.0); 8];
            for r in 0..8 {
                for c in 0..8 {
                    u[c] += m[r * 8 + c].conj() * w[r];
                }
            }
            let len = Float::sqrt(u.iter().map(|x| x.norm_sqr()).sum::<f64>());
            if len < 1e-300 {
                norm = 0.0;
                break;
            }
            for x in u.iter_mut() {
                *x /= len;
            }
            v = u;
            norm = len;
        }
        best = best.max(Float::sqrt(norm));
    }
    best
}

#[derive(Debug, Clone, Copy)]
pub struct DecayReport {
    /// Largest image spectral norm over single-difference dyads (the decay
    /// theorem bounds it by 1/3).
    pub max_offdiagonal_ratio: f64,
    /// Largest image norm over dyads differing in at least two positions
    /// (must vanish).
    pub max_two_difference_norm: f64,
    /// Count of dyads violating either gate.
    pub gate_violations: usize,
}
