use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use num_complex::Complex64;
use num_traits::Float;

use crate::qsim::{economy_layout, LocalOperator, SparseState};

use super::{Agent, CircuitError, Good, Meeting, StrategyProfile};

// Qubit indices in the economy layout (width 24, qubit 0 = leftmost).
// goods.A = 0,1  goods.B = 2,3  goods.C = 4,5
// match.W = 6,7,8 (A,B,C)
// anc.A = 9..13  anc.B = 13..17  anc.C = 17..21 (wire 1 first)
// flag.A = 21  flag.B = 22  flag.C = 23
const fn goods_qubit(agent: Agent) -> u32 {
    2 * agent as u32
}

const fn w_qubit(agent: Agent) -> u32 {
    6 + agent as u32
}

const fn anc_qubit(agent: Agent, wire: u32) -> u32 {
    9 + 4 * agent as u32 + wire
}

// Label bit positions (bit = 23 - qubit).
const fn goods_shift(agent: Agent) -> u32 {
    22 - 2 * agent as u32
}

const fn w_bit(agent: Agent) -> u32 {
    17 - agent as u32
}

const fn flag_bit(agent: Agent) -> u32 {
    2 - agent as u32
}

const fn anc_wire_bit(agent: Agent, wire: u32) -> u32 {
    14 - 4 * agent as u32 - wire
}

/// Label mask covering the twelve strategy ancilla wires.
const ANC_MASK: u32 = 0xFFF << 3;

/// Ancilla wire an agent consults to accept `other` while holding `held`:
/// the held good selects the pair, the other goods in ascending order select
/// the wire within it.
fn accept_wire_bit(agent: Agent, held: Good, other: Good) -> u32 {
    let pair = if held == agent.holdable()[0] { 0 } else { 1 };
    let mut others = [Good::G1, Good::G2];
    let mut k = 0;
    for g in Good::ALL {
        if g != held {
            others[k] = g;
            k += 1;
        }
    }
    let slot = if other == others[0] { 0 } else { 1 };
    anc_wire_bit(agent, 2 * pair + slot)
}

fn goods_value(label: u32, agent: Agent) -> u32 {
    (label >> goods_shift(agent)) & 0b11
}

fn with_goods_value(label: u32, agent: Agent, value: u32) -> u32 {
    let shift = goods_shift(agent);
    (label & !(0b11 << shift)) | (value << shift)
}

/// One computational-basis component of the post-round state.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub amplitude: Complex64,
    pub goods: [Good; 3],
    pub meeting: Meeting,
    /// Twelve strategy-wire bits, agent A's first wire in bit 11 down to
    /// agent C's fourth wire in bit 0.
    pub ancilla: u16,
    /// Consumption flags, agent A in bit 2, B in bit 1, C in bit 0.
    pub flags: u8,
}

impl Branch {
    pub fn probability(&self) -> f64 {
        self.amplitude.norm_sqr()
    }

    pub fn flag(&self, agent: Agent) -> bool {
        (self.flags >> (2 - agent as u8)) & 1 == 1
    }

    pub fn ancilla_string(&self) -> String {
        let mut s = String::with_capacity(12);
        for k in (0..12).rev() {
            s.push(if (self.ancilla >> k) & 1 == 1 { '1' } else { '0' });
        }
        s
    }

    pub fn flags_string(&self) -> String {
        let mut s = String::with_capacity(3);
        for k in (0..3).rev() {
            s.push(if (self.flags >> k) & 1 == 1 { '1' } else { '0' });
        }
        s
    }

    pub fn goods_string(&self) -> String {
        let mut s = String::with_capacity(3);
        for g in self.goods {
            s.push((b'0' + g.label()) as char);
        }
        s
    }
}

/// Index of a goods triple in the fixed commodity basis
/// {211, 212, 231, 232, 311, 312, 331, 332}.
pub fn commodity_index(goods: [Good; 3]) -> usize {
    let a = (goods[0] == Good::G3) as usize;
    let b = (goods[1] == Good::G3) as usize;
    let c = (goods[2] == Good::G2) as usize;
    4 * a + 2 * b + c
}

/// Goods triple of a commodity-basis index.
pub fn commodity_triple(index: usize) -> [Good; 3] {
    [
        if index & 4 != 0 { Good::G3 } else { Good::G2 },
        if index & 2 != 0 { Good::G3 } else { Good::G1 },
        if index & 1 != 0 { Good::G2 } else { Good::G1 },
    ]
}

fn validate_goods(goods: [Good; 3]) -> Result<(), CircuitError> {
    for (agent, g) in Agent::ALL.into_iter().zip(goods) {
        if !agent.can_hold(g) {
            return Err(CircuitError::GoodsNotHoldable { agent, good: g });
        }
    }
    Ok(())
}

/// Apply the whole single-round circuit to the commodity basis state
/// `goods` and return the final 24-qubit state: matchmaking in the W
/// register, the ancilla entangler, value-controlled strategy gates for the
/// meeting agents, the inverse entangler, agreement-controlled commodity
/// swaps, and per-agent consumption/production.
pub fn round_state(
    goods: [Good; 3],
    profile: &StrategyProfile,
) -> Result<SparseState, CircuitError> {
    validate_goods(goods)?;
    let layout = economy_layout();

    let base = Agent::ALL
        .into_iter()
        .zip(goods)
        .fold(0u32, |l, (agent, g)| l | (g.bits() << goods_shift(agent)));
    let amp = Complex64::new(Float::sqrt(1.0f64 / 3.0), 0.0);
    let mut state = SparseState::from_amplitudes(
        layout,
        Meeting::ALL.map(|m| (base | (m.w_value() << 15), amp)),
    )?;

    state = state.apply_y_string_exponential(profile.theta(), ANC_MASK);

    for agent in Agent::ALL {
        for held in agent.holdable() {
            let pair = if held == agent.holdable()[0] { 0 } else { 1 };
            let targets = [anc_qubit(agent, 2 * pair), anc_qubit(agent, 2 * pair + 1)];
            let gq = goods_qubit(agent);
            let controls = [
                (w_qubit(agent), true),
                (gq, held.bits() & 0b10 != 0),
                (gq + 1, held.bits() & 0b01 != 0),
            ];
            let op = LocalOperator::new(&targets, profile.unitary(agent, held).matrix())?
                .controlled(&controls)?;
            state = state.apply(&op)?;
        }
    }

    state = state.apply_y_string_exponential(-profile.theta(), ANC_MASK);
    state = state.permute_labels(swap_stage);
    state = state.permute_labels(consumption_stage);
    Ok(state)
}

/// Agreement-controlled commodity swaps. For the meeting pair, the ordered
/// good combinations (g, g') are scanned lexicographically and the first one
/// whose two accept wires both read 1 swaps the goods registers; later
/// combinations are skipped, so at most one swap fires per basis state.
/// Controls read ancilla wires only, never the goods registers.
fn swap_stage(mut label: u32) -> u32 {
    for meeting in Meeting::ALL {
        let (i, j) = meeting.agents();
        if (label >> w_bit(i)) & 1 == 0 || (label >> w_bit(j)) & 1 == 0 {
            continue;
        }
        'combo: for gi in i.holdable() {
            for gj in j.holdable() {
                if gi == gj {
                    continue;
                }
                let wi = accept_wire_bit(i, gi, gj);
                let wj = accept_wire_bit(j, gj, gi);
                if (label >> wi) & 1 == 1 && (label >> wj) & 1 == 1 {
                    let vi = goods_value(label, i);
                    let vj = goods_value(label, j);
                    label = with_goods_value(label, i, vj);
                    label = with_goods_value(label, j, vi);
                    break 'combo;
                }
            }
        }
    }
    label
}

/// Per-agent consumption: toggle the flag when the goods register holds the
/// consumption good, then swap consumption and production goods on the
/// register whenever the flag reads 1.
fn consumption_stage(mut label: u32) -> u32 {
    for agent in Agent::ALL {
        let cons = agent.consumption().bits();
        let prod = agent.production().bits();
        let fb = flag_bit(agent);
        if goods_value(label, agent) == cons {
            label ^= 1 << fb;
        }
        if (label >> fb) & 1 == 1 {
            let v = goods_value(label, agent);
            if v == cons {
                label = with_goods_value(label, agent, prod);
            } else if v == prod {
                label = with_goods_value(label, agent, cons);
            }
        }
    }
    label
}

/// Exact branch expansion of one round from a commodity basis state.
pub fn round_branches(
    goods: [Good; 3],
    profile: &StrategyProfile,
) -> Result<Vec<Branch>, CircuitError> {
    let state = round_state(goods, profile)?;
    let mut out = Vec::with_capacity(state.len());
    for (label, amplitude) in state.iter() {
        let mut triple = [Good::G1; 3];
        for agent in Agent::ALL {
            triple[agent as usize] = Good::from_bits(goods_value(label, agent)).ok_or(
                CircuitError::InvariantViolation { what: "goods register left the 1..3 range" },
            )?;
        }
        let meeting = Meeting::from_w_value((label >> 15) & 0b111)
            .ok_or(CircuitError::InvariantViolation { what: "matchmaking register corrupted" })?;
        out.push(Branch {
            amplitude,
            goods: triple,
            meeting,
            ancilla: ((label >> 3) & 0xFFF) as u16,
            flags: (label & 0b111) as u8,
        });
    }
    Ok(out)
}

/// Image of the dyad |left><right| under one round, reduced to the
/// eight-dimensional commodity space: both sides are branch-expanded and the
/// matchmaking, strategy-wire and flag registers are traced out. Returned
/// row-major over the commodity basis.
pub fn dyad_image(
    left: [Good; 3],
    right: [Good; 3],
    profile: &StrategyProfile,
) -> Result<[Complex64; 64], CircuitError> {
    let lb = round_branches(left, profile)?;
    let rb = if left == right { lb.clone() } else { round_branches(right, profile)? };
    Ok(pair_branches(&lb, &rb))
}

/// Contract two branch lists over equal (meeting, ancilla, flags) labels.
pub fn pair_branches(left: &[Branch], right: &[Branch]) -> [Complex64; 64] {
    let mut by_env: BTreeMap<(Meeting, u16, u8), Vec<(usize, Complex64)>> = BTreeMap::new();
    for b in right {
        by_env
            .entry((b.meeting, b.ancilla, b.flags))
            .or_default()
            .push((commodity_index(b.goods), b.amplitude));
    }
    let mut out = [Complex64::new(0.0, 0.0); 64];
    for b in left {
        if let Some(cols) = by_env.get(&(b.meeting, b.ancilla, b.flags)) {
            let row = commodity_index(b.goods);
            for &(col, ramp) in cols {
                out[row * 8 + col] += b.amplitude * ramp.conj();
            }
        }
    }
    out
}
