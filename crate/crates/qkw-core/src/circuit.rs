//! The single-round exchange circuit: matchmaking over a W state, entangled
//! per-good strategies, agreement-controlled commodity swaps and
//! consumption/production, with exact branch expansions from any commodity
//! basis state.

mod commutant;
mod round;
mod strategy;
mod two_person;

pub use commutant::{commutant_split, MeetingSplit, Pauli, PauliString, PauliSum, SectorSplit};
pub use round::{
    commodity_index, commodity_triple, dyad_image, pair_branches, round_branches, round_state,
    Branch,
};
pub use strategy::{
    StrategyEnsemble, StrategyProfile, StrategyUnitary, COALITION_THETA, QUANTUM_THETA,
};
pub use two_person::{two_person_trade, TwoPersonGame, TwoPersonOutcome};

use core::fmt;

use crate::qsim::QsimError;

/// Tolerance used when comparing amplitudes against closed forms.
pub const AMPLITUDE_TOL: f64 = 1e-10;

/// A tradable good. Binary encoding in a goods register: |1> = 01, |2> = 10,
/// |3> = 11; 00 never occurs at a round boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Good {
    G1 = 1,
    G2 = 2,
    G3 = 3,
}

impl Good {
    pub fn from_label(label: u8) -> Option<Self> {
        match label {
            1 => Some(Good::G1),
            2 => Some(Good::G2),
            3 => Some(Good::G3),
            _ => None,
        }
    }

    pub fn label(self) -> u8 {
        self as u8
    }

    /// Two-bit register value.
    pub fn bits(self) -> u32 {
        self as u32
    }

    pub fn from_bits(bits: u32) -> Option<Self> {
        match bits {
            1 => Some(Good::G1),
            2 => Some(Good::G2),
            3 => Some(Good::G3),
            _ => None,
        }
    }

    pub const ALL: [Good; 3] = [Good::G1, Good::G2, Good::G3];
}

impl fmt::Display for Good {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// One of the three agents. Consumption/production pattern: A consumes 1 and
/// produces 2, B consumes 2 and produces 3, C consumes 3 and produces 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Agent {
    A = 0,
    B = 1,
    C = 2,
}

impl Agent {
    pub const ALL: [Agent; 3] = [Agent::A, Agent::B, Agent::C];

    pub fn name(self) -> &'static str {
        match self {
            Agent::A => "A",
            Agent::B => "B",
            Agent::C => "C",
        }
    }

    pub fn consumption(self) -> Good {
        match self {
            Agent::A => Good::G1,
            Agent::B => Good::G2,
            Agent::C => Good::G3,
        }
    }

    pub fn production(self) -> Good {
        match self {
            Agent::A => Good::G2,
            Agent::B => Good::G3,
            Agent::C => Good::G1,
        }
    }

    /// The two goods the agent may hold at a round boundary, ascending.
    pub fn holdable(self) -> [Good; 2] {
        match self {
            Agent::A => [Good::G2, Good::G3],
            Agent::B => [Good::G1, Good::G3],
            Agent::C => [Good::G1, Good::G2],
        }
    }

    pub fn can_hold(self, g: Good) -> bool {
        g != self.consumption()
    }
}

impl fmt::Display for Agent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which pair of agents the matchmaking register selected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Meeting {
    AB = 0,
    AC = 1,
    BC = 2,
}

impl Meeting {
    pub const ALL: [Meeting; 3] = [Meeting::AB, Meeting::AC, Meeting::BC];

    pub fn agents(self) -> (Agent, Agent) {
        match self {
            Meeting::AB => (Agent::A, Agent::B),
            Meeting::AC => (Agent::A, Agent::C),
            Meeting::BC => (Agent::B, Agent::C),
        }
    }

    /// Matchmaking register value, reading the three qubits as (A, B, C).
    pub fn w_value(self) -> u32 {
        match self {
            Meeting::AB => 0b110,
            Meeting::AC => 0b101,
            Meeting::BC => 0b011,
        }
    }

    pub fn from_w_value(v: u32) -> Option<Self> {
        match v {
            0b110 => Some(Meeting::AB),
            0b101 => Some(Meeting::AC),
            0b011 => Some(Meeting::BC),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Meeting::AB => "AB",
            Meeting::AC => "AC",
            Meeting::BC => "BC",
        }
    }
}

impl fmt::Display for Meeting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CircuitError {
    /// A strategy parameter is outside [0, 1] or theta outside [0, 2*pi].
    ParameterOutOfRange { name: &'static str, value: f64 },
    /// A custom strategy matrix is not unitary to tolerance.
    NonUnitary { defect: f64 },
    /// A custom strategy matrix violates <00|U|00> = <11|U|11> = 0.
    ConstraintViolation { element: &'static str, magnitude: f64 },
    /// A goods triple assigns an agent a good they cannot hold.
    GoodsNotHoldable { agent: Agent, good: Good },
    /// Mixture weights must be non-negative and sum to one.
    BadMixtureWeights,
    /// Two-person game fields are not normalized.
    NotNormalized { field: &'static str, norm_sqr: f64 },
    /// Internal state violated a circuit invariant (e.g. a 00 goods value).
    InvariantViolation { what: &'static str },
    Qsim(QsimError),
}

impl fmt::Display for CircuitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CircuitError::ParameterOutOfRange { name, value } => {
                write!(f, "parameter {name} = {value} out of range")
            }
            CircuitError::NonUnitary { defect } => {
                write!(f, "strategy matrix is not unitary (defect {defect:e})")
            }
            CircuitError::ConstraintViolation { element, magnitude } => {
                write!(f, "strategy constraint violated: |{element}| = {magnitude:e} != 0")
            }
            CircuitError::GoodsNotHoldable { agent, good } => {
                write!(f, "agent {agent} cannot hold good {good}")
            }
            CircuitError::BadMixtureWeights => write!(f, "mixture weights must sum to 1"),
            CircuitError::NotNormalized { field, norm_sqr } => {
                write!(f, "{field} is not normalized (|.|^2 = {norm_sqr})")
            }
            CircuitError::InvariantViolation { what } => {
                write!(f, "circuit invariant violated: {what}")
            }
            CircuitError::Qsim(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for CircuitError {}

impl From<QsimError> for CircuitError {
    fn from(e: QsimError) -> Self {
        CircuitError::Qsim(e)
    }
}
