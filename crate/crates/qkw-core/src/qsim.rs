//! Minimal exact quantum linear algebra on labeled qubit registers.
//!
//! States are sparse maps from basis labels to complex amplitudes. A label
//! packs the whole register file into a `u32`; within a register the leftmost
//! qubit is the most significant bit, and registers are laid out in
//! declaration order, so a label prints exactly like the ket it names.

mod density;
mod layout;
mod operator;
mod state;

pub use density::DensityBlock;
pub use layout::{economy_layout, RegisterLayout};
pub use operator::{kron, mat_i, mat_x, mat_y, mat_z, LocalOperator};
pub use state::SparseState;

use core::fmt;

/// Amplitudes with squared magnitude below this are dropped from sparse maps.
pub const PRUNE_EPS: f64 = 1e-14;

/// Unitarity / hermiticity checks use this tolerance.
pub const UNITARY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QsimError {
    /// A register name appears twice in a layout.
    DuplicateRegister { name: &'static str },
    /// Total layout width exceeds the 32-bit label capacity.
    LayoutTooWide { width: u32 },
    /// A register width of zero was requested.
    EmptyRegister { name: &'static str },
    /// Referenced register does not exist in the layout.
    UnknownRegister { name: alloc::string::String },
    /// Operator target or control index is outside the state's layout.
    TargetOutOfRange { qubit: u32, width: u32 },
    /// Matrix size does not match the number of target qubits.
    DimensionMismatch { targets: usize, elements: usize },
    /// A qubit is listed more than once among targets and controls.
    OverlappingControls { qubit: u32 },
    /// Two states or blocks built over different layouts were combined.
    LayoutMismatch,
    /// `partial_trace` was asked to keep nothing.
    EmptyKeepSet,
    /// A basis label has bits outside the layout width.
    LabelOutOfRange { label: u32, width: u32 },
}

impl fmt::Display for QsimError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QsimError::DuplicateRegister { name } => write!(f, "duplicate register `{name}`"),
            QsimError::LayoutTooWide { width } => {
                write!(f, "layout width {width} exceeds 32 qubits")
            }
            QsimError::EmptyRegister { name } => write!(f, "register `{name}` has zero width"),
            QsimError::UnknownRegister { name } => write!(f, "unknown register `{name}`"),
            QsimError::TargetOutOfRange { qubit, width } => {
                write!(f, "qubit {qubit} out of range for width {width}")
            }
            QsimError::DimensionMismatch { targets, elements } => {
                write!(f, "matrix with {elements} elements does not fit {targets} targets")
            }
            QsimError::OverlappingControls { qubit } => {
                write!(f, "qubit {qubit} used as both control and target")
            }
            QsimError::LayoutMismatch => write!(f, "states are defined over different layouts"),
            QsimError::EmptyKeepSet => write!(f, "partial trace must keep at least one register"),
            QsimError::LabelOutOfRange { label, width } => {
                write!(f, "label {label:#b} out of range for width {width}")
            }
        }
    }
}

impl core::error::Error for QsimError {}
