use alloc::vec::Vec;
use num_complex::Complex64;

use crate::qsim::{LocalOperator, RegisterLayout, SparseState};

use super::CircuitError;

/// The two-person exchange protocol: Alice holds one qubit, Bob one qubit,
/// each applies a single-qubit strategy to an ancilla between an optional
/// entangler and its inverse, and a swap of the goods qubits fires when both
/// ancillas read 1.
#[derive(Debug, Clone)]
pub struct TwoPersonGame {
    /// Entangled goods coefficients K_ij over |00>,|01>,|10>,|11>.
    pub k: [Complex64; 4],
    /// Alice's strategy amplitudes (a0, a1) with U_A|0> = a0|0> + a1|1>.
    pub a: [Complex64; 2],
    /// Bob's strategy amplitudes (b0, b1).
    pub b: [Complex64; 2],
    /// Strategy entangler angle; `None` plays without an entangler.
    pub theta: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct TwoPersonOutcome {
    /// Probability of the trade event: both ancillas read 1 and Alice's |0>
    /// was exchanged for Bob's |1>.
    pub success_probability: f64,
    /// Full post-circuit state over (goods.A, goods.B, anc.A, anc.B).
    pub state: SparseState,
    /// Probabilities of every computational-basis outcome, by label.
    pub distribution: Vec<(u32, f64)>,
}

fn check_norm(field: &'static str, v: &[Complex64]) -> Result<(), CircuitError> {
    let n: f64 = v.iter().map(|x| x.norm_sqr()).sum();
    if (n - 1.0).abs() > 1e-9 {
        return Err(CircuitError::NotNormalized { field, norm_sqr: n });
    }
    Ok(())
}

fn strategy_1q(amps: [Complex64; 2]) -> [Complex64; 4] {
    // unitary completion of the first column (a0, a1)
    [amps[0], -amps[1].conj(), amps[1], amps[0].conj()]
}

/// Run the two-person trade circuit.
pub fn two_person_trade(game: &TwoPersonGame) -> Result<TwoPersonOutcome, CircuitError> {
    check_norm("K", &game.k)?;
    check_norm("a", &game.a)?;
    check_norm("b", &game.b)?;
    let layout = RegisterLayout::new(&[("psi.A", 1), ("psi.B", 1), ("anc.A", 1), ("anc.B", 1)])?;
    // labels: bit3 = psi.A, bit2 = psi.B, bit1 = anc.A, bit0 = anc.B
    let mut state = SparseState::from_amplitudes(
        layout,
        (0..4).map(|ij| (((ij as u32) << 2), game.k[ij])),
    )?;
    const ANC_MASK: u32 = 0b0011;
    if let Some(theta) = game.theta {
        state = state.apply_y_string_exponential(theta, ANC_MASK);
    }
    state = state.apply(&LocalOperator::new(&[2], &strategy_1q(game.a))?)?;
    state = state.apply(&LocalOperator::new(&[3], &strategy_1q(game.b))?)?;
    if let Some(theta) = game.theta {
        state = state.apply_y_string_exponential(-theta, ANC_MASK);
    }
    // swap goods qubits when both ancillas read 1
    state = state.permute_labels(|l| {
        if l & ANC_MASK == ANC_MASK {
            let a = (l >> 3) & 1;
            let b = (l >> 2) & 1;
            (l & !0b1100) | (b << 3) | (a << 2)
        } else {
            l
        }
    });
    // success: her |0> for his |1>, i.e. final |10> with agreeing ancillas
    let success_probability = state.amplitude(0b1011).norm_sqr();
    let distribution = state.iter().map(|(l, a)| (l, a.norm_sqr())).collect();
    Ok(TwoPersonOutcome { success_probability, state, distribution })
}
