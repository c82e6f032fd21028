use alloc::vec::Vec;
use num_complex::Complex64;

use crate::qsim::SparseState;

use super::{Agent, Good, Meeting, StrategyProfile};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    fn matrix(self) -> [Complex64; 4] {
        match self {
            Pauli::I => [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
            Pauli::X => [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
            Pauli::Y => [c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)],
            Pauli::Z => [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)],
        }
    }

    /// Whether this factor anticommutes with Y.
    fn anticommutes_with_y(self) -> bool {
        matches!(self, Pauli::X | Pauli::Z)
    }
}

/// A Pauli word over the twelve strategy wires, agent A's first wire first.
pub type PauliString = [Pauli; 12];

#[derive(Debug, Clone, Default)]
pub struct PauliSum {
    pub terms: Vec<(Complex64, PauliString)>,
}

impl PauliSum {
    pub fn is_zero(&self, tol: f64) -> bool {
        self.terms.iter().all(|(a, _)| a.norm() < tol)
    }

    /// Apply the sum to a state whose layout places the strategy wires at
    /// `wire_qubits` (wire index -> qubit index).
    pub fn apply(&self, state: &SparseState, wire_qubits: &[u32; 12]) -> SparseState {
        let mut acc = state.scaled(c(0.0, 0.0));
        for (coeff, word) in &self.terms {
            let mut part = state.map_phased(|label| {
                let mut l = label;
                let mut phase = c(1.0, 0.0);
                for (wire, p) in word.iter().enumerate() {
                    let bit = state.layout().bit(wire_qubits[wire]);
                    let b = (l >> bit) & 1;
                    match p {
                        Pauli::I => {}
                        Pauli::X => l ^= 1 << bit,
                        Pauli::Z => {
                            if b == 1 {
                                phase = -phase;
                            }
                        }
                        Pauli::Y => {
                            l ^= 1 << bit;
                            phase *= if b == 0 { c(0.0, 1.0) } else { c(0.0, -1.0) };
                        }
                    }
                }
                (l, phase)
            });
            part = part.scaled(*coeff);
            acc = acc.add(&part).expect("same layout");
        }
        acc
    }
}

/// Commutant decomposition of one goods sector of a meeting's joint strategy
/// operator: M = commuting + anticommuting with respect to the Y word on all
/// twelve wires.
#[derive(Debug, Clone)]
pub struct SectorSplit {
    /// Goods held by the meeting pair (first agent's, second agent's).
    pub held: (Good, Good),
    pub commuting: PauliSum,
    pub anticommuting: PauliSum,
}

#[derive(Debug, Clone)]
pub struct MeetingSplit {
    pub meeting: Meeting,
    pub sectors: Vec<SectorSplit>,
}

/// Expand a 4x4 matrix in the two-qubit Pauli basis; the coefficient of P⊗Q is Tr((P⊗Q) U) / 4.
fn pauli_coefficients(u: &[Complex64; 16]) -> Vec<(Complex64, Pauli, Pauli)> {
    let mut out = Vec::new();
    for p in Pauli::ALL {
        for q in Pauli::ALL {
            let pm = p.matrix();
            let qm = q.matrix();
            // Tr((P⊗Q) U) = sum_{rc} (P⊗Q)[r][c] U[c][r]
            let mut tr = c(0.0, 0.0);
            for r in 0..4 {
                for col in 0..4 {
                    let pq = pm[(r >> 1) * 2 + (col >> 1)] * qm[(r & 1) * 2 + (col & 1)];
                    if pq.norm_sqr() != 0.0 {
                        tr += pq * u[col * 4 + r];
                    }
                }
            }
            let coeff = tr / 4.0;
            if coeff.norm() > 1e-14 {
                out.push((coeff, p, q));
            }
        }
    }
    out
}

fn wire_base(agent: Agent) -> usize {
    4 * agent as usize
}

fn pair_offset(agent: Agent, held: Good) -> usize {
    if held == agent.holdable()[0] {
        0
    } else {
        2
    }
}

/// Split every goods sector of the meeting's joint strategy operator into the
/// parts that commute and anticommute with the twelve-wire Y word. The
/// conjugated operator then satisfies J† M J = M_c + M_a J².
pub fn commutant_split(profile: &StrategyProfile, meeting: Meeting) -> MeetingSplit {
    let (i, j) = meeting.agents();
    let mut sectors = Vec::new();
    for gi in i.holdable() {
        for gj in j.holdable() {
            let ci = pauli_coefficients(profile.unitary(i, gi).matrix());
            let cj = pauli_coefficients(profile.unitary(j, gj).matrix());
            let oi = wire_base(i) + pair_offset(i, gi);
            let oj = wire_base(j) + pair_offset(j, gj);
            let mut commuting = PauliSum::default();
            let mut anticommuting = PauliSum::default();
            for &(ai, p1, p2) in &ci {
                for &(aj, q1, q2) in &cj {
                    let mut word = [Pauli::I; 12];
                    word[oi] = p1;
                    word[oi + 1] = p2;
                    word[oj] = q1;
                    word[oj + 1] = q2;
                    let odd = word.iter().filter(|p| p.anticommutes_with_y()).count() % 2 == 1;
                    let term = (ai * aj, word);
                    if odd {
                        anticommuting.terms.push(term);
                    } else {
                        commuting.terms.push(term);
                    }
                }
            }
            sectors.push(SectorSplit { held: (gi, gj), commuting, anticommuting });
        }
    }
    MeetingSplit { meeting, sectors }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::QUANTUM_THETA;

    #[test]
    fn classical_family_has_no_anticommuting_part() {
        let p = StrategyProfile::classical([0.3, 0.6, 0.9], 0.0).unwrap();
        for meeting in Meeting::ALL {
            for sector in commutant_split(&p, meeting).sectors {
                assert!(sector.anticommuting.is_zero(1e-12));
            }
        }
    }

    #[test]
    fn quantum_bob_sector_splits_into_yy_and_zy() {
        let q_b = 0.4f64;
        let p = StrategyProfile::quantum([0.0, q_b, 0.0], QUANTUM_THETA).unwrap();
        let split = commutant_split(&p, Meeting::BC);
        let sector = split
            .sectors
            .iter()
            .find(|s| s.held == (Good::G3, Good::G1))
            .unwrap();
        // anticommuting part carries sqrt(q_B) Z⊗Y on Bob's second pair
        assert_eq!(sector.anticommuting.terms.len(), 1);
        let (coeff, word) = &sector.anticommuting.terms[0];
        assert!((coeff.norm() - (q_b.sqrt())).abs() < 1e-12);
        assert_eq!(word[6], Pauli::Z);
        assert_eq!(word[7], Pauli::Y);
        // commuting part carries sqrt(1-q_B) Y⊗Y there
        let yy = sector
            .commuting
            .terms
            .iter()
            .find(|(_, w)| w[6] == Pauli::Y && w[7] == Pauli::Y)
            .unwrap();
        assert!((yy.0.norm() - (1.0 - q_b).sqrt()).abs() < 1e-12);
    }
}
