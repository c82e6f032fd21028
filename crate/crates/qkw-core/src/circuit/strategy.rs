use alloc::vec::Vec;
use num_complex::Complex64;
use num_traits::Float;

use crate::qsim::{kron, mat_i, mat_x, mat_y, mat_z, LocalOperator, UNITARY_TOL};

use super::{Agent, CircuitError, Good};

/// Entanglement angle at which strategies are maximally entangled.
pub const QUANTUM_THETA: f64 = core::f64::consts::FRAC_PI_4;
/// The coalition analysis runs at maximal entanglement as well.
pub const COALITION_THETA: f64 = QUANTUM_THETA;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// A 4x4 unitary an agent applies to their two-wire ancilla pair for one held
/// good. Within the pair, wire 1 means "accept the smaller-labeled other
/// good" and wire 2 "accept the larger-labeled other good".
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyUnitary {
    held: Good,
    matrix: [Complex64; 16],
}

impl StrategyUnitary {
    pub fn new(held: Good, matrix: [Complex64; 16]) -> Result<Self, CircuitError> {
        let op = LocalOperator::new(&[0, 1], &matrix).expect("4x4 on two targets");
        let defect = op.unitarity_defect();
        if defect >= UNITARY_TOL {
            return Err(CircuitError::NonUnitary { defect });
        }
        if matrix[0].norm() >= UNITARY_TOL {
            return Err(CircuitError::ConstraintViolation {
                element: "<00|U|00>",
                magnitude: matrix[0].norm(),
            });
        }
        if matrix[15].norm() >= UNITARY_TOL {
            return Err(CircuitError::ConstraintViolation {
                element: "<11|U|11>",
                magnitude: matrix[15].norm(),
            });
        }
        Ok(Self { held, matrix })
    }

    pub fn held(&self) -> Good {
        self.held
    }

    pub fn matrix(&self) -> &[Complex64; 16] {
        &self.matrix
    }
}

fn to16(v: Vec<Complex64>) -> [Complex64; 16] {
    let mut m = [c(0.0, 0.0); 16];
    m.copy_from_slice(&v);
    m
}

/// sqrt(s) I + i sqrt(1-s) Y  (single qubit).
fn accept_mix(s: f64) -> [Complex64; 4] {
    let i2 = mat_i();
    let y = mat_y();
    let mut m = [c(0.0, 0.0); 4];
    let (rs, ri) = (Float::sqrt(s), Float::sqrt(1.0 - s));
    for k in 0..4 {
        m[k] = i2[k] * rs + y[k] * c(0.0, ri);
    }
    m
}

fn lincomb(a: f64, ma: &[Complex64], b: f64, mb: &[Complex64]) -> Vec<Complex64> {
    ma.iter()
        .zip(mb)
        .map(|(&x, &y)| x * Float::sqrt(a) + y * Float::sqrt(b))
        .collect()
}


/// Per-agent strategy unitaries for both holdable goods plus the common
/// entanglement angle. Slots are ordered (A,2), (A,3), (B,1), (B,3), (C,1),
/// (C,2).
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyProfile {
    unitaries: [StrategyUnitary; 6],
    theta: f64,
}

fn slot(agent: Agent, held: Good) -> usize {
    let pair = if held == agent.holdable()[0] { 0 } else { 1 };
    agent as usize * 2 + pair
}

fn check_param(name: &'static str, v: f64) -> Result<(), CircuitError> {
    if !(0.0..=1.0).contains(&v) || !v.is_finite() {
        return Err(CircuitError::ParameterOutOfRange { name, value: v });
    }
    Ok(())
}

fn check_theta(theta: f64) -> Result<(), CircuitError> {
    if !(0.0..=2.0 * core::f64::consts::PI).contains(&theta) {
        return Err(CircuitError::ParameterOutOfRange { name: "theta", value: theta });
    }
    Ok(())
}

impl StrategyProfile {
    pub fn from_unitaries(
        unitaries: [(Agent, StrategyUnitary); 6],
        theta: f64,
    ) -> Result<Self, CircuitError> {
        check_theta(theta)?;
        let mut slots: [Option<StrategyUnitary>; 6] = Default::default();
        for (agent, u) in unitaries {
            let held = u.held();
            if !agent.can_hold(held) {
                return Err(CircuitError::GoodsNotHoldable { agent, good: held });
            }
            slots[slot(agent, held)] = Some(u);
        }
        if slots.iter().any(Option::is_none) {
            return Err(CircuitError::InvariantViolation {
                what: "profile must define one unitary per (agent, holdable good)",
            });
        }
        Ok(Self { unitaries: slots.map(Option::unwrap), theta })
    }

    /// Family with acceptance weights s = (s_A, s_B, s_C): s_i = 1 always
    /// prefers the lower-storage-cost good (fundamental), s_i = 0 the
    /// costlier, more marketable one (speculative).
    pub fn classical(s: [f64; 3], theta: f64) -> Result<Self, CircuitError> {
        check_param("s_A", s[0])?;
        check_param("s_B", s[1])?;
        check_param("s_C", s[2])?;
        check_theta(theta)?;
        let y = mat_y();
        let us = [
            (Agent::A, Good::G2, to16(kron(&y, &accept_mix(s[0])))),
            (Agent::A, Good::G3, to16(kron(&y, &accept_mix(1.0 - s[0])))),
            (Agent::B, Good::G1, to16(kron(&y, &accept_mix(s[1])))),
            (Agent::B, Good::G3, to16(kron(&accept_mix(1.0 - s[1]), &y))),
            (Agent::C, Good::G1, to16(kron(&accept_mix(s[2]), &y))),
            (Agent::C, Good::G2, to16(kron(&accept_mix(1.0 - s[2]), &y))),
        ];
        Self::build(us, theta)
    }

    /// Entangled family with attack weights q = (q_A, q_B, q_C); at q = 0 it
    /// reproduces the fundamental classical strategies up to global phases.
    pub fn quantum(q: [f64; 3], theta: f64) -> Result<Self, CircuitError> {
        check_param("q_A", q[0])?;
        check_param("q_B", q[1])?;
        check_param("q_C", q[2])?;
        check_theta(theta)?;
        let (i2, x, y, z) = (mat_i(), mat_x(), mat_y(), mat_z());
        let yy = kron(&y, &y);
        let us = [
            (Agent::A, Good::G2, to16(kron(&y, &i2))),
            (Agent::A, Good::G3, to16(lincomb(1.0 - q[0], &yy, q[0], &kron(&y, &x)))),
            (Agent::B, Good::G1, to16(kron(&y, &i2))),
            (Agent::B, Good::G3, to16(lincomb(1.0 - q[1], &yy, q[1], &kron(&z, &y)))),
            (Agent::C, Good::G1, to16(kron(&i2, &y))),
            (Agent::C, Good::G2, to16(lincomb(1.0 - q[2], &yy, q[2], &kron(&z, &y)))),
        ];
        Self::build(us, theta)
    }

    /// Coalition branch in which Bob keeps his attack dial q_B live while
    /// Charlie plays plain. Alice's dial q_a_prime mixes her plain accept with
    /// the blocking X strategy; her second unitary is the fixed counter Y⊗X.
    pub fn coalition_bob_attacks(
        q_a_prime: f64,
        q_b: f64,
        theta: f64,
    ) -> Result<Self, CircuitError> {
        check_param("q_A'", q_a_prime)?;
        check_param("q_B", q_b)?;
        check_theta(theta)?;
        let (i2, x, y, z) = (mat_i(), mat_x(), mat_y(), mat_z());
        let yy = kron(&y, &y);
        let us = [
            (Agent::A, Good::G2, to16(lincomb(1.0 - q_a_prime, &kron(&y, &i2), q_a_prime, &kron(&x, &i2)))),
            (Agent::A, Good::G3, to16(kron(&y, &x))),
            (Agent::B, Good::G1, to16(kron(&y, &i2))),
            (Agent::B, Good::G3, to16(lincomb(1.0 - q_b, &yy, q_b, &kron(&z, &y)))),
            (Agent::C, Good::G1, to16(kron(&i2, &y))),
            (Agent::C, Good::G2, to16(yy.clone())),
        ];
        Self::build(us, theta)
    }

    /// Coalition branch in which Charlie attacks while Bob plays plain.
    /// Charlie's dial is a classical coin between his two pure corners: I⊗Y
    /// and Z⊗Y commute, so no unitary amplitude mix of them exists, and only
    /// the incoherent randomization keeps the population block affine in the
    /// dial.
    pub fn coalition_charlie_attacks(
        q_a_prime: f64,
        charlie_attacks: bool,
        theta: f64,
    ) -> Result<Self, CircuitError> {
        check_param("q_A'", q_a_prime)?;
        check_theta(theta)?;
        let (i2, x, y, z) = (mat_i(), mat_x(), mat_y(), mat_z());
        let yy = kron(&y, &y);
        let uc1 = if charlie_attacks { kron(&z, &y) } else { kron(&i2, &y) };
        let us = [
            (Agent::A, Good::G2, to16(lincomb(1.0 - q_a_prime, &kron(&y, &i2), q_a_prime, &kron(&x, &i2)))),
            (Agent::A, Good::G3, to16(kron(&y, &x))),
            (Agent::B, Good::G1, to16(kron(&y, &i2))),
            (Agent::B, Good::G3, to16(yy.clone())),
            (Agent::C, Good::G1, to16(uc1)),
            (Agent::C, Good::G2, to16(yy.clone())),
        ];
        Self::build(us, theta)
    }

    fn build(
        us: [(Agent, Good, [Complex64; 16]); 6],
        theta: f64,
    ) -> Result<Self, CircuitError> {
        let mut slots: [Option<StrategyUnitary>; 6] = Default::default();
        for (agent, good, m) in us {
            slots[slot(agent, good)] = Some(StrategyUnitary::new(good, m)?);
        }
        Ok(Self { unitaries: slots.map(Option::unwrap), theta })
    }

    pub fn unitary(&self, agent: Agent, held: Good) -> &StrategyUnitary {
        &self.unitaries[slot(agent, held)]
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn with_theta(mut self, theta: f64) -> Result<Self, CircuitError> {
        check_theta(theta)?;
        self.theta = theta;
        Ok(self)
    }
}

/// A strategy choice that may be a public randomization over profiles (used
/// by the coalition analysis, where the pair correlates on a coin with bias
/// p). Pure profiles are the common case.
#[derive(Debug, Clone, PartialEq)]
pub enum StrategyEnsemble {
    Pure(StrategyProfile),
    Mixed(Vec<(f64, StrategyProfile)>),
}

impl StrategyEnsemble {
    pub fn pure(profile: StrategyProfile) -> Self {
        StrategyEnsemble::Pure(profile)
    }

    pub fn mixed(parts: Vec<(f64, StrategyProfile)>) -> Result<Self, CircuitError> {
        let total: f64 = parts.iter().map(|(w, _)| *w).sum();
        if parts.iter().any(|(w, _)| *w < -1e-12) || (total - 1.0).abs() > 1e-9 {
            return Err(CircuitError::BadMixtureWeights);
        }
        Ok(StrategyEnsemble::Mixed(parts))
    }

    /// The Bob-Charlie coalition: play the Bob-attack branch with probability
    /// p and the Charlie-attack branch with probability 1-p; within the
    /// latter, q_c_prime is the coin bias of Charlie's pure attack.
    pub fn coalition(
        p: f64,
        q_a_prime: f64,
        q_b: f64,
        q_c_prime: f64,
        theta: f64,
    ) -> Result<Self, CircuitError> {
        check_param("p", p)?;
        check_param("q_C'", q_c_prime)?;
        let one = StrategyProfile::coalition_bob_attacks(q_a_prime, q_b, theta)?;
        let two_plain = StrategyProfile::coalition_charlie_attacks(q_a_prime, false, theta)?;
        let two_attack = StrategyProfile::coalition_charlie_attacks(q_a_prime, true, theta)?;
        let mut parts = alloc::vec![
            (p, one),
            ((1.0 - p) * (1.0 - q_c_prime), two_plain),
            ((1.0 - p) * q_c_prime, two_attack),
        ];
        parts.retain(|(w, _)| *w > 1e-15);
        Self::mixed(parts)
    }

    pub fn parts(&self) -> Vec<(f64, &StrategyProfile)> {
        match self {
            StrategyEnsemble::Pure(p) => alloc::vec![(1.0, p)],
            StrategyEnsemble::Mixed(v) => v.iter().map(|(w, p)| (*w, p)).collect(),
        }
    }
}
