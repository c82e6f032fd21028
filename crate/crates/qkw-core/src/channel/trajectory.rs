use alloc::vec::Vec;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::circuit::{round_branches, Branch, Good, Meeting, StrategyEnsemble};

use super::{ChannelError, CommodityBasis};

/// One sampled round of the exchange process.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrajectoryStep {
    pub round: u32,
    /// Goods held after the round.
    pub goods: [Good; 3],
    pub meeting: Meeting,
    /// Consumption flags, agent A in bit 2 down to C in bit 0.
    pub flags: u8,
}

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    // standard 53-bit mantissa conversion
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn sample_index(rng: &mut ChaCha8Rng, probs: &[f64]) -> usize {
    let mut u = uniform(rng) * probs.iter().sum::<f64>();
    for (i, &p) in probs.iter().enumerate() {
        u -= p;
        if u <= 0.0 {
            return i;
        }
    }
    probs.len() - 1
}

/// Sample `rounds` rounds of the process with a fixed seed. Each round draws
/// a profile from the ensemble (relevant for coalition randomization), then a
/// branch with its squared-amplitude probability; the goods collapse to that
/// branch's triple.
///
/// The generator state is explicit; identical (seed, config) inputs yield
/// bit-identical trajectories.
pub fn sample_trajectory(
    ensemble: &StrategyEnsemble,
    initial: &[f64; 8],
    rounds: u32,
    seed: u64,
) -> Result<Vec<TrajectoryStep>, ChannelError> {
    if initial.iter().any(|&p| p < -1e-12)
        || (initial.iter().sum::<f64>() - 1.0).abs() > 1e-9
    {
        return Err(ChannelError::NotADistribution { total: initial.iter().sum() });
    }
    let parts = ensemble.parts();
    let weights: Vec<f64> = parts.iter().map(|(w, _)| *w).collect();
    // branch tables per (profile, source basis state), built lazily
    let mut tables: Vec<[Option<Vec<Branch>>; 8]> = parts.iter().map(|_| Default::default()).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = sample_index(&mut rng, initial);
    let mut out = Vec::with_capacity(rounds as usize);
    for round in 0..rounds {
        let which = if parts.len() == 1 { 0 } else { sample_index(&mut rng, &weights) };
        if tables[which][state].is_none() {
            let branches = round_branches(CommodityBasis::triple(state), parts[which].1)?;
            tables[which][state] = Some(branches);
        }
        let branches = tables[which][state].as_ref().unwrap();
        let probs: Vec<f64> = branches.iter().map(Branch::probability).collect();
        let b = &branches[sample_index(&mut rng, &probs)];
        out.push(TrajectoryStep { round, goods: b.goods, meeting: b.meeting, flags: b.flags });
        state = CommodityBasis::index_of(b.goods);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::StrategyProfile;

    #[test]
    fn fixed_seed_is_bit_identical() {
        let p = StrategyProfile::classical([0.5, 0.5, 0.5], 0.0).unwrap();
        let e = StrategyEnsemble::pure(p);
        let mut init = [0.0; 8];
        init[2] = 1.0;
        let a = sample_trajectory(&e, &init, 200, 7).unwrap();
        let b = sample_trajectory(&e, &init, 200, 7).unwrap();
        assert_eq!(a, b);
        let c = sample_trajectory(&e, &init, 200, 8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn deterministic_goods_sequence_when_state_is_stuck() {
        // at s = (0,1,0) the 312 state maps to itself with probability 1
        let p = StrategyProfile::classical([0.0, 1.0, 0.0], 0.0).unwrap();
        let e = StrategyEnsemble::pure(p);
        let mut init = [0.0; 8];
        init[5] = 1.0; // |312>
        let t = sample_trajectory(&e, &init, 300, 123).unwrap();
        for step in &t {
            assert_eq!(CommodityBasis::index_of(step.goods), 5);
            assert_eq!(step.flags, 0);
        }
    }

    #[test]
    fn rejects_bad_initial_distribution() {
        let p = StrategyProfile::classical([1.0, 1.0, 1.0], 0.0).unwrap();
        let e = StrategyEnsemble::pure(p);
        let init = [0.5; 8];
        assert!(sample_trajectory(&e, &init, 10, 1).is_err());
    }
}
