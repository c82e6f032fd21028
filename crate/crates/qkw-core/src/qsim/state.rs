use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use num_complex::Complex64;
use num_traits::Float;

use super::operator::c;
use super::{LocalOperator, QsimError, RegisterLayout, PRUNE_EPS};

/// Sparse state vector: basis label -> complex amplitude.
///
/// Zero amplitudes (squared magnitude below [`PRUNE_EPS`]) are never stored.
/// The `BTreeMap` keeps iteration deterministic.
#[derive(Debug, Clone)]
pub struct SparseState {
    layout: RegisterLayout,
    amps: BTreeMap<u32, Complex64>,
}

impl SparseState {
    pub fn basis(layout: RegisterLayout, label: u32) -> Result<Self, QsimError> {
        if !layout.contains_label(label) {
            return Err(QsimError::LabelOutOfRange { label, width: layout.width() });
        }
        let mut amps = BTreeMap::new();
        amps.insert(label, c(1.0, 0.0));
        Ok(Self { layout, amps })
    }

    pub fn from_amplitudes(
        layout: RegisterLayout,
        entries: impl IntoIterator<Item = (u32, Complex64)>,
    ) -> Result<Self, QsimError> {
        let mut amps = BTreeMap::new();
        for (label, a) in entries {
            if !layout.contains_label(label) {
                return Err(QsimError::LabelOutOfRange { label, width: layout.width() });
            }
            if a.norm_sqr() > PRUNE_EPS * PRUNE_EPS {
                let slot = amps.entry(label).or_insert(c(0.0, 0.0));
                *slot += a;
            }
        }
        amps.retain(|_, a| a.norm_sqr() > PRUNE_EPS * PRUNE_EPS);
        Ok(Self { layout, amps })
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn amplitude(&self, label: u32) -> Complex64 {
        self.amps.get(&label).copied().unwrap_or(c(0.0, 0.0))
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, Complex64)> + '_ {
        self.amps.iter().map(|(&l, &a)| (l, a))
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        Float::sqrt(self.norm_sqr())
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        let amps = self.amps.iter().map(|(&l, &a)| (l, a * factor)).collect();
        Self { layout: self.layout.clone(), amps: prune(amps) }
    }

    pub fn add(&self, other: &Self) -> Result<Self, QsimError> {
        if self.layout != other.layout {
            return Err(QsimError::LayoutMismatch);
        }
        let mut amps = self.amps.clone();
        for (&l, &a) in &other.amps {
            *amps.entry(l).or_insert(c(0.0, 0.0)) += a;
        }
        Ok(Self { layout: self.layout.clone(), amps: prune(amps) })
    }

    /// Apply `op` on its targets (identity elsewhere); the input is unchanged.
    pub fn apply(&self, op: &LocalOperator) -> Result<Self, QsimError> {
        let width = self.layout.width();
        for &q in op.targets().iter().chain(op.controls().iter().map(|(q, _)| q)) {
            if q >= width {
                return Err(QsimError::TargetOutOfRange { qubit: q, width });
            }
        }
        let k = op.targets().len();
        let dim = op.dim();
        let tbits: Vec<u32> = op.targets().iter().map(|&q| self.layout.bit(q)).collect();
        let cbits: Vec<(u32, bool)> =
            op.controls().iter().map(|&(q, v)| (self.layout.bit(q), v)).collect();
        let m = op.matrix();

        let mut out: BTreeMap<u32, Complex64> = BTreeMap::new();
        for (&label, &amp) in &self.amps {
            if !cbits.iter().all(|&(b, v)| (((label >> b) & 1) == 1) == v) {
                *out.entry(label).or_insert(c(0.0, 0.0)) += amp;
                continue;
            }
            let mut col = 0usize;
            for (i, &b) in tbits.iter().enumerate() {
                col |= (((label >> b) & 1) as usize) << (k - 1 - i);
            }
            for row in 0..dim {
                let a = m[row * dim + col];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                let mut nl = label;
                for (i, &b) in tbits.iter().enumerate() {
                    let bit = (row >> (k - 1 - i)) & 1;
                    nl = if bit == 1 { nl | (1 << b) } else { nl & !(1 << b) };
                }
                *out.entry(nl).or_insert(c(0.0, 0.0)) += a * amp;
            }
        }
        Ok(Self { layout: self.layout.clone(), amps: prune(out) })
    }

    /// Relabel every basis state through a bijective label map (a
    /// computational-basis permutation such as a controlled register swap).
    pub fn permute_labels(&self, f: impl Fn(u32) -> u32) -> Self {
        let mut out = BTreeMap::new();
        for (&l, &a) in &self.amps {
            let nl = f(l);
            debug_assert!(
                !out.contains_key(&nl),
                "label permutation must be injective on the support"
            );
            out.insert(nl, a);
        }
        Self { layout: self.layout.clone(), amps: out }
    }

    /// Map every basis label to (label, phase). Used for diagonal gates and
    /// phased permutations such as Pauli strings.
    pub fn map_phased(&self, f: impl Fn(u32) -> (u32, Complex64)) -> Self {
        let mut out = BTreeMap::new();
        for (&l, &a) in &self.amps {
            let (nl, ph) = f(l);
            *out.entry(nl).or_insert(c(0.0, 0.0)) += a * ph;
        }
        Self { layout: self.layout.clone(), amps: prune(out) }
    }

    /// Superpose `cos(theta)*|b> + i*sin(theta)*(-1)^wt(b&mask)*|b ^ mask>`
    /// over the support: exp(i*theta*Y^⊗k) on the qubits selected by `mask`
    /// (label-bit mask). Y^⊗k maps |b> to (-1)^wt(b)|~b> on those bits.
    pub fn apply_y_string_exponential(&self, theta: f64, mask: u32) -> Self {
        let (s, co) = Float::sin_cos(theta);
        if s == 0.0 {
            return self.clone();
        }
        let mut out: BTreeMap<u32, Complex64> = BTreeMap::new();
        for (&l, &a) in &self.amps {
            if co != 0.0 {
                *out.entry(l).or_insert(c(0.0, 0.0)) += a * co;
            }
            let wt = (l & mask).count_ones();
            let sign = if wt % 2 == 0 { 1.0 } else { -1.0 };
            *out.entry(l ^ mask).or_insert(c(0.0, 0.0)) += a * c(0.0, sign * s);
        }
        Self { layout: self.layout.clone(), amps: prune(out) }
    }
}

fn prune(mut amps: BTreeMap<u32, Complex64>) -> BTreeMap<u32, Complex64> {
    amps.retain(|_, a| a.norm_sqr() > PRUNE_EPS * PRUNE_EPS);
    amps
}
