use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use super::operator::c;
use super::{QsimError, RegisterLayout, SparseState};

/// A (possibly non-Hermitian) operator block over an explicit list of basis
/// labels: `sum_ij data[i*n+j] |labels[i]><labels[j]|`.
#[derive(Debug, Clone)]
pub struct DensityBlock {
    layout: RegisterLayout,
    labels: Vec<u32>,
    data: Vec<Complex64>,
}

impl DensityBlock {
    /// The dyad `|left><right|`.
    pub fn outer_evolve(left: &SparseState, right: &SparseState) -> Result<Self, QsimError> {
        if left.layout() != right.layout() {
            return Err(QsimError::LayoutMismatch);
        }
        let mut labels: Vec<u32> = left.iter().map(|(l, _)| l).collect();
        for (l, _) in right.iter() {
            if !labels.contains(&l) {
                labels.push(l);
            }
        }
        labels.sort_unstable();
        let n = labels.len();
        let mut data = vec![c(0.0, 0.0); n * n];
        for (ll, la) in left.iter() {
            let i = labels.binary_search(&ll).unwrap();
            for (rl, ra) in right.iter() {
                let j = labels.binary_search(&rl).unwrap();
                data[i * n + j] = la * ra.conj();
            }
        }
        Ok(Self { layout: left.layout().clone(), labels, data })
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn entry(&self, row_label: u32, col_label: u32) -> Complex64 {
        match (
            self.labels.binary_search(&row_label),
            self.labels.binary_search(&col_label),
        ) {
            (Ok(i), Ok(j)) => self.data[i * self.labels.len() + j],
            _ => c(0.0, 0.0),
        }
    }

    pub fn trace(&self) -> Complex64 {
        let n = self.labels.len();
        (0..n).map(|i| self.data[i * n + i]).sum()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.labels.len();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let d = (self.data[i * n + j] - self.data[j * n + i].conj()).norm();
                if d > worst {
                    worst = d;
                }
            }
        }
        worst
    }

    /// Tr(rho^2) for trace-1 blocks.
    pub fn purity(&self) -> f64 {
        let n = self.labels.len();
        let mut acc = c(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                acc += self.data[i * n + j] * self.data[j * n + i];
            }
        }
        acc.re
    }

    /// Reduce onto the registers named in `keep` (in layout order); the trace
    /// is preserved.
    pub fn partial_trace(&self, keep: &[&str]) -> Result<Self, QsimError> {
        if keep.is_empty() {
            return Err(QsimError::EmptyKeepSet);
        }
        let mut kept_regs: Vec<(&'static str, u32)> = Vec::new();
        let mut kept_mask = 0u32;
        for (name, width) in self.layout.registers() {
            if keep.iter().any(|&k| k == name) {
                kept_regs.push((name, width));
                let r = self.layout.range(name)?;
                for q in r {
                    kept_mask |= 1 << self.layout.bit(q);
                }
            }
        }
        if kept_regs.len() != keep.len() {
            // at least one requested name is unknown
            for &k in keep {
                if self.layout.range(k).is_err() {
                    return Err(QsimError::UnknownRegister { name: k.into() });
                }
            }
        }
        let reduced = RegisterLayout::new(&kept_regs)?;
        // compress a full label's kept bits into the reduced layout's label
        let compress = |label: u32| -> u32 {
            let mut out = 0u32;
            for (name, _) in reduced.registers() {
                let v = self.layout.register_value(label, name).unwrap();
                out = reduced.with_register_value(out, name, v).unwrap();
            }
            out
        };
        let n = self.labels.len();
        let mut acc: BTreeMap<(u32, u32), Complex64> = BTreeMap::new();
        for i in 0..n {
            let li = self.labels[i];
            for j in 0..n {
                let v = self.data[i * n + j];
                if v.norm_sqr() == 0.0 {
                    continue;
                }
                let lj = self.labels[j];
                if (li & !kept_mask) != (lj & !kept_mask) {
                    continue;
                }
                *acc.entry((compress(li), compress(lj))).or_insert(c(0.0, 0.0)) += v;
            }
        }
        let mut labels: Vec<u32> = Vec::new();
        for &(a, b) in acc.keys() {
            if !labels.contains(&a) {
                labels.push(a);
            }
            if !labels.contains(&b) {
                labels.push(b);
            }
        }
        labels.sort_unstable();
        let m = labels.len().max(1);
        let mut data = vec![c(0.0, 0.0); m * m];
        let labels = if labels.is_empty() { vec![0] } else { labels };
        for ((a, b), v) in acc {
            let i = labels.binary_search(&a).unwrap();
            let j = labels.binary_search(&b).unwrap();
            data[i * labels.len() + j] = v;
        }
        Ok(Self { layout: reduced, labels, data })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::PRUNE_EPS;
    use num_traits::Float;

    fn two_qubits() -> RegisterLayout {
        RegisterLayout::new(&[("a", 1), ("b", 1)]).unwrap()
    }

    #[test]
    fn equal_states_give_trace_one_hermitian_block() {
        let l = two_qubits();
        let h = Float::sqrt(0.5f64);
        let s =
            SparseState::from_amplitudes(l, [(0b00, c(h, 0.0)), (0b11, c(0.0, h))]).unwrap();
        let d = DensityBlock::outer_evolve(&s, &s).unwrap();
        assert!((d.trace() - c(1.0, 0.0)).norm() < 1e-12);
        assert!(d.hermiticity_defect() < 1e-12);
    }

    #[test]
    fn orthogonal_states_give_trace_zero() {
        let l = two_qubits();
        let s0 = SparseState::basis(l.clone(), 0b01).unwrap();
        let s1 = SparseState::basis(l, 0b10).unwrap();
        let d = DensityBlock::outer_evolve(&s0, &s1).unwrap();
        assert_eq!(d.trace(), c(0.0, 0.0));
    }

    #[test]
    fn keep_everything_is_identity() {
        let l = two_qubits();
        let s = SparseState::basis(l, 0b10).unwrap();
        let d = DensityBlock::outer_evolve(&s, &s).unwrap();
        let r = d.partial_trace(&["a", "b"]).unwrap();
        assert_eq!(r.entry(0b10, 0b10), c(1.0, 0.0));
        assert!((r.trace() - d.trace()).norm() < 1e-12);
    }

    #[test]
    fn product_state_reduces_to_first_factor() {
        let l = two_qubits();
        let s = SparseState::basis(l, 0b10).unwrap(); // |1>_a |0>_b
        let d = DensityBlock::outer_evolve(&s, &s).unwrap();
        let r = d.partial_trace(&["a"]).unwrap();
        assert_eq!(r.layout().width(), 1);
        assert!((r.entry(1, 1) - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn bell_state_reduces_to_maximally_mixed() {
        let l = two_qubits();
        let h = Float::sqrt(0.5f64);
        let s =
            SparseState::from_amplitudes(l, [(0b00, c(h, 0.0)), (0b11, c(h, 0.0))]).unwrap();
        let d = DensityBlock::outer_evolve(&s, &s).unwrap();
        let r = d.partial_trace(&["b"]).unwrap();
        // hand-computed 4x4 reduction: diag(1/2, 1/2), purity 1/2
        assert!((r.entry(0, 0) - c(0.5, 0.0)).norm() < 1e-12);
        assert!((r.entry(1, 1) - c(0.5, 0.0)).norm() < 1e-12);
        assert!(r.entry(0, 1).norm() < PRUNE_EPS);
        assert!((r.purity() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn empty_keep_rejected() {
        let l = two_qubits();
        let s = SparseState::basis(l, 0).unwrap();
        let d = DensityBlock::outer_evolve(&s, &s).unwrap();
        assert!(matches!(d.partial_trace(&[]), Err(QsimError::EmptyKeepSet)));
    }
}
