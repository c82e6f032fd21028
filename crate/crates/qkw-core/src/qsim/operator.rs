use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use super::{QsimError, UNITARY_TOL};

pub const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn mat_i() -> [Complex64; 4] {
    [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]
}

pub fn mat_x() -> [Complex64; 4] {
    [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]
}

/// Convention fixed by tests: Y|0> = i|1>, Y|1> = -i|0>.
pub fn mat_y() -> [Complex64; 4] {
    [c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]
}

pub fn mat_z() -> [Complex64; 4] {
    [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]
}

/// Kronecker product of two square row-major matrices.
pub fn kron(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let na = isqrt(a.len());
    let nb = isqrt(b.len());
    let n = na * nb;
    let mut out = vec![c(0.0, 0.0); n * n];
    for ra in 0..na {
        for ca in 0..na {
            for rb in 0..nb {
                for cb in 0..nb {
                    out[(ra * nb + rb) * n + (ca * nb + cb)] = a[ra * na + ca] * b[rb * nb + cb];
                }
            }
        }
    }
    out
}

fn isqrt(n: usize) -> usize {
    let mut r = 0usize;
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// A dense operator on an ordered list of target qubits, optionally gated on
/// control qubits reading given values. Identity on everything else.
///
/// The matrix is row-major over the targets, first target = most significant
/// bit of the row/column index.
#[derive(Debug, Clone)]
pub struct LocalOperator {
    targets: Vec<u32>,
    controls: Vec<(u32, bool)>,
    matrix: Vec<Complex64>,
}

impl LocalOperator {
    pub fn new(targets: &[u32], matrix: &[Complex64]) -> Result<Self, QsimError> {
        let dim = 1usize << targets.len();
        if matrix.len() != dim * dim {
            return Err(QsimError::DimensionMismatch {
                targets: targets.len(),
                elements: matrix.len(),
            });
        }
        for (i, &t) in targets.iter().enumerate() {
            if targets[..i].contains(&t) {
                return Err(QsimError::OverlappingControls { qubit: t });
            }
        }
        Ok(Self { targets: targets.to_vec(), controls: Vec::new(), matrix: matrix.to_vec() })
    }

    /// Gate this operator on `controls` reading the paired values; acts as
    /// the identity whenever any control mismatches.
    pub fn controlled(mut self, controls: &[(u32, bool)]) -> Result<Self, QsimError> {
        for &(q, _) in controls {
            if self.targets.contains(&q) || self.controls.iter().any(|&(p, _)| p == q) {
                return Err(QsimError::OverlappingControls { qubit: q });
            }
        }
        self.controls.extend_from_slice(controls);
        Ok(self)
    }

    pub fn targets(&self) -> &[u32] {
        &self.targets
    }

    pub fn controls(&self) -> &[(u32, bool)] {
        &self.controls
    }

    pub fn matrix(&self) -> &[Complex64] {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        1usize << self.targets.len()
    }

    /// Max-norm of U†U - I over the target block.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for r in 0..n {
            for col in 0..n {
                let mut acc = c(0.0, 0.0);
                for k in 0..n {
                    acc += self.matrix[k * n + r].conj() * self.matrix[k * n + col];
                }
                let expect = if r == col { 1.0 } else { 0.0 };
                let d = (acc - c(expect, 0.0)).norm();
                if d > worst {
                    worst = d;
                }
            }
        }
        worst
    }

    pub fn is_unitary(&self) -> bool {
        self.unitarity_defect() < UNITARY_TOL
    }

    /// Dense matrix of the controlled operator over the given qubit set
    /// (targets and controls must be contained in `qubits`). Used by tests to
    /// compare projector-sum strategies against compositions of controlled
    /// gates.
    pub fn dense_on(&self, qubits: &[u32]) -> Result<Vec<Complex64>, QsimError> {
        let n = qubits.len();
        let dim = 1usize << n;
        let pos = |q: u32| -> Result<usize, QsimError> {
            qubits
                .iter()
                .position(|&p| p == q)
                .ok_or(QsimError::TargetOutOfRange { qubit: q, width: n as u32 })
        };
        // bit of qubit index i (in `qubits` order) inside a dense index
        let bit_of = |i: usize| n - 1 - i;
        let mut out = vec![c(0.0, 0.0); dim * dim];
        let tpos: Vec<usize> = self.targets.iter().map(|&q| pos(q)).collect::<Result<_, _>>()?;
        let cpos: Vec<(usize, bool)> = self
            .controls
            .iter()
            .map(|&(q, v)| pos(q).map(|p| (p, v)))
            .collect::<Result<_, _>>()?;
        let td = self.dim();
        for colidx in 0..dim {
            let active = cpos
                .iter()
                .all(|&(p, v)| (((colidx >> bit_of(p)) & 1) == 1) == v);
            if !active {
                out[colidx * dim + colidx] = c(1.0, 0.0);
                continue;
            }
            let mut tcol = 0usize;
            for (k, &p) in tpos.iter().enumerate() {
                tcol |= ((colidx >> bit_of(p)) & 1) << (tpos.len() - 1 - k);
            }
            for trow in 0..td {
                let a = self.matrix[trow * td + tcol];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                let mut rowidx = colidx;
                for (k, &p) in tpos.iter().enumerate() {
                    let b = (trow >> (tpos.len() - 1 - k)) & 1;
                    let mask = 1usize << bit_of(p);
                    rowidx = if b == 1 { rowidx | mask } else { rowidx & !mask };
                }
                out[rowidx * dim + colidx] += a;
            }
        }
        Ok(out)
    }
}
