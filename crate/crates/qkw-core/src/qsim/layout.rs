use alloc::string::String;
use alloc::vec::Vec;
use core::ops::Range;

use super::QsimError;

/// Ordered list of named qubit registers packed into a `u32` label.
///
/// Qubit indices run 0..width in declaration order; qubit `q` occupies label
/// bit `width - 1 - q`, so the binary rendering of a label reads left to
/// right like the ket string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisterLayout {
    regs: Vec<(&'static str, u32)>,
    width: u32,
}

impl RegisterLayout {
    pub fn new(regs: &[(&'static str, u32)]) -> Result<Self, QsimError> {
        let mut width = 0u32;
        for (i, &(name, w)) in regs.iter().enumerate() {
            if w == 0 {
                return Err(QsimError::EmptyRegister { name });
            }
            if regs[..i].iter().any(|&(n, _)| n == name) {
                return Err(QsimError::DuplicateRegister { name });
            }
            width += w;
        }
        if width > 32 {
            return Err(QsimError::LayoutTooWide { width });
        }
        Ok(Self { regs: regs.to_vec(), width })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn registers(&self) -> impl Iterator<Item = (&'static str, u32)> + '_ {
        self.regs.iter().copied()
    }

    /// Qubit-index range of a register.
    pub fn range(&self, name: &str) -> Result<Range<u32>, QsimError> {
        let mut start = 0u32;
        for &(n, w) in &self.regs {
            if n == name {
                return Ok(start..start + w);
            }
            start += w;
        }
        Err(QsimError::UnknownRegister { name: name.into() })
    }

    /// Qubit index of `(register, offset)`; offset 0 is the register's
    /// leftmost (most significant) qubit.
    pub fn qubit(&self, name: &str, offset: u32) -> Result<u32, QsimError> {
        let r = self.range(name)?;
        let q = r.start + offset;
        if q >= r.end {
            return Err(QsimError::TargetOutOfRange { qubit: q, width: r.end });
        }
        Ok(q)
    }

    /// Label bit position of a qubit index.
    pub fn bit(&self, qubit: u32) -> u32 {
        self.width - 1 - qubit
    }

    pub fn contains_label(&self, label: u32) -> bool {
        self.width == 32 || label < (1u32 << self.width)
    }

    /// Read a register's value out of a label (leftmost qubit = MSB).
    pub fn register_value(&self, label: u32, name: &str) -> Result<u32, QsimError> {
        let r = self.range(name)?;
        let w = r.end - r.start;
        let shift = self.width - r.end;
        Ok((label >> shift) & ((1u32 << w) - 1))
    }

    /// Write a register's value into a label.
    pub fn with_register_value(
        &self,
        label: u32,
        name: &str,
        value: u32,
    ) -> Result<u32, QsimError> {
        let r = self.range(name)?;
        let w = r.end - r.start;
        let shift = self.width - r.end;
        let mask = ((1u32 << w) - 1) << shift;
        Ok((label & !mask) | ((value << shift) & mask))
    }

    /// Parse a bit-string label like `"100110"` (length must equal width).
    pub fn label_from_str(&self, s: &str) -> Result<u32, QsimError> {
        if s.len() != self.width as usize || s.bytes().any(|b| b != b'0' && b != b'1') {
            return Err(QsimError::LabelOutOfRange { label: 0, width: self.width });
        }
        Ok(s.bytes().fold(0u32, |acc, b| (acc << 1) | (b - b'0') as u32))
    }

    /// Render a label as a bit string of the layout's width.
    pub fn label_to_string(&self, label: u32) -> String {
        let mut s = String::with_capacity(self.width as usize);
        for q in 0..self.width {
            let bit = (label >> self.bit(q)) & 1;
            s.push(if bit == 1 { '1' } else { '0' });
        }
        s
    }
}

/// The three-agent exchange economy register file: goods (2 qubits per
/// agent), the matchmaking register, four strategy ancillas per agent and one
/// consumption flag per agent. 24 qubits total.
pub fn economy_layout() -> RegisterLayout {
    RegisterLayout::new(&[
        ("goods.A", 2),
        ("goods.B", 2),
        ("goods.C", 2),
        ("match.W", 3),
        ("anc.A", 4),
        ("anc.B", 4),
        ("anc.C", 4),
        ("flag.A", 1),
        ("flag.B", 1),
        ("flag.C", 1),
    ])
    .expect("static layout is valid")
}
