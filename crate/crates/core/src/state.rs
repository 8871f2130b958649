//! Statevectors over named qubit registers.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ONE, ZERO};

/// Tolerance on the L2 norm of a [`StateVector`].
pub const NORM_TOL: f64 = 1e-10;

/// A named contiguous range of qubits. Qubit `start` holds the least
/// significant bit of the register value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Register {
    pub name: String,
    pub start: usize,
    pub len: usize,
}

impl Register {
    pub fn new(name: impl Into<String>, start: usize, len: usize) -> Self {
        Self {
            name: name.into(),
            start,
            len,
        }
    }

    pub fn qubits(&self) -> std::ops::Range<usize> {
        self.start..self.start + self.len
    }

    pub fn qubit(&self, bit: usize) -> usize {
        assert!(bit < self.len, "bit {bit} outside register {}", self.name);
        self.start + bit
    }

    /// Value held by this register in basis state `index`.
    pub fn value(&self, index: usize) -> usize {
        (index >> self.start) & ((1usize << self.len) - 1)
    }

    /// Largest value the register can hold.
    pub fn max_value(&self) -> usize {
        (1usize << self.len) - 1
    }

    pub fn mask(&self) -> usize {
        ((1usize << self.len) - 1) << self.start
    }
}

/// Ordered registers covering `0..width`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RegisterLayout {
    pub registers: Vec<Register>,
}

impl RegisterLayout {
    /// One register per entry of `sizes`, packed from qubit 0 upward.
    pub fn from_sizes<S: Into<String>>(sizes: impl IntoIterator<Item = (S, usize)>) -> Self {
        let mut start = 0;
        let registers = sizes
            .into_iter()
            .map(|(name, len)| {
                let r = Register::new(name, start, len);
                start += len;
                r
            })
            .collect();
        Self { registers }
    }

    /// A single register named `q`.
    pub fn flat(width: usize) -> Self {
        Self::from_sizes([("q", width)])
    }

    pub fn width(&self) -> usize {
        self.registers.iter().map(|r| r.start + r.len).max().unwrap_or(0)
    }

    pub fn get(&self, name: &str) -> Option<&Register> {
        self.registers.iter().find(|r| r.name == name)
    }
}

/// Normalized amplitudes over `2^width` basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
    layout: RegisterLayout,
}

impl StateVector {
    pub fn new(amplitudes: Vec<Complex64>, layout: RegisterLayout) -> Result<Self> {
        let expected = 1usize << layout.width();
        if amplitudes.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: amplitudes.len(),
            });
        }
        let state = Self { amplitudes, layout };
        let norm = state.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidEnsemble(format!("state norm {norm} is not 1")));
        }
        Ok(state)
    }

    /// Amplitudes that are not tied to qubits (e.g. Dicke or tridiagonal
    /// oracle spaces). The layout is empty.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidEnsemble(format!("state norm {norm} is not 1")));
        }
        Ok(Self {
            amplitudes,
            layout: RegisterLayout::default(),
        })
    }

    pub fn basis(index: usize, layout: RegisterLayout) -> Self {
        let dim = 1usize << layout.width();
        assert!(index < dim, "basis index {index} out of range");
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[index] = ONE;
        Self { amplitudes, layout }
    }

    /// Basis vector of an arbitrary-dimension space with empty layout.
    pub fn basis_of_dim(index: usize, dim: usize) -> Self {
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[index] = ONE;
        Self {
            amplitudes,
            layout: RegisterLayout::default(),
        }
    }

    pub fn zero(layout: RegisterLayout) -> Self {
        Self::basis(0, layout)
    }

    /// Replaces the amplitudes, keeping the layout; used by evolvers that
    /// preserve the norm by construction.
    pub(crate) fn with_amplitudes(&self, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), self.amplitudes.len());
        Self {
            amplitudes,
            layout: self.layout.clone(),
        }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// Number of qubits; for a state without layout, `log₂` of the dimension.
    pub fn width(&self) -> usize {
        if self.layout.registers.is_empty() {
            self.amplitudes.len().trailing_zeros() as usize
        } else {
            self.layout.width()
        }
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Probability of finding `qubit` in `|1⟩`.
    pub fn qubit_one_probability(&self, qubit: usize) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| (i >> qubit) & 1 == 1)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Distribution of the value held by `register`.
    pub fn register_distribution(&self, register: &Register) -> Vec<f64> {
        let mut p = vec![0.0; 1 << register.len];
        for (i, a) in self.amplitudes.iter().enumerate() {
            p[register.value(i)] += a.norm_sqr();
        }
        p
    }
}
