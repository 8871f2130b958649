//! Pauli strings and the ancilla-free two-level rotation built from them.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use num_complex::Complex64;

use super::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::linalg::{c, kron, pauli_matrix, CMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    fn index(self) -> usize {
        match self {
            PauliLetter::I => 0,
            PauliLetter::X => 1,
            PauliLetter::Y => 2,
            PauliLetter::Z => 3,
        }
    }
}

/// `coefficient · ⊗_q letters[q]`, with `letters[q]` acting on qubit `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliString {
    pub letters: Vec<PauliLetter>,
    pub coefficient: Complex64,
}

impl PauliString {
    pub fn new(letters: Vec<PauliLetter>, coefficient: Complex64) -> Self {
        Self { letters, coefficient }
    }

    /// Parses a label written with qubit 0 rightmost, e.g. `"XIZ"`.
    pub fn from_label(label: &str, coefficient: f64) -> Result<Self> {
        let letters = label
            .chars()
            .rev()
            .map(|ch| match ch {
                'I' => Ok(PauliLetter::I),
                'X' => Ok(PauliLetter::X),
                'Y' => Ok(PauliLetter::Y),
                'Z' => Ok(PauliLetter::Z),
                _ => Err(Error::InvalidGate(format!("bad Pauli letter {ch:?}"))),
            })
            .collect::<Result<_>>()?;
        Ok(Self::new(letters, c(coefficient)))
    }

    pub fn width(&self) -> usize {
        self.letters.len()
    }

    pub fn label(&self) -> String {
        self.letters
            .iter()
            .rev()
            .map(|l| match l {
                PauliLetter::I => 'I',
                PauliLetter::X => 'X',
                PauliLetter::Y => 'Y',
                PauliLetter::Z => 'Z',
            })
            .collect()
    }

    pub fn active_qubits(&self) -> Vec<usize> {
        (0..self.width())
            .filter(|&q| self.letters[q] != PauliLetter::I)
            .collect()
    }

    /// Dense `⊗ letters` without the coefficient.
    pub fn operator_matrix(&self) -> CMatrix {
        self.letters
            .iter()
            .fold(CMatrix::identity(1, 1), |acc, l| kron(&pauli_matrix(l.index()), &acc))
    }

    /// Same string padded with identities up to `width` qubits.
    pub fn padded(&self, width: usize) -> PauliString {
        let mut letters = self.letters.clone();
        letters.resize(width.max(letters.len()), PauliLetter::I);
        Self::new(letters, self.coefficient)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·{}", self.coefficient, self.label())
    }
}

/// Pauli expansion of `|b⟩⟨a| + |a⟩⟨b|` on `width` qubits.
///
/// Each qubit contributes `|0⟩⟨0| = (I+Z)/2`, `|1⟩⟨1| = (I−Z)/2`,
/// `|0⟩⟨1| = (X+iY)/2` or `|1⟩⟨0| = (X−iY)/2`; adding the conjugate keeps
/// twice the real part of each product, so only strings with an even number
/// of `Y` letters survive. They all commute with each other.
pub fn transition_decomposition(width: usize, a: usize, b: usize) -> Result<Vec<PauliString>> {
    let dim = 1usize << width;
    if a >= dim || b >= dim || a == b {
        return Err(Error::TransitionOutOfRange(format!("|{a}⟩ ↔ |{b}⟩ on {width} qubits")));
    }
    let mut terms: Vec<(Vec<PauliLetter>, Complex64)> = vec![(Vec::new(), c(1.0))];
    for q in 0..width {
        let (ba, bb) = ((a >> q) & 1, (b >> q) & 1);
        let options: [(PauliLetter, Complex64); 2] = match (bb, ba) {
            (0, 0) => [(PauliLetter::I, c(0.5)), (PauliLetter::Z, c(0.5))],
            (1, 1) => [(PauliLetter::I, c(0.5)), (PauliLetter::Z, c(-0.5))],
            (0, _) => [(PauliLetter::X, c(0.5)), (PauliLetter::Y, Complex64::new(0.0, 0.5))],
            _ => [(PauliLetter::X, c(0.5)), (PauliLetter::Y, Complex64::new(0.0, -0.5))],
        };
        terms = terms
            .into_iter()
            .flat_map(|(letters, coef)| {
                options.iter().map(move |&(l, f)| {
                    let mut v = letters.clone();
                    v.push(l);
                    (v, coef * f)
                })
            })
            .collect();
    }
    Ok(terms
        .into_iter()
        .filter_map(|(letters, coef)| {
            let re = 2.0 * coef.re;
            (re.abs() > 1e-15).then(|| PauliString::new(letters, c(re)))
        })
        .collect())
}

/// `exp(−i c_s (θ/2) P_s)`: basis change, CNOT parity chain, `RZ(c_s θ)` on
/// the last active qubit, then the mirror image.
pub fn pauli_rotation_circuit(string: &PauliString, angle: f64) -> Result<Circuit> {
    let active = string.active_qubits();
    let Some(&last) = active.last() else {
        return Err(Error::IdentityPauliString);
    };
    let mut circ = Circuit::with_width(string.width());
    for &q in &active {
        match string.letters[q] {
            PauliLetter::X => {
                circ.push(Gate::h(q))?;
            }
            PauliLetter::Y => {
                circ.push(Gate::sdg(q))?;
                circ.push(Gate::h(q))?;
            }
            _ => {}
        }
    }
    for w in active.windows(2) {
        circ.push(Gate::cx(w[0], w[1]))?;
    }
    circ.push(Gate::rz(last, string.coefficient.re * angle))?;
    for w in active.windows(2).rev() {
        circ.push(Gate::cx(w[0], w[1]))?;
    }
    for &q in &active {
        match string.letters[q] {
            PauliLetter::X => {
                circ.push(Gate::h(q))?;
            }
            PauliLetter::Y => {
                circ.push(Gate::h(q))?;
                circ.push(Gate::phase(q, FRAC_PI_2))?;
            }
            _ => {}
        }
    }
    Ok(circ)
}

/// `exp(−i(θ/2)(|a⟩⟨b| + |b⟩⟨a|))` on the given qubits (local bit `k` is
/// `qubits[k]`), as a product of commuting Pauli rotations. The circuit has
/// width `width`.
pub fn two_level_rotation_pauli(width: usize, qubits: &[usize], a: usize, b: usize, theta: f64) -> Result<Circuit> {
    let mut circ = Circuit::with_width(width);
    for s in transition_decomposition(qubits.len(), a, b)? {
        if s.active_qubits().is_empty() {
            // Identity component: global phase only.
            continue;
        }
        circ.append_on(&pauli_rotation_circuit(&s, theta)?, qubits)?;
    }
    Ok(circ)
}
