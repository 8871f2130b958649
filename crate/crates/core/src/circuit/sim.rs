//! Statevector execution, dense unitaries and shot sampling.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix, DenseUnitary, I, ONE, ZERO};
use crate::state::StateVector;

/// Largest width for which [`circuit_unitary`] builds a dense matrix.
pub const MAX_UNITARY_WIDTH: usize = 12;

/// The 2×2 matrix applied to the target of a (possibly controlled)
/// single-target gate. `Rzz` has no such form and returns `None`.
fn target_matrix(kind: GateKind) -> Option<[[Complex64; 2]; 2]> {
    let half = |a: f64| (a / 2.0).cos();
    Some(match kind {
        GateKind::X | GateKind::Cx | GateKind::Mcx => [[ZERO, ONE], [ONE, ZERO]],
        GateKind::H => {
            let s = c(std::f64::consts::FRAC_1_SQRT_2);
            [[s, s], [s, -s]]
        }
        GateKind::Sdg => [[ONE, ZERO], [ZERO, -I]],
        GateKind::Rx(a) | GateKind::Mcrx(a) => {
            let s = Complex64::new(0.0, -(a / 2.0).sin());
            [[c(half(a)), s], [s, c(half(a))]]
        }
        GateKind::Rz(a) => [
            [Complex64::from_polar(1.0, -a / 2.0), ZERO],
            [ZERO, Complex64::from_polar(1.0, a / 2.0)],
        ],
        GateKind::Phase(a) | GateKind::CPhase(a) => [[ONE, ZERO], [ZERO, Complex64::from_polar(1.0, a)]],
        GateKind::Cz => [[ONE, ZERO], [ZERO, -ONE]],
        GateKind::Rzz(_) => return None,
    })
}

/// Applies `gate` to raw amplitudes of a `log2(len)`-qubit register.
pub fn apply_gate_in_place(amps: &mut [Complex64], gate: &Gate) {
    if let GateKind::Rzz(theta) = gate.kind {
        let (a, b) = (gate.targets[0], gate.targets[1]);
        let even = Complex64::from_polar(1.0, -theta / 2.0);
        let odd = even.conj();
        for (i, amp) in amps.iter_mut().enumerate() {
            *amp *= if ((i >> a) ^ (i >> b)) & 1 == 0 { even } else { odd };
        }
        return;
    }
    let m = target_matrix(gate.kind).expect("single-target gate");
    let cmask: usize = gate.controls.iter().map(|&q| 1usize << q).sum();
    let tbit = 1usize << gate.targets[0];
    let dim = amps.len();
    let mut base = 0;
    while base < dim {
        for i in base..base + tbit {
            if i & cmask != cmask {
                continue;
            }
            let j = i | tbit;
            let (x, y) = (amps[i], amps[j]);
            amps[i] = m[0][0] * x + m[0][1] * y;
            amps[j] = m[1][0] * x + m[1][1] * y;
        }
        base += 2 * tbit;
    }
}

pub fn apply_gate(state: &StateVector, gate: &Gate) -> Result<StateVector> {
    gate.validate(state.width())?;
    let mut out = state.clone();
    apply_gate_in_place(out.amplitudes_mut(), gate);
    Ok(out)
}

pub fn run_statevector(circuit: &Circuit, psi0: &StateVector) -> Result<StateVector> {
    if psi0.dim() != 1usize << circuit.width() {
        return Err(Error::DimensionMismatch {
            expected: 1usize << circuit.width(),
            got: psi0.dim(),
        });
    }
    let mut out = psi0.clone();
    for g in circuit.gates() {
        apply_gate_in_place(out.amplitudes_mut(), g);
    }
    Ok(out)
}

/// Dense matrix of one gate on `width` qubits.
pub fn gate_matrix(gate: &Gate, width: usize) -> Result<CMatrix> {
    gate.validate(width)?;
    let mut c = Circuit::with_width(width);
    c.push(gate.clone())?;
    Ok(circuit_unitary(&c)?.into_matrix())
}

/// The ordered product of all gates as a dense matrix (physical qubits).
pub fn circuit_unitary(circuit: &Circuit) -> Result<DenseUnitary> {
    let w = circuit.width();
    if w > MAX_UNITARY_WIDTH {
        return Err(Error::DimensionCap {
            what: "dense circuit unitary",
            dim: w,
            cap: MAX_UNITARY_WIDTH,
        });
    }
    let dim = 1usize << w;
    let mut u = CMatrix::zeros(dim, dim);
    let mut col = vec![ZERO; dim];
    for j in 0..dim {
        col.iter_mut().for_each(|a| *a = ZERO);
        col[j] = ONE;
        for g in circuit.gates() {
            apply_gate_in_place(&mut col, g);
        }
        u.column_mut(j).copy_from_slice(&col);
    }
    Ok(DenseUnitary::from_matrix(u))
}

/// Measurement outcomes keyed by basis index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    pub width: usize,
    pub shots: u64,
    pub counts: BTreeMap<usize, u64>,
}

impl Histogram {
    pub fn count(&self, index: usize) -> u64 {
        self.counts.get(&index).copied().unwrap_or(0)
    }

    pub fn frequency(&self, index: usize) -> f64 {
        self.count(index) as f64 / self.shots as f64
    }

    /// Bitstring with qubit 0 rightmost.
    pub fn bitstring(&self, index: usize) -> String {
        (0..self.width)
            .rev()
            .map(|q| if (index >> q) & 1 == 1 { '1' } else { '0' })
            .collect()
    }
}

/// Draws `shots` outcomes from `|amplitude|²` with a ChaCha8 generator
/// seeded by `seed` (inverse-CDF sampling, one uniform draw per shot).
pub fn sample_counts(state: &StateVector, shots: u64, seed: u64) -> Histogram {
    let mut cdf = Vec::with_capacity(state.dim());
    let mut acc = 0.0;
    for p in state.probabilities() {
        acc += p;
        cdf.push(acc);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = BTreeMap::new();
    for _ in 0..shots {
        let u: f64 = rng.random::<f64>() * acc;
        let idx = cdf.partition_point(|&x| x <= u).min(cdf.len() - 1);
        *counts.entry(idx).or_insert(0) += 1;
    }
    Histogram {
        width: state.width(),
        shots,
        counts,
    }
}
