//! Bipolar ensembles restricted to the antidiagonal states `|m, −m⟩`.
//!
//! A symmetric neutrino/antineutrino pair that starts flavour-pure with the
//! two modes in opposite register states never leaves the `N + 1` states
//! `|S, m⟩|S, −m⟩` when the vacuum field has no transverse part. One
//! register of `⌈log₂(N+1)⌉` qubits holds the index `i = m + S`.

use std::f64::consts::FRAC_PI_2;

use crate::circuit::{two_level_rotation_pauli, Circuit, Gate};
use crate::error::{Error, Result};
use crate::physics::spin::DickeFrame;
use crate::physics::{build_diagonal_subspace_hamiltonian, EnsembleSpec, TridiagonalHermitian};
use crate::state::RegisterLayout;

use super::{initial_register_values, register_size};

/// Largest `|sin 2θ|` (times `Δ`) treated as a vanishing transverse field.
pub const TRANSVERSE_TOL: f64 = 1e-9;

/// Parameters of the antidiagonal problem derived from an ensemble.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BipolarSystem {
    pub n: usize,
    pub delta: f64,
    /// Mixing angle entering the tridiagonal Hamiltonian. Differs from the
    /// ensemble's angle by `π/2 − θ` when the register frame is used.
    pub theta: f64,
    pub j: f64,
    /// Frame in which index `0` is the initial state.
    pub frame: DickeFrame,
    pub neutrino_mode: usize,
    pub antineutrino_mode: usize,
}

impl BipolarSystem {
    pub fn from_spec(spec: &EnsembleSpec) -> Result<Self> {
        let unsupported = |why: String| Error::UnsupportedEncoding(format!("diagonal_dicke: {why}"));
        let (nu, anu) = spec
            .bipolar_pair()
            .ok_or_else(|| unsupported("needs one neutrino and one antineutrino mode of equal size, Δ and θ".into()))?;
        let m = &spec.modes[nu];
        let n = m.n_particles;
        let b = m.b_vector();
        if b.x.abs() > TRANSVERSE_TOL * m.delta.abs().max(1.0) || b.y != 0.0 {
            return Err(unsupported(format!(
                "transverse vacuum field {:.3e} couples the antidiagonal subspace to the rest",
                b.x
            )));
        }
        let values = initial_register_values(spec);
        if values[nu] + values[anu] != n {
            return Err(unsupported(
                "initial state is not antidiagonal (both modes start in the same register state)".into(),
            ));
        }
        let (frame, theta) = if values[nu] == 0 {
            (DickeFrame::Register, FRAC_PI_2 - m.theta)
        } else {
            (DickeFrame::Spin, m.theta)
        };
        Ok(Self {
            n,
            delta: m.delta,
            theta,
            j: spec.j(nu, anu),
            frame,
            neutrino_mode: nu,
            antineutrino_mode: anu,
        })
    }

    pub fn hamiltonian(&self) -> TridiagonalHermitian {
        build_diagonal_subspace_hamiltonian(self.n, self.delta, self.theta, self.j)
    }

    pub fn step_circuit(&self, dt: f64) -> Result<Circuit> {
        diagonal_dicke_trotter_step(self.n, self.delta, self.theta, self.j, dt)
    }
}

/// One first-order step on the antidiagonal register: the diagonal part
/// `α n̂² + β n̂` as RZ and RZZ gates, then the hops `i−1 ↔ i` for
/// `i = 1…N` as two-level rotations with `θ = 2 t_i dt`.
///
/// With `n̂ = A − Σ_j a_j Z_j`, `a_j = 2^j/2`, `A = (2^k − 1)/2`, qubit `j`
/// gets `RZ(−2 dt a_j (β + 2αA))` and pair `(j, l)` gets `RZZ(4α a_j a_l dt)`.
pub fn diagonal_dicke_trotter_step(n: usize, delta: f64, theta: f64, j: f64, dt: f64) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::InvalidEnsemble(
            "diagonal_dicke needs at least one particle per mode".into(),
        ));
    }
    let k = register_size(n);
    let mut circ = Circuit::new(RegisterLayout::from_sizes([("d", k)]));
    let s = n as f64 / 2.0;
    let alpha = -4.0 * j;
    let beta = -2.0 * delta * (2.0 * theta).cos() + 8.0 * j * s;
    let a = |q: usize| (1u64 << q) as f64 / 2.0;
    let big_a = ((1u64 << k) - 1) as f64 / 2.0;
    for q in 0..k {
        let phi = -2.0 * dt * a(q) * (beta + 2.0 * alpha * big_a);
        if phi != 0.0 {
            circ.push(Gate::rz(q, phi))?;
        }
    }
    if alpha != 0.0 {
        for q in 0..k {
            for l in (q + 1)..k {
                circ.push(Gate::rzz(q, l, 4.0 * alpha * a(q) * a(l) * dt))?;
            }
        }
    }
    let h = build_diagonal_subspace_hamiltonian(n, delta, theta, j);
    let qubits: Vec<usize> = (0..k).collect();
    for i in 1..=n {
        let t = h.offdiagonal[i - 1];
        if t != 0.0 {
            circ.append(&two_level_rotation_pauli(k, &qubits, i - 1, i, 2.0 * t * dt)?)?;
        }
    }
    Ok(circ)
}
