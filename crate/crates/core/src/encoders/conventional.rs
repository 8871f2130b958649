//! One qubit per neutrino, SWAP-fused nearest-neighbour network.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::exact::{conventional_schedule, matrix_exponential};
use crate::linalg::{c, CMatrix, DenseHermitian};
use crate::physics::hamiltonian::b_dot_sigma;
use crate::physics::{BVector, EnsembleSpec};
use crate::state::RegisterLayout;

fn ry(circ: &mut Circuit, q: usize, angle: f64) -> Result<()> {
    circ.push(Gate::sdg(q))?;
    circ.push(Gate::rx(q, angle))?;
    circ.push(Gate::phase(q, FRAC_PI_2))?;
    Ok(())
}

fn cx_via_cz(circ: &mut Circuit, control: usize, target: usize) -> Result<()> {
    circ.push(Gate::h(target))?;
    circ.push(Gate::cz(control, target))?;
    circ.push(Gate::h(target))?;
    Ok(())
}

/// Two-qubit fragment equal to `exp(−i(J_dt + π/4) σ·σ)` up to a global
/// phase, built from single-qubit gates and three CZ.
///
/// The shifted exponent equals `e^{−iJ_dt σ·σ}` times a SWAP, so the pair
/// interacts and exchanges places in one gate.
pub fn u2_gate(j_dt: f64) -> Circuit {
    // exp(i(a XX + b YY + c ZZ)) with a = b = c = −(J_dt + π/4).
    let a = -(j_dt + FRAC_PI_4);
    let mut circ = Circuit::with_width(2);
    let build = |circ: &mut Circuit| -> Result<()> {
        circ.push(Gate::rz(0, FRAC_PI_2))?;
        cx_via_cz(circ, 0, 1)?;
        circ.push(Gate::rz(1, -2.0 * a + FRAC_PI_2))?;
        ry(circ, 0, FRAC_PI_2 - 2.0 * a)?;
        cx_via_cz(circ, 1, 0)?;
        ry(circ, 0, 2.0 * a - FRAC_PI_2)?;
        cx_via_cz(circ, 0, 1)?;
        circ.push(Gate::rz(1, -FRAC_PI_2))?;
        Ok(())
    };
    build(&mut circ).expect("qubits 0 and 1 exist");
    circ
}

/// ZXZ Euler angles `(α, β, γ)` with `U ∝ RZ(α)·RX(β)·RZ(γ)`.
fn euler_zxz(u: &CMatrix) -> (f64, f64, f64) {
    let det = u[(0, 0)] * u[(1, 1)] - u[(0, 1)] * u[(1, 0)];
    let delta = det.arg() / 2.0;
    let (a, b) = (u[(0, 0)], u[(1, 0)]);
    let beta = 2.0 * b.norm().atan2(a.norm());
    let sum = if a.norm() > 1e-14 {
        -2.0 * (a.arg() - delta)
    } else {
        0.0
    };
    let diff = if b.norm() > 1e-14 {
        2.0 * (b.arg() - delta + FRAC_PI_2)
    } else {
        0.0
    };
    ((sum + diff) / 2.0, beta, (sum - diff) / 2.0)
}

/// Emits `exp(−i φ · ½ b·σ)` on qubit `q` as RZ·RX·RZ.
fn vacuum_rotation(circ: &mut Circuit, q: usize, b: BVector, phi: f64) -> Result<()> {
    if phi == 0.0 || b.is_zero() {
        return Ok(());
    }
    let h = DenseHermitian::new(b_dot_sigma(b) * c(0.5)).expect("Hermitian");
    let u = matrix_exponential(&h, phi).into_matrix();
    let (alpha, beta, gamma) = euler_zxz(&u);
    for (angle, gate) in [
        (gamma, Gate::rz(q, gamma)),
        (beta, Gate::rx(q, beta)),
        (alpha, Gate::rz(q, alpha)),
    ] {
        if angle.abs() > 1e-15 {
            circ.push(gate)?;
        }
    }
    Ok(())
}

/// Step number `step` (0-based) of the conventional circuit, starting from
/// `start_map` (`start_map[l]` = physical qubit of logical neutrino `l`).
///
/// Each pair gate is `v/2 · u² · v/2`, where `v` is the pair's vacuum share
/// `½(b_p·σ_p + b_q·σ_q)/(N−1)` times `dt`. Consecutive halves on one
/// qubit are merged. The returned circuit's logical map is the map after
/// the step.
pub fn conventional_step_from(spec: &EnsembleSpec, dt: f64, step: usize, start_map: &[usize]) -> Result<Circuit> {
    let spec = if spec.is_per_neutrino() {
        spec.clone()
    } else {
        spec.expand_to_neutrinos()
    };
    let n = spec.n_modes();
    if n < 2 {
        return Err(Error::TooFewSites(n));
    }
    if start_map.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: start_map.len(),
        });
    }
    let share = dt / (n as f64 - 1.0);
    let mut circ = Circuit::new(RegisterLayout::from_sizes([("nu", n)]));
    let mut at = start_map.to_vec();
    let mut pending = vec![0.0f64; n];
    let flush = |circ: &mut Circuit, pending: &mut [f64], at: &[usize], l: usize| -> Result<()> {
        let w = std::mem::take(&mut pending[l]);
        vacuum_rotation(circ, at[l], spec.b_vector(l), w * share)
    };
    let (pairs, end_map) = conventional_schedule(start_map, step);
    for pair in pairs {
        let (lo, hi) = (pair.lower, pair.upper);
        for l in [lo, hi] {
            pending[l] += 0.5;
            flush(&mut circ, &mut pending, &at, l)?;
        }
        let (p, q) = pair.logical();
        circ.append_on(&u2_gate(spec.j(p, q) * dt), &[pair.position, pair.position + 1])?;
        at.swap(lo, hi);
        pending[lo] += 0.5;
        pending[hi] += 0.5;
    }
    for l in 0..n {
        flush(&mut circ, &mut pending, &at, l)?;
    }
    debug_assert_eq!(at, end_map);
    let mut physical_start = vec![0; n];
    for (l, &p) in start_map.iter().enumerate() {
        physical_start[p] = l;
    }
    // Map relative to the circuit input: the qubit entering on physical p
    // leaves on at[physical_start[p]].
    circ.set_logical_map((0..n).map(|p| at[physical_start[p]]).collect())?;
    Ok(circ)
}

/// One step from the identity layout.
pub fn conventional_trotter_step(spec: &EnsembleSpec, dt: f64) -> Result<Circuit> {
    let n = spec.total_particles();
    conventional_step_from(spec, dt, 0, &(0..n).collect::<Vec<_>>())
}

/// `n_steps` consecutive steps; the logical map of the result is the
/// composition over all steps.
pub fn conventional_evolution(spec: &EnsembleSpec, dt: f64, n_steps: usize) -> Result<Circuit> {
    let n = spec.total_particles();
    let mut map: Vec<usize> = (0..n).collect();
    let mut circ = Circuit::new(RegisterLayout::from_sizes([("nu", n)]));
    for step in 0..n_steps {
        let s = conventional_step_from(spec, dt, step, &map)?;
        map = map.iter().map(|&p| s.logical_map()[p]).collect();
        circ.append(&s)?;
    }
    Ok(circ)
}
