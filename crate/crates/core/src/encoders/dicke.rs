//! One binary register per mode holding the Dicke index `j_i`.
//!
//! The register value counts the mode's particles in `|1⟩`. Off-diagonal
//! pieces are two-level rotations between neighbouring register values,
//! either through one ancilla (`Ancilla`) or as commuting Pauli rotations
//! (`Pauli`).

use crate::circuit::{two_level_rotation_pauli, Circuit, Gate};
use crate::error::{Error, Result};
use crate::physics::spin::raise_coefficient;
use crate::physics::EnsembleSpec;
use crate::state::Register;

use super::{EncodingKind, RegisterPlan};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RxVariant {
    Ancilla,
    Pauli,
}

impl RxVariant {
    pub fn encoding(self) -> EncodingKind {
        match self {
            RxVariant::Ancilla => EncodingKind::DickeAncilla,
            RxVariant::Pauli => EncodingKind::DickePauli,
        }
    }
}

/// `exp(−iφ Ŝ_z)` on one register, dropping the global phase `e^{iφN/2}`.
pub fn gate_rsz(width: usize, reg: &Register, phi: f64) -> Circuit {
    let mut circ = Circuit::with_width(width);
    for bit in 0..reg.len {
        circ.push(Gate::phase(reg.qubit(bit), -phi * (1u64 << bit) as f64))
            .expect("register inside circuit");
    }
    circ
}

/// `exp(−iθ Ŝ_z⁽¹⁾ Ŝ_z⁽²⁾)` for registers holding `n1` and `n2` particles,
/// dropping the global phase.
pub fn gate_rszsz(width: usize, r1: &Register, n1: usize, r2: &Register, n2: usize, theta: f64) -> Circuit {
    let (s1, s2) = (n1 as f64 / 2.0, n2 as f64 / 2.0);
    let mut circ = Circuit::with_width(width);
    let mut push = |g| {
        circ.push(g).expect("register inside circuit");
    };
    for p in 0..r1.len {
        for q in 0..r2.len {
            push(Gate::cphase(
                r1.qubit(p),
                r2.qubit(q),
                -theta * (1u64 << (p + q)) as f64,
            ));
        }
    }
    for p in 0..r1.len {
        push(Gate::phase(r1.qubit(p), theta * s2 * (1u64 << p) as f64));
    }
    for q in 0..r2.len {
        push(Gate::phase(r2.qubit(q), theta * s1 * (1u64 << q) as f64));
    }
    circ
}

fn zero_bits(qubits: &[usize], value: usize) -> impl Iterator<Item = Gate> + '_ {
    qubits
        .iter()
        .enumerate()
        .filter(move |(b, _)| (value >> b) & 1 == 0)
        .map(|(_, &q)| Gate::x(q))
}

/// Flips `anc` when `qubits` hold `value`.
pub fn eq_gate(width: usize, qubits: &[usize], value: usize, anc: usize) -> Circuit {
    let mut circ = Circuit::with_width(width);
    let flips: Vec<Gate> = zero_bits(qubits, value).collect();
    for g in flips
        .iter()
        .chain([Gate::mcx(qubits.to_vec(), anc)].iter())
        .chain(flips.iter())
    {
        circ.push(g.clone()).expect("qubits inside circuit");
    }
    circ
}

/// Adds 1 (mod `2^len`) to the register when `anc` is set.
pub fn controlled_increment(width: usize, qubits: &[usize], anc: usize) -> Circuit {
    let mut circ = Circuit::with_width(width);
    for p in (0..qubits.len()).rev() {
        let controls = std::iter::once(anc).chain(qubits[..p].iter().copied()).collect();
        circ.push(Gate::mcx(controls, qubits[p]))
            .expect("qubits inside circuit");
    }
    circ
}

/// Subtracts 1 (mod `2^len`) from the register when `anc` is set.
pub fn controlled_decrement(width: usize, qubits: &[usize], anc: usize) -> Circuit {
    let mut circ = Circuit::with_width(width);
    for p in (0..qubits.len()).rev() {
        let controls = std::iter::once(anc).chain(qubits[..p].iter().copied()).collect();
        let flips: Vec<Gate> = qubits[..p].iter().map(|&q| Gate::x(q)).collect();
        for g in flips
            .iter()
            .cloned()
            .chain([Gate::mcx(controls, qubits[p])])
            .chain(flips.iter().cloned())
        {
            circ.push(g).expect("qubits inside circuit");
        }
    }
    circ
}

/// Ancilla form of `exp(−i(θ/2)(|lo⟩⟨hi| + h.c.))` where `hi` is reached
/// from `lo` by `down` (undone by `up`): mark `hi` on the ancilla, move it
/// onto `lo`, rotate the ancilla conditioned on `lo`, and undo.
#[allow(clippy::too_many_arguments)]
fn ancilla_two_level(
    width: usize,
    qubits: &[usize],
    lo: usize,
    hi: usize,
    down: &Circuit,
    up: &Circuit,
    anc: usize,
    theta: f64,
) -> Result<Circuit> {
    let mut circ = Circuit::with_width(width);
    let mark = eq_gate(width, qubits, hi, anc);
    circ.append(&mark)?.append(down)?;
    let flips: Vec<Gate> = zero_bits(qubits, lo).collect();
    for g in &flips {
        circ.push(g.clone())?;
    }
    circ.push(Gate::mcrx(qubits.to_vec(), anc, theta))?;
    for g in &flips {
        circ.push(g.clone())?;
    }
    circ.append(up)?.append(&mark)?;
    Ok(circ)
}

/// `exp(−i(θ/2)(|k⟩⟨k+1| + h.c.))` on one register.
pub fn gate_rx1(width: usize, reg: &Register, k: usize, theta: f64, anc: Option<usize>) -> Result<Circuit> {
    let qubits: Vec<usize> = reg.qubits().collect();
    if k + 1 > reg.max_value() {
        return Err(Error::TransitionOutOfRange(format!(
            "{k} -> {} on {} qubits",
            k + 1,
            reg.len
        )));
    }
    match anc {
        None => two_level_rotation_pauli(width, &qubits, k, k + 1, theta),
        Some(anc) => ancilla_two_level(
            width,
            &qubits,
            k,
            k + 1,
            &controlled_decrement(width, &qubits, anc),
            &controlled_increment(width, &qubits, anc),
            anc,
            theta,
        ),
    }
}

/// `exp(−i(θ/2)(|a, b⟩⟨a+1, b−1| + h.c.))` on two registers.
pub fn gate_rx2(
    width: usize,
    r1: &Register,
    r2: &Register,
    a: usize,
    b: usize,
    theta: f64,
    anc: Option<usize>,
) -> Result<Circuit> {
    if a + 1 > r1.max_value() || b == 0 || b > r2.max_value() {
        return Err(Error::TransitionOutOfRange(format!(
            "({a}, {b}) -> ({}, {})",
            a + 1,
            b as i64 - 1
        )));
    }
    let qubits: Vec<usize> = r1.qubits().chain(r2.qubits()).collect();
    let lo = a | (b << r1.len);
    let hi = (a + 1) | ((b - 1) << r1.len);
    let q1: Vec<usize> = r1.qubits().collect();
    let q2: Vec<usize> = r2.qubits().collect();
    match anc {
        None => two_level_rotation_pauli(width, &qubits, lo, hi, theta),
        Some(anc) => {
            let mut down = controlled_decrement(width, &q1, anc);
            down.append(&controlled_increment(width, &q2, anc))?;
            let mut up = controlled_increment(width, &q1, anc);
            up.append(&controlled_decrement(width, &q2, anc))?;
            ancilla_two_level(width, &qubits, lo, hi, &down, &up, anc, theta)
        }
    }
}

/// One first-order step of the multi-mode Dicke Hamiltonian.
///
/// Per mode: `RSz(b'_z dt)` and `RX1(k)` with `θ = b'_x c_k dt` for
/// `k = 0…N_i−1`. Per pair `i < j` with `J_ij ≠ 0`: `RSzSz(4J dt)` and
/// `RX2(a, b)` with `θ = 4J dt c_a c_{b−1}`, `a` outer and `b` inner.
/// `b' = (b_x, −b_y, −b_z)` is the field in the register frame.
pub fn dicke_trotter_step(spec: &EnsembleSpec, dt: f64, variant: RxVariant) -> Result<Circuit> {
    let kind = variant.encoding();
    let plan = RegisterPlan::for_spec(spec, kind)?;
    let layout = plan.layout(kind);
    let width = plan.width();
    let anc = layout.get("anc").map(|r| r.start);
    for (i, m) in spec.modes.iter().enumerate() {
        if m.b_vector().y != 0.0 {
            return Err(Error::UnsupportedEncoding(format!("mode {i} has a non-zero b_y")));
        }
    }
    let mut circ = Circuit::new(layout.clone());
    let sizes: Vec<usize> = spec.modes.iter().map(|m| m.n_particles).collect();
    for (i, &n) in sizes.iter().enumerate() {
        let reg = &layout.registers[i];
        let b = spec.b_vector(i).flavor_swapped();
        if b.z != 0.0 {
            circ.append(&gate_rsz(width, reg, b.z * dt))?;
        }
        if b.x != 0.0 {
            for k in 0..n {
                circ.append(&gate_rx1(width, reg, k, b.x * raise_coefficient(n, k) * dt, anc)?)?;
            }
        }
    }
    for i in 0..sizes.len() {
        for j in (i + 1)..sizes.len() {
            let jij = spec.j(i, j);
            if jij == 0.0 {
                continue;
            }
            let (r1, r2) = (&layout.registers[i], &layout.registers[j]);
            circ.append(&gate_rszsz(width, r1, sizes[i], r2, sizes[j], 4.0 * jij * dt))?;
            for a in 0..sizes[i] {
                for b in 1..=sizes[j] {
                    let theta = 4.0 * jij * dt * raise_coefficient(sizes[i], a) * raise_coefficient(sizes[j], b - 1);
                    circ.append(&gate_rx2(width, r1, r2, a, b, theta, anc)?)?;
                }
            }
        }
    }
    Ok(circ)
}
