//! Gate-level circuits over little-endian qubit registers.

mod pauli;
mod qasm;
mod sim;

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use crate::error::{Error, Result};
use crate::state::{Register, RegisterLayout};

pub use pauli::{pauli_rotation_circuit, transition_decomposition, two_level_rotation_pauli, PauliLetter, PauliString};
pub use qasm::{export_qasm, import_qasm};
pub use sim::{
    apply_gate, apply_gate_in_place, circuit_unitary, gate_matrix, run_statevector, sample_counts, Histogram,
    MAX_UNITARY_WIDTH,
};

/// Gate kinds of the IR. Angles are in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    X,
    H,
    /// `diag(1, −i)`.
    Sdg,
    /// `exp(−iθX/2)`.
    Rx(f64),
    /// `exp(−iθZ/2)`.
    Rz(f64),
    /// `diag(1, e^{iθ})`.
    Phase(f64),
    Cx,
    Cz,
    /// Controlled [`GateKind::Phase`].
    CPhase(f64),
    /// `exp(−iθ Z⊗Z/2)`.
    Rzz(f64),
    /// X on the target when every control is `|1⟩`.
    Mcx,
    /// `RX(θ)` on the target when every control is `|1⟩`.
    Mcrx(f64),
}

impl GateKind {
    pub fn angle(&self) -> Option<f64> {
        match *self {
            GateKind::Rx(a)
            | GateKind::Rz(a)
            | GateKind::Phase(a)
            | GateKind::CPhase(a)
            | GateKind::Rzz(a)
            | GateKind::Mcrx(a) => Some(a),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GateKind::X => "x",
            GateKind::H => "h",
            GateKind::Sdg => "sdg",
            GateKind::Rx(_) => "rx",
            GateKind::Rz(_) => "rz",
            GateKind::Phase(_) => "p",
            GateKind::Cx => "cx",
            GateKind::Cz => "cz",
            GateKind::CPhase(_) => "cp",
            GateKind::Rzz(_) => "rzz",
            GateKind::Mcx => "mcx",
            GateKind::Mcrx(_) => "mcrx",
        }
    }

    /// `(targets, Some(controls))` arity, `None` for any number of controls.
    fn arity(&self) -> (usize, Option<usize>) {
        match self {
            GateKind::X | GateKind::H | GateKind::Sdg | GateKind::Rx(_) | GateKind::Rz(_) | GateKind::Phase(_) => {
                (1, Some(0))
            }
            GateKind::Cx | GateKind::Cz | GateKind::CPhase(_) => (1, Some(1)),
            GateKind::Rzz(_) => (2, Some(0)),
            GateKind::Mcx | GateKind::Mcrx(_) => (1, None),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub targets: Vec<usize>,
    pub controls: Vec<usize>,
}

impl Gate {
    fn single(kind: GateKind, q: usize) -> Self {
        Self {
            kind,
            targets: vec![q],
            controls: vec![],
        }
    }

    pub fn x(q: usize) -> Self {
        Self::single(GateKind::X, q)
    }

    pub fn h(q: usize) -> Self {
        Self::single(GateKind::H, q)
    }

    pub fn sdg(q: usize) -> Self {
        Self::single(GateKind::Sdg, q)
    }

    pub fn rx(q: usize, theta: f64) -> Self {
        Self::single(GateKind::Rx(theta), q)
    }

    pub fn rz(q: usize, theta: f64) -> Self {
        Self::single(GateKind::Rz(theta), q)
    }

    pub fn phase(q: usize, theta: f64) -> Self {
        Self::single(GateKind::Phase(theta), q)
    }

    pub fn cx(control: usize, target: usize) -> Self {
        Self {
            kind: GateKind::Cx,
            targets: vec![target],
            controls: vec![control],
        }
    }

    pub fn cz(a: usize, b: usize) -> Self {
        Self {
            kind: GateKind::Cz,
            targets: vec![b],
            controls: vec![a],
        }
    }

    pub fn cphase(control: usize, target: usize, theta: f64) -> Self {
        Self {
            kind: GateKind::CPhase(theta),
            targets: vec![target],
            controls: vec![control],
        }
    }

    pub fn rzz(a: usize, b: usize, theta: f64) -> Self {
        Self {
            kind: GateKind::Rzz(theta),
            targets: vec![a, b],
            controls: vec![],
        }
    }

    pub fn mcx(controls: Vec<usize>, target: usize) -> Self {
        Self {
            kind: GateKind::Mcx,
            targets: vec![target],
            controls,
        }
    }

    pub fn mcrx(controls: Vec<usize>, target: usize, theta: f64) -> Self {
        Self {
            kind: GateKind::Mcrx(theta),
            targets: vec![target],
            controls,
        }
    }

    /// All qubits the gate touches.
    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.controls.iter().chain(&self.targets).copied()
    }

    /// Whether the gate entangles two or more qubits.
    pub fn is_multi_qubit(&self) -> bool {
        self.targets.len() + self.controls.len() > 1
    }

    pub fn validate(&self, width: usize) -> Result<()> {
        let (nt, nc) = self.kind.arity();
        if self.targets.len() != nt || nc.is_some_and(|n| n != self.controls.len()) {
            return Err(Error::InvalidGate(format!(
                "{} takes {nt} target(s) and {} control(s)",
                self.kind.name(),
                nc.map_or("any".to_string(), |n| n.to_string())
            )));
        }
        let mut seen = vec![false; width];
        for q in self.qubits() {
            if q >= width {
                return Err(Error::QubitOutOfRange { index: q, width });
            }
            if std::mem::replace(&mut seen[q], true) {
                return Err(Error::InvalidGate(format!("{} uses qubit {q} twice", self.kind.name())));
            }
        }
        Ok(())
    }

    /// The inverse gate.
    pub fn inverse(&self) -> Gate {
        let kind = match self.kind {
            GateKind::Sdg => {
                return Gate::phase(self.targets[0], FRAC_PI_2);
            }
            GateKind::Rx(a) => GateKind::Rx(-a),
            GateKind::Rz(a) => GateKind::Rz(-a),
            GateKind::Phase(a) => GateKind::Phase(-a),
            GateKind::CPhase(a) => GateKind::CPhase(-a),
            GateKind::Rzz(a) => GateKind::Rzz(-a),
            GateKind::Mcrx(a) => GateKind::Mcrx(-a),
            k @ (GateKind::X | GateKind::H | GateKind::Cx | GateKind::Cz | GateKind::Mcx) => k,
        };
        Gate { kind, ..self.clone() }
    }

    fn relabel(&self, map: &[usize]) -> Gate {
        Gate {
            kind: self.kind,
            targets: self.targets.iter().map(|&q| map[q]).collect(),
            controls: self.controls.iter().map(|&q| map[q]).collect(),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind.name())?;
        if let Some(a) = self.kind.angle() {
            write!(f, "({a})")?;
        }
        let qs: Vec<String> = self.qubits().map(|q| q.to_string()).collect();
        write!(f, " {}", qs.join(","))
    }
}

/// Ordered gate list over named registers.
///
/// `logical_map[l]` is the physical qubit that holds logical qubit `l` at the
/// end of the circuit; SWAP-fused gates permute it.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    width: usize,
    layout: RegisterLayout,
    gates: Vec<Gate>,
    logical_map: Vec<usize>,
}

impl Circuit {
    pub fn new(layout: RegisterLayout) -> Self {
        let width = layout.width();
        Self {
            width,
            layout,
            gates: Vec::new(),
            logical_map: (0..width).collect(),
        }
    }

    /// A circuit with a single register `q`.
    pub fn with_width(width: usize) -> Self {
        Self::new(RegisterLayout::flat(width))
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn register(&self, name: &str) -> Option<&Register> {
        self.layout.get(name)
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn logical_map(&self) -> &[usize] {
        &self.logical_map
    }

    pub fn set_logical_map(&mut self, map: Vec<usize>) -> Result<()> {
        let mut seen = vec![false; self.width];
        if map.len() != self.width
            || map
                .iter()
                .any(|&p| p >= self.width || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::InvalidGate(format!(
                "logical map {map:?} is not a permutation of 0..{}",
                self.width
            )));
        }
        self.logical_map = map;
        Ok(())
    }

    pub fn push(&mut self, gate: Gate) -> Result<&mut Self> {
        gate.validate(self.width)?;
        self.gates.push(gate);
        Ok(self)
    }

    /// Appends `other`'s gates (same width); the logical map is composed.
    pub fn append(&mut self, other: &Circuit) -> Result<&mut Self> {
        if other.width != self.width {
            return Err(Error::DimensionMismatch {
                expected: self.width,
                got: other.width,
            });
        }
        self.gates.extend(other.gates.iter().cloned());
        self.logical_map = self.logical_map.iter().map(|&p| other.logical_map[p]).collect();
        Ok(self)
    }

    /// Appends `fragment` with its qubit `k` placed on `qubits[k]`.
    pub fn append_on(&mut self, fragment: &Circuit, qubits: &[usize]) -> Result<&mut Self> {
        if qubits.len() != fragment.width {
            return Err(Error::DimensionMismatch {
                expected: fragment.width,
                got: qubits.len(),
            });
        }
        for g in &fragment.gates {
            self.push(g.relabel(qubits))?;
        }
        Ok(self)
    }

    /// Gates in reverse order, each inverted. The logical map is inverted.
    pub fn inverse(&self) -> Circuit {
        let mut inv_map = vec![0; self.width];
        for (l, &p) in self.logical_map.iter().enumerate() {
            inv_map[p] = l;
        }
        Circuit {
            width: self.width,
            layout: self.layout.clone(),
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
            logical_map: inv_map,
        }
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    pub fn multi_qubit_gate_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_multi_qubit()).count()
    }

    /// Number of layers when each gate is placed as early as its qubits allow.
    pub fn depth(&self) -> usize {
        let mut level = vec![0usize; self.width];
        let mut depth = 0;
        for g in &self.gates {
            let l = g.qubits().map(|q| level[q]).max().unwrap_or(0) + 1;
            for q in g.qubits() {
                level[q] = l;
            }
            depth = depth.max(l);
        }
        depth
    }
}
