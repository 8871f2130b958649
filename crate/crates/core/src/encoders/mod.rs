//! Circuit builders for the three encodings: one qubit per neutrino, one
//! binary Dicke register per mode, and one register for the antidiagonal
//! subspace of a bipolar system.

pub mod conventional;
pub mod diagonal;
pub mod dicke;

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::exact::TrotterOrder;
use crate::physics::EnsembleSpec;
use crate::state::RegisterLayout;

pub use conventional::{conventional_evolution, conventional_step_from, conventional_trotter_step, u2_gate};
pub use diagonal::{diagonal_dicke_trotter_step, BipolarSystem};
pub use dicke::{
    controlled_decrement, controlled_increment, dicke_trotter_step, eq_gate, gate_rsz, gate_rszsz, gate_rx1, gate_rx2,
    RxVariant,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EncodingKind {
    Conventional,
    DickeAncilla,
    DickePauli,
    DiagonalDicke,
}

impl EncodingKind {
    pub const ALL: [EncodingKind; 4] = [
        EncodingKind::Conventional,
        EncodingKind::DickeAncilla,
        EncodingKind::DickePauli,
        EncodingKind::DiagonalDicke,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EncodingKind::Conventional => "conventional",
            EncodingKind::DickeAncilla => "dicke_ancilla",
            EncodingKind::DickePauli => "dicke_pauli",
            EncodingKind::DiagonalDicke => "diagonal_dicke",
        }
    }

    /// Trotter order of the step builders for this encoding.
    pub fn trotter_order(self) -> TrotterOrder {
        match self {
            EncodingKind::Conventional => TrotterOrder::Second,
            _ => TrotterOrder::First,
        }
    }
}

impl std::fmt::Display for EncodingKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EncodingChoice {
    pub kind: EncodingKind,
    pub trotter_order: TrotterOrder,
    pub n_steps: usize,
}

impl EncodingChoice {
    pub fn new(kind: EncodingKind, n_steps: usize) -> Result<Self> {
        let choice = Self {
            kind,
            trotter_order: kind.trotter_order(),
            n_steps,
        };
        choice.validate()?;
        Ok(choice)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_steps == 0 {
            return Err(Error::InvalidScenario("n_steps must be at least 1".into()));
        }
        if self.trotter_order != self.kind.trotter_order() {
            return Err(Error::InvalidScenario(format!(
                "{} circuits are {:?}-order",
                self.kind,
                self.kind.trotter_order()
            )));
        }
        Ok(())
    }
}

/// `⌈log₂(N+1)⌉`, the qubits needed to hold the values `0…N`.
pub fn register_size(n: usize) -> usize {
    (usize::BITS - n.leading_zeros()) as usize
}

/// Register sizes and ancilla count of an encoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisterPlan {
    pub register_sizes: Vec<usize>,
    pub ancillas: usize,
}

impl RegisterPlan {
    pub fn for_spec(spec: &EnsembleSpec, kind: EncodingKind) -> Result<Self> {
        Ok(match kind {
            EncodingKind::Conventional => Self {
                register_sizes: vec![spec.total_particles()],
                ancillas: 0,
            },
            EncodingKind::DickeAncilla | EncodingKind::DickePauli => Self {
                register_sizes: spec.modes.iter().map(|m| register_size(m.n_particles)).collect(),
                ancillas: usize::from(kind == EncodingKind::DickeAncilla),
            },
            EncodingKind::DiagonalDicke => {
                let (nu, _) = spec
                    .bipolar_pair()
                    .ok_or_else(|| Error::UnsupportedEncoding("diagonal_dicke needs a bipolar ensemble".into()))?;
                Self {
                    register_sizes: vec![register_size(spec.modes[nu].n_particles)],
                    ancillas: 0,
                }
            }
        })
    }

    pub fn width(&self) -> usize {
        self.register_sizes.iter().sum::<usize>() + self.ancillas
    }

    /// Named layout: `nu` for conventional, `m0, m1, …` (+ `anc`) for Dicke,
    /// `d` for the diagonal register.
    pub fn layout(&self, kind: EncodingKind) -> RegisterLayout {
        let mut regs: Vec<(String, usize)> = match kind {
            EncodingKind::Conventional => vec![("nu".into(), self.register_sizes[0])],
            EncodingKind::DiagonalDicke => vec![("d".into(), self.register_sizes[0])],
            _ => self
                .register_sizes
                .iter()
                .enumerate()
                .map(|(i, &s)| (format!("m{i}"), s))
                .collect(),
        };
        if self.ancillas > 0 {
            regs.push(("anc".into(), self.ancillas));
        }
        RegisterLayout::from_sizes(regs)
    }
}

pub fn required_qubits(spec: &EnsembleSpec, kind: EncodingKind) -> Result<usize> {
    Ok(RegisterPlan::for_spec(spec, kind)?.width())
}

/// Initial register value of each mode in the register frame: 0 when the
/// particles start on `|0⟩`, `N_i` when they start on `|1⟩`.
pub fn initial_register_values(spec: &EnsembleSpec) -> Vec<usize> {
    spec.modes
        .iter()
        .map(|m| if m.initial_bit() == 0 { 0 } else { m.n_particles })
        .collect()
}

/// X gates writing the initial flavour state into the encoding's registers.
pub fn prepare_initial_state(spec: &EnsembleSpec, kind: EncodingKind) -> Result<Circuit> {
    let plan = RegisterPlan::for_spec(spec, kind)?;
    let layout = plan.layout(kind);
    let mut circ = Circuit::new(layout.clone());
    match kind {
        EncodingKind::Conventional => {
            for (q, &mode) in spec.neutrino_modes().iter().enumerate() {
                if spec.modes[mode].initial_bit() == 1 {
                    circ.push(Gate::x(q))?;
                }
            }
        }
        EncodingKind::DickeAncilla | EncodingKind::DickePauli => {
            for (i, value) in initial_register_values(spec).into_iter().enumerate() {
                let reg = &layout.registers[i];
                for bit in (0..reg.len).filter(|b| (value >> b) & 1 == 1) {
                    circ.push(Gate::x(reg.qubit(bit)))?;
                }
            }
        }
        EncodingKind::DiagonalDicke => {
            // The antidiagonal register starts at i = 0 in either frame.
            BipolarSystem::from_spec(spec)?;
        }
    }
    Ok(circ)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::physics::{Flavor, ModeSpec};

    fn fig3_like() -> EnsembleSpec {
        EnsembleSpec::single_angle(
            vec![
                ModeSpec::neutrinos(1, 1.0, 0.1, Flavor::Electron),
                ModeSpec::neutrinos(7, 1.0, 0.1, Flavor::X),
            ],
            0.5,
        )
        .unwrap()
    }

    fn bipolar() -> EnsembleSpec {
        EnsembleSpec::single_angle(
            vec![
                ModeSpec::neutrinos(7, 1.0, 0.0, Flavor::Electron),
                ModeSpec::antineutrinos(7, 1.0, 0.0, Flavor::Electron),
            ],
            0.1,
        )
        .unwrap()
    }

    #[test]
    fn register_sizes() {
        assert_eq!(register_size(1), 1);
        assert_eq!(register_size(7), 3);
        assert_eq!(register_size(8), 4);
    }

    #[test]
    fn qubit_counts() {
        assert_eq!(required_qubits(&fig3_like(), EncodingKind::Conventional).unwrap(), 8);
        assert_eq!(required_qubits(&fig3_like(), EncodingKind::DickeAncilla).unwrap(), 5);
        assert_eq!(required_qubits(&fig3_like(), EncodingKind::DickePauli).unwrap(), 4);
        assert_eq!(required_qubits(&bipolar(), EncodingKind::Conventional).unwrap(), 14);
        assert_eq!(required_qubits(&bipolar(), EncodingKind::DiagonalDicke).unwrap(), 3);
        assert!(required_qubits(&fig3_like(), EncodingKind::DiagonalDicke).is_err());
        let one = EnsembleSpec::single_angle(vec![ModeSpec::neutrinos(1, 1.0, 0.0, Flavor::Electron)], 0.0).unwrap();
        assert_eq!(required_qubits(&one, EncodingKind::DickePauli).unwrap(), 1);
    }

    #[test]
    fn initial_states() {
        let c = prepare_initial_state(&fig3_like(), EncodingKind::Conventional).unwrap();
        assert_eq!(c.gate_count(), 7);
        assert!(c.gates().iter().all(|g| g.targets[0] >= 1));
        let c = prepare_initial_state(&fig3_like(), EncodingKind::DickeAncilla).unwrap();
        // Mode 1 holds 7 = 0b111 on qubits 1..=3.
        let targets: Vec<usize> = c.gates().iter().map(|g| g.targets[0]).collect();
        assert_eq!(targets, vec![1, 2, 3]);
        let all_e = EnsembleSpec::single_angle(
            vec![
                ModeSpec::neutrinos(1, 1.0, 0.1, Flavor::Electron),
                ModeSpec::neutrinos(7, 1.0, 0.1, Flavor::Electron),
            ],
            0.5,
        )
        .unwrap();
        assert_eq!(
            prepare_initial_state(&all_e, EncodingKind::DickePauli)
                .unwrap()
                .gate_count(),
            0
        );
        let five = EnsembleSpec::single_angle(vec![ModeSpec::neutrinos(5, 1.0, 0.1, Flavor::X)], 0.0).unwrap();
        let c = prepare_initial_state(&five, EncodingKind::DickePauli).unwrap();
        let targets: Vec<usize> = c.gates().iter().map(|g| g.targets[0]).collect();
        assert_eq!(targets, vec![0, 2]);
    }

    #[test]
    fn encoding_choice_orders() {
        assert!(EncodingChoice::new(EncodingKind::Conventional, 1).is_ok());
        assert!(EncodingChoice::new(EncodingKind::DickePauli, 0).is_err());
        let bad = EncodingChoice {
            kind: EncodingKind::DiagonalDicke,
            trotter_order: TrotterOrder::Second,
            n_steps: 4,
        };
        assert!(bad.validate().is_err());
    }
}
