//! Survival probabilities decoded from states and from measurement counts.

use serde::Serialize;

use crate::circuit::Histogram;
use crate::error::{Error, Result};
use crate::physics::{EnsembleSpec, Flavor, ModeSpec};
use crate::state::{Register, StateVector};

/// Population on unphysical register values tolerated before decoding fails.
pub const UNPHYSICAL_TOL: f64 = 1e-8;

/// Observables of one state at one time.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurvivalReport {
    pub time: f64,
    /// Mode-averaged survival probability, one entry per mode.
    pub survival: Vec<f64>,
    /// `⟨m⟩` per mode, counted from the initial state: `⟨flips⟩ − N_i/2`.
    pub mean_m: Vec<f64>,
}

fn clamp_unit(p: f64) -> f64 {
    p.clamp(0.0, 1.0)
}

/// Probability that a single qubit is found in the basis state that
/// encodes `initial_flavor`.
pub fn survival_conventional(
    state: &StateVector,
    qubit: usize,
    initial_flavor: Flavor,
    is_antineutrino: bool,
) -> Result<f64> {
    if qubit >= state.width() {
        return Err(Error::QubitOutOfRange {
            index: qubit,
            width: state.width(),
        });
    }
    let one = state.qubit_one_probability(qubit);
    let initial_bit = ModeSpec {
        n_particles: 1,
        delta: 0.0,
        theta: 0.0,
        is_antineutrino,
        initial_flavor,
    }
    .initial_bit();
    Ok(clamp_unit(if initial_bit == 1 { one } else { 1.0 - one }))
}

/// Distribution over `0..=max_value`, failing on weight above it.
fn physical_distribution(state: &StateVector, register: &Register, max_value: usize) -> Result<Vec<f64>> {
    let mut dist = state.register_distribution(register);
    let outside: f64 = dist.iter().skip(max_value + 1).sum();
    if outside > UNPHYSICAL_TOL {
        return Err(Error::UnphysicalPopulation {
            population: outside,
            max_value,
        });
    }
    dist.truncate(max_value + 1);
    Ok(dist)
}

fn mean(dist: &[f64]) -> f64 {
    dist.iter().enumerate().map(|(v, p)| v as f64 * p).sum()
}

/// Expected number of flipped particles of a Dicke register, counted from
/// the mode's initial register value.
fn dicke_flips(state: &StateVector, register: &Register, mode: &ModeSpec) -> Result<f64> {
    let n = mode.n_particles;
    let dist = physical_distribution(state, register, n)?;
    let v = mean(&dist);
    Ok(if mode.initial_bit() == 0 { v } else { n as f64 - v })
}

/// Fraction of a Dicke-encoded mode still in its initial flavour.
pub fn survival_dicke(state: &StateVector, register: &Register, mode: &ModeSpec) -> Result<f64> {
    let flips = dicke_flips(state, register, mode)?;
    Ok(clamp_unit(1.0 - flips / mode.n_particles as f64))
}

/// Neutrino and antineutrino survival `1 − ⟨i⟩/N` of the antidiagonal
/// register. The two are equal because flips come in pairs.
pub fn survival_diagonal(state: &StateVector, n: usize) -> Result<(f64, f64)> {
    let register = state
        .layout()
        .get("d")
        .cloned()
        .unwrap_or_else(|| Register::new("d", 0, state.width()));
    let dist = physical_distribution(state, &register, n)?;
    let p = clamp_unit(1.0 - mean(&dist) / n as f64);
    Ok((p, p))
}

/// Per-mode survival of a vector in the product Dicke space of `spec` in
/// the register frame (mode 0 fastest, index `Σ j_i Π_{l<i}(N_l+1)`).
pub fn survival_dicke_space(amplitudes: &[num_complex::Complex64], spec: &EnsembleSpec) -> Vec<f64> {
    let mut stride = 1;
    spec.modes
        .iter()
        .map(|m| {
            let n = m.n_particles;
            let v: f64 = amplitudes
                .iter()
                .enumerate()
                .map(|(idx, a)| ((idx / stride) % (n + 1)) as f64 * a.norm_sqr())
                .sum();
            stride *= n + 1;
            let flips = if m.initial_bit() == 0 { v } else { n as f64 - v };
            clamp_unit(1.0 - flips / n as f64)
        })
        .collect()
}

/// Index of the flavour-pure initial state in the product Dicke space.
pub fn initial_dicke_index(spec: &EnsembleSpec) -> usize {
    let mut stride = 1;
    let mut idx = 0;
    for m in &spec.modes {
        if m.initial_bit() == 1 {
            idx += m.n_particles * stride;
        }
        stride *= m.n_particles + 1;
    }
    idx
}

/// How a measured bitstring maps to a survival fraction.
#[derive(Debug, Clone, PartialEq)]
pub enum SurvivalDecoder {
    /// Neutrinos on individual qubits; the fraction of `qubits` whose bit
    /// equals `initial_bit`.
    Qubits { qubits: Vec<usize>, initial_bit: u8 },
    /// A Dicke register holding `n` particles that started at value `0`
    /// (`initial_bit = 0`) or `n` (`initial_bit = 1`).
    Register {
        register: Register,
        n: usize,
        initial_bit: u8,
    },
}

impl SurvivalDecoder {
    fn decode(&self, outcome: usize) -> Option<f64> {
        match self {
            SurvivalDecoder::Qubits { qubits, initial_bit } => {
                let kept = qubits
                    .iter()
                    .filter(|&&q| ((outcome >> q) & 1) as u8 == *initial_bit)
                    .count();
                Some(kept as f64 / qubits.len() as f64)
            }
            SurvivalDecoder::Register {
                register,
                n,
                initial_bit,
            } => {
                let v = register.value(outcome);
                (v <= *n).then(|| {
                    let flips = if *initial_bit == 0 { v } else { n - v };
                    1.0 - flips as f64 / *n as f64
                })
            }
        }
    }
}

/// Sample estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
}

/// Frequency estimate of the survival probability with the binomial error
/// bar `√(p(1−p)/shots)`. Shots landing on unphysical register values are
/// discarded.
pub fn survival_from_counts(hist: &Histogram, decoder: &SurvivalDecoder) -> Result<Estimate> {
    let mut total = 0u64;
    let mut sum = 0.0;
    for (&outcome, &count) in &hist.counts {
        if let Some(s) = decoder.decode(outcome) {
            total += count;
            sum += s * count as f64;
        }
    }
    if total == 0 {
        return Err(Error::InvalidScenario("no usable shots to estimate from".into()));
    }
    let p = sum / total as f64;
    Ok(Estimate {
        value: p,
        std_error: (p * (1.0 - p) / total as f64).max(0.0).sqrt(),
    })
}
