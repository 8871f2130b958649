use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Flavour of a neutrino in the two-flavour approximation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    #[default]
    Electron,
    X,
}

/// One neutrino mode: `n_particles` neutrinos (or antineutrinos) sharing
/// energy, direction and initial flavour.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSpec {
    pub n_particles: usize,
    /// Vacuum oscillation frequency `δm² / 2E` in inverse time units.
    pub delta: f64,
    /// Mixing angle in radians.
    pub theta: f64,
    #[serde(default)]
    pub is_antineutrino: bool,
    #[serde(default)]
    pub initial_flavor: Flavor,
}

impl ModeSpec {
    pub fn neutrinos(n_particles: usize, delta: f64, theta: f64, flavor: Flavor) -> Self {
        Self {
            n_particles,
            delta,
            theta,
            is_antineutrino: false,
            initial_flavor: flavor,
        }
    }

    pub fn antineutrinos(n_particles: usize, delta: f64, theta: f64, flavor: Flavor) -> Self {
        Self {
            is_antineutrino: true,
            ..Self::neutrinos(n_particles, delta, theta, flavor)
        }
    }

    pub fn b_vector(&self) -> BVector {
        vacuum_b_vector(self.delta, self.theta, self.is_antineutrino)
    }

    /// Computational-basis bit that encodes the initial flavour of one
    /// particle: `ν_e ↔ 0`, `ν_x ↔ 1`, and swapped for antineutrinos.
    pub fn initial_bit(&self) -> u8 {
        match (self.is_antineutrino, self.initial_flavor) {
            (false, Flavor::Electron) | (true, Flavor::X) => 0,
            (false, Flavor::X) | (true, Flavor::Electron) => 1,
        }
    }

    /// `S = N/2` of the mode's Dicke multiplet.
    pub fn spin(&self) -> f64 {
        self.n_particles as f64 / 2.0
    }

    fn validate(&self, index: usize) -> Result<()> {
        if self.n_particles == 0 {
            return Err(Error::InvalidEnsemble(format!("mode {index} has zero particles")));
        }
        if !(self.delta >= 0.0) || !self.delta.is_finite() {
            return Err(Error::InvalidEnsemble(format!(
                "mode {index} has invalid delta {}",
                self.delta
            )));
        }
        if !self.theta.is_finite() {
            return Err(Error::InvalidEnsemble(format!("mode {index} has non-finite theta")));
        }
        Ok(())
    }
}

/// Vacuum (plus ordinary-matter) field of one mode.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BVector {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn scale(self, f: f64) -> Self {
        Self::new(self.x * f, self.y * f, self.z * f)
    }

    /// Field seen in the flavour-swapped frame (conjugation by X on every
    /// qubit): `(x, y, z) → (x, −y, −z)`.
    pub fn flavor_swapped(self) -> Self {
        Self::new(self.x, -self.y, -self.z)
    }

    pub fn is_zero(&self) -> bool {
        self.x == 0.0 && self.y == 0.0 && self.z == 0.0
    }
}

/// `Δ (sin 2θ, 0, −cos 2θ)`, negated for antineutrinos.
pub fn vacuum_b_vector(delta: f64, theta: f64, is_antineutrino: bool) -> BVector {
    let sign = if is_antineutrino { -1.0 } else { 1.0 };
    let two_theta = 2.0 * theta;
    BVector::new(sign * delta * two_theta.sin(), 0.0, -sign * delta * two_theta.cos())
}

/// `(μ/√2)(1 − cos α)` where `μ = G_F n_ν`.
pub fn coupling_strength(mu: f64, alpha: f64) -> f64 {
    mu / std::f64::consts::SQRT_2 * (1.0 - alpha.cos())
}

/// A collection of modes and their pairwise couplings. `coupling[i][i]` is
/// the self-interaction inside mode `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub modes: Vec<ModeSpec>,
    pub coupling: Vec<Vec<f64>>,
}

impl EnsembleSpec {
    pub fn new(modes: Vec<ModeSpec>, coupling: Vec<Vec<f64>>) -> Result<Self> {
        let spec = Self { modes, coupling };
        spec.validate()?;
        Ok(spec)
    }

    /// All pairs (including intra-mode pairs) share coupling `j`.
    pub fn single_angle(modes: Vec<ModeSpec>, j: f64) -> Result<Self> {
        let n = modes.len();
        Self::new(modes, vec![vec![j; n]; n])
    }

    pub fn validate(&self) -> Result<()> {
        if self.modes.is_empty() {
            return Err(Error::InvalidEnsemble("no modes".into()));
        }
        for (i, m) in self.modes.iter().enumerate() {
            m.validate(i)?;
        }
        let n = self.modes.len();
        if self.coupling.len() != n || self.coupling.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidEnsemble(format!("coupling matrix must be {n}x{n}")));
        }
        for i in 0..n {
            for j in 0..n {
                let a = self.coupling[i][j];
                if !a.is_finite() {
                    return Err(Error::InvalidEnsemble("non-finite coupling".into()));
                }
                if (a - self.coupling[j][i]).abs() > 1e-12 * a.abs().max(1.0) {
                    return Err(Error::InvalidEnsemble(format!("coupling not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(())
    }

    pub fn n_modes(&self) -> usize {
        self.modes.len()
    }

    pub fn total_particles(&self) -> usize {
        self.modes.iter().map(|m| m.n_particles).sum()
    }

    pub fn is_per_neutrino(&self) -> bool {
        self.modes.iter().all(|m| m.n_particles == 1)
    }

    pub fn b_vector(&self, mode: usize) -> BVector {
        self.modes[mode].b_vector()
    }

    pub fn j(&self, a: usize, b: usize) -> f64 {
        self.coupling[a][b]
    }

    /// Mode index of every individual neutrino, in order.
    pub fn neutrino_modes(&self) -> Vec<usize> {
        self.modes
            .iter()
            .enumerate()
            .flat_map(|(i, m)| std::iter::repeat_n(i, m.n_particles))
            .collect()
    }

    /// One mode per neutrino. Intra-mode pairs inherit `coupling[i][i]`.
    pub fn expand_to_neutrinos(&self) -> EnsembleSpec {
        let owner = self.neutrino_modes();
        let modes = owner
            .iter()
            .map(|&i| ModeSpec {
                n_particles: 1,
                ..self.modes[i].clone()
            })
            .collect();
        let coupling = owner
            .iter()
            .enumerate()
            .map(|(p, &a)| {
                owner
                    .iter()
                    .enumerate()
                    .map(|(q, &b)| if p == q { 0.0 } else { self.coupling[a][b] })
                    .collect()
            })
            .collect();
        EnsembleSpec { modes, coupling }
    }

    /// Whether the ensemble is a symmetric bipolar system: one neutrino mode
    /// and one antineutrino mode with equal size, energy and angle.
    pub fn bipolar_pair(&self) -> Option<(usize, usize)> {
        if self.modes.len() != 2 {
            return None;
        }
        let (a, b) = (&self.modes[0], &self.modes[1]);
        if a.is_antineutrino == b.is_antineutrino
            || a.n_particles != b.n_particles
            || a.delta != b.delta
            || a.theta != b.theta
        {
            return None;
        }
        Some(if a.is_antineutrino { (1, 0) } else { (0, 1) })
    }
}
