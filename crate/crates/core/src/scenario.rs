//! Scenario files: an ensemble, a set of encodings and a time grid. Running
//! a scenario produces, for every encoding and mode, the survival
//! probability from the circuit, from exact evolution and from the exact
//! product of Trotter factors.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circuit::{export_qasm, run_statevector, sample_counts, Circuit};
use crate::encoders::{
    conventional_step_from, dicke_trotter_step, prepare_initial_state, BipolarSystem, EncodingKind, RegisterPlan,
    RxVariant,
};
use crate::error::{Error, Result};
use crate::exact::{
    diagonal_trotter_reference, dicke_trotter_reference, trotter_reference_state_from, Propagator, TrotterOrder,
};
use crate::linalg::{c, ZERO};
use crate::observables::{
    initial_dicke_index, survival_conventional, survival_diagonal, survival_dicke, survival_dicke_space,
    survival_from_counts, SurvivalDecoder,
};
use crate::physics::{build_register_hamiltonian, Caps, EnsembleSpec, ModeSpec};
use crate::state::StateVector;

pub const SCHEMA: &str = "nudicke-scenario/1";

/// Shots used when sampling is requested without a count.
pub const DEFAULT_SHOTS: u64 = 1024;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coupling {
    /// One `J` for every pair of neutrinos.
    SingleAngle(f64),
    /// Symmetric mode-by-mode matrix.
    Matrix(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputKind {
    Csv,
    Qasm,
}

fn default_outputs() -> Vec<OutputKind> {
    vec![OutputKind::Csv]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub schema: String,
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub modes: Vec<ModeSpec>,
    pub coupling: Coupling,
    pub encodings: Vec<EncodingKind>,
    pub t_max: f64,
    pub n_steps: usize,
    /// Each time point is reached with a single step of size `t`, instead
    /// of accumulating steps of size `t_max / n_steps`.
    #[serde(default)]
    pub single_step: bool,
    #[serde(default)]
    pub shots: Option<u64>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default = "default_outputs")]
    pub outputs: Vec<OutputKind>,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::InvalidScenario(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    pub fn ensemble(&self) -> Result<EnsembleSpec> {
        match &self.coupling {
            Coupling::SingleAngle(j) => EnsembleSpec::single_angle(self.modes.clone(), *j),
            Coupling::Matrix(m) => EnsembleSpec::new(self.modes.clone(), m.clone()),
        }
    }

    pub fn dt(&self) -> f64 {
        self.t_max / self.n_steps as f64
    }

    /// `(step, time)` for every row, starting at `(0, 0)`.
    pub fn time_grid(&self) -> Vec<(usize, f64)> {
        (0..=self.n_steps).map(|k| (k, k as f64 * self.dt())).collect()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidScenario(m));
        if self.schema != SCHEMA {
            return bad(format!("schema must be {SCHEMA:?}, got {:?}", self.schema));
        }
        if self.name.is_empty()
            || !self
                .name
                .chars()
                .all(|ch| ch.is_ascii_alphanumeric() || "-_".contains(ch))
        {
            return bad(format!("name {:?} must be non-empty [A-Za-z0-9_-]", self.name));
        }
        if !(self.t_max > 0.0) || !self.t_max.is_finite() {
            return bad(format!("t_max must be positive, got {}", self.t_max));
        }
        if self.n_steps == 0 {
            return bad("n_steps must be at least 1".into());
        }
        if self.encodings.is_empty() {
            return bad("no encodings".into());
        }
        if self.shots == Some(0) {
            return bad("shots must be at least 1".into());
        }
        let spec = self.ensemble()?;
        for &kind in &self.encodings {
            check_encoding(&spec, kind)?;
        }
        Ok(())
    }
}

fn check_encoding(spec: &EnsembleSpec, kind: EncodingKind) -> Result<()> {
    let caps = Caps::default();
    let plan = RegisterPlan::for_spec(spec, kind)?;
    if plan.width() > caps.max_qubits {
        return Err(Error::DimensionCap {
            what: "statevector simulation",
            dim: plan.width(),
            cap: caps.max_qubits,
        });
    }
    match kind {
        EncodingKind::Conventional if spec.total_particles() < 2 => Err(Error::TooFewSites(spec.total_particles())),
        EncodingKind::DiagonalDicke => BipolarSystem::from_spec(spec).map(|_| ()),
        EncodingKind::DickeAncilla | EncodingKind::DickePauli => {
            if spec.modes.iter().any(|m| m.b_vector().y != 0.0) {
                Err(Error::UnsupportedEncoding("register encoders need b_y = 0".into()))
            } else {
                Ok(())
            }
        }
        _ => Ok(()),
    }
}

/// Survival series of one encoding; `circuit[k][mode]` etc.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EncodingSeries {
    pub kind: EncodingKind,
    pub circuit: Vec<Vec<f64>>,
    /// Standard errors when the circuit column comes from sampling.
    pub circuit_error: Option<Vec<Vec<f64>>>,
    pub exact: Vec<Vec<f64>>,
    pub trotter: Vec<Vec<f64>>,
    pub qubits: usize,
    /// Size of the circuit for one step (without state preparation).
    pub step_gates: usize,
    pub step_multi_qubit_gates: usize,
    pub step_depth: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioReport {
    pub name: String,
    pub steps: Vec<usize>,
    pub times: Vec<f64>,
    pub n_modes: usize,
    pub series: Vec<EncodingSeries>,
}

impl ScenarioReport {
    pub fn header(&self) -> Vec<String> {
        let mut h = vec!["step".to_string(), "time".to_string()];
        for s in &self.series {
            for m in 0..self.n_modes {
                for col in ["circuit", "exact", "trotter"] {
                    h.push(format!("{}_m{m}_{col}", s.kind));
                }
                if s.circuit_error.is_some() {
                    h.push(format!("{}_m{m}_circuit_err", s.kind));
                }
            }
        }
        h
    }

    /// Rows aligned with [`Self::header`]; `step` first, then numbers.
    pub fn rows(&self) -> Vec<(usize, Vec<f64>)> {
        (0..self.times.len())
            .map(|k| {
                let mut row = vec![self.times[k]];
                for s in &self.series {
                    for m in 0..self.n_modes {
                        row.extend([s.circuit[k][m], s.exact[k][m], s.trotter[k][m]]);
                        if let Some(err) = &s.circuit_error {
                            row.push(err[k][m]);
                        }
                    }
                }
                (self.steps[k], row)
            })
            .collect()
    }

    /// CSV text with 17 significant digits per number.
    pub fn to_csv(&self) -> String {
        let mut out = self.header().join(",");
        out.push('\n');
        for (step, row) in self.rows() {
            let _ = write!(out, "{step}");
            for v in row {
                let _ = write!(out, ",{v:.16e}");
            }
            out.push('\n');
        }
        out
    }
}

/// Exact per-mode survival at `times`, from the Dicke-space Hamiltonian.
fn exact_series(spec: &EnsembleSpec, times: &[f64]) -> Result<Vec<Vec<f64>>> {
    let h = build_register_hamiltonian(spec)?;
    let prop = Propagator::new(&h);
    let mut psi0 = vec![ZERO; h.dim()];
    psi0[initial_dicke_index(spec)] = c(1.0);
    Ok(times
        .iter()
        .map(|&t| survival_dicke_space(&prop.apply(t, &psi0), spec))
        .collect())
}

/// One circuit step: `(step_index, dt) → circuit`. Conventional steps
/// depend on the current qubit map, which the closure tracks.
struct Stepper<'a> {
    kind: EncodingKind,
    spec: &'a EnsembleSpec,
    expanded: EnsembleSpec,
    map: Vec<usize>,
}

impl<'a> Stepper<'a> {
    fn new(kind: EncodingKind, spec: &'a EnsembleSpec) -> Self {
        let expanded = spec.expand_to_neutrinos();
        let map = (0..expanded.n_modes()).collect();
        Self {
            kind,
            spec,
            expanded,
            map,
        }
    }

    fn reset(&mut self) {
        self.map = (0..self.expanded.n_modes()).collect();
    }

    fn step(&mut self, step: usize, dt: f64) -> Result<Circuit> {
        Ok(match self.kind {
            EncodingKind::Conventional => {
                let c = conventional_step_from(&self.expanded, dt, step, &self.map)?;
                self.map = self.map.iter().map(|&p| c.logical_map()[p]).collect();
                c
            }
            EncodingKind::DickeAncilla => dicke_trotter_step(self.spec, dt, RxVariant::Ancilla)?,
            EncodingKind::DickePauli => dicke_trotter_step(self.spec, dt, RxVariant::Pauli)?,
            EncodingKind::DiagonalDicke => BipolarSystem::from_spec(self.spec)?.step_circuit(dt)?,
        })
    }

    fn decoders(&self) -> Result<Vec<SurvivalDecoder>> {
        let spec = self.spec;
        Ok(match self.kind {
            EncodingKind::Conventional => {
                let owner = spec.neutrino_modes();
                (0..spec.n_modes())
                    .map(|m| SurvivalDecoder::Qubits {
                        qubits: (0..owner.len())
                            .filter(|&l| owner[l] == m)
                            .map(|l| self.map[l])
                            .collect(),
                        initial_bit: spec.modes[m].initial_bit(),
                    })
                    .collect()
            }
            EncodingKind::DickeAncilla | EncodingKind::DickePauli => {
                let layout = RegisterPlan::for_spec(spec, self.kind)?.layout(self.kind);
                spec.modes
                    .iter()
                    .enumerate()
                    .map(|(i, m)| SurvivalDecoder::Register {
                        register: layout.registers[i].clone(),
                        n: m.n_particles,
                        initial_bit: m.initial_bit(),
                    })
                    .collect()
            }
            EncodingKind::DiagonalDicke => {
                let layout = RegisterPlan::for_spec(spec, self.kind)?.layout(self.kind);
                let n = BipolarSystem::from_spec(spec)?.n;
                let d = SurvivalDecoder::Register {
                    register: layout.registers[0].clone(),
                    n,
                    initial_bit: 0,
                };
                vec![d.clone(), d]
            }
        })
    }

    fn survival(&self, state: &StateVector) -> Result<Vec<f64>> {
        let spec = self.spec;
        match self.kind {
            EncodingKind::Conventional => {
                let owner = spec.neutrino_modes();
                let mut sums = vec![0.0; spec.n_modes()];
                for (l, &m) in owner.iter().enumerate() {
                    let mode = &spec.modes[m];
                    sums[m] += survival_conventional(state, self.map[l], mode.initial_flavor, mode.is_antineutrino)?;
                }
                Ok(sums
                    .iter()
                    .zip(&spec.modes)
                    .map(|(s, m)| s / m.n_particles as f64)
                    .collect())
            }
            EncodingKind::DickeAncilla | EncodingKind::DickePauli => spec
                .modes
                .iter()
                .enumerate()
                .map(|(i, m)| survival_dicke(state, &state.layout().registers[i], m))
                .collect(),
            EncodingKind::DiagonalDicke => {
                let sys = BipolarSystem::from_spec(spec)?;
                let (a, b) = survival_diagonal(state, sys.n)?;
                let mut out = vec![0.0; 2];
                out[sys.neutrino_mode] = a;
                out[sys.antineutrino_mode] = b;
                Ok(out)
            }
        }
    }
}

/// Exact products of Trotter factors, evolved alongside the circuit.
enum Reference {
    Qubit {
        spec: EnsembleSpec,
        order: TrotterOrder,
        amps: Vec<Complex64>,
    },
    Dicke {
        amps: Vec<Complex64>,
    },
    Diagonal {
        sys: BipolarSystem,
        amps: Vec<Complex64>,
    },
}

impl Reference {
    fn new(kind: EncodingKind, spec: &EnsembleSpec) -> Result<Self> {
        Ok(match kind {
            EncodingKind::Conventional => {
                let expanded = spec.expand_to_neutrinos();
                let n = expanded.n_modes();
                let start: usize = (0..n)
                    .filter(|&l| expanded.modes[l].initial_bit() == 1)
                    .map(|l| 1 << l)
                    .sum();
                let mut amps = vec![ZERO; 1 << n];
                amps[start] = c(1.0);
                Reference::Qubit {
                    spec: expanded,
                    order: kind.trotter_order(),
                    amps,
                }
            }
            EncodingKind::DickeAncilla | EncodingKind::DickePauli => {
                let dim: usize = spec.modes.iter().map(|m| m.n_particles + 1).product();
                let mut amps = vec![ZERO; dim];
                amps[initial_dicke_index(spec)] = c(1.0);
                Reference::Dicke { amps }
            }
            EncodingKind::DiagonalDicke => {
                let sys = BipolarSystem::from_spec(spec)?;
                let mut amps = vec![ZERO; sys.n + 1];
                amps[0] = c(1.0);
                Reference::Diagonal { sys, amps }
            }
        })
    }

    /// Applies step number `step` (0-based) of size `dt` to `amps`.
    fn advance(&self, amps: &[Complex64], spec: &EnsembleSpec, dt: f64, step: usize) -> Result<Vec<Complex64>> {
        Ok(match self {
            Reference::Qubit {
                spec: expanded, order, ..
            } => trotter_reference_state_from(expanded, dt, step..step + 1, *order, amps)?,
            Reference::Dicke { .. } => dicke_trotter_reference(spec, dt, 1)?.apply(amps),
            Reference::Diagonal { sys, .. } => {
                diagonal_trotter_reference(sys.n, sys.delta, sys.theta, sys.j, dt, 1).apply(amps)
            }
        })
    }

    fn initial(&self) -> &[Complex64] {
        match self {
            Reference::Qubit { amps, .. } | Reference::Dicke { amps } | Reference::Diagonal { amps, .. } => amps,
        }
    }

    fn survival(&self, amps: &[Complex64], spec: &EnsembleSpec) -> Result<Vec<f64>> {
        match self {
            Reference::Qubit { spec: expanded, .. } => {
                let psi = StateVector::from_amplitudes(amps.to_vec())?;
                let mut sums = vec![0.0; spec.n_modes()];
                for (l, &m) in spec.neutrino_modes().iter().enumerate() {
                    let mode = &expanded.modes[l];
                    sums[m] += survival_conventional(&psi, l, mode.initial_flavor, mode.is_antineutrino)?;
                }
                Ok(sums
                    .iter()
                    .zip(&spec.modes)
                    .map(|(s, m)| s / m.n_particles as f64)
                    .collect())
            }
            Reference::Dicke { .. } => Ok(survival_dicke_space(amps, spec)),
            Reference::Diagonal { sys, .. } => {
                let psi = StateVector::from_amplitudes(amps.to_vec())?;
                let mean: f64 = psi.probabilities().iter().enumerate().map(|(i, p)| i as f64 * p).sum();
                let p = (1.0 - mean / sys.n as f64).clamp(0.0, 1.0);
                Ok(vec![p, p])
            }
        }
    }
}

fn series_for(
    cfg: &ScenarioConfig,
    spec: &EnsembleSpec,
    kind: EncodingKind,
    exact: &[Vec<f64>],
    idx: usize,
) -> Result<EncodingSeries> {
    let grid = cfg.time_grid();
    let prep = prepare_initial_state(spec, kind)?;
    let psi0 = run_statevector(&prep, &StateVector::zero(prep.layout().clone()))?;
    let mut stepper = Stepper::new(kind, spec);
    let reference = Reference::new(kind, spec)?;
    let shots = cfg.shots;
    let seed = cfg.seed.unwrap_or(0);

    let mut circuit = Vec::with_capacity(grid.len());
    let mut errors = Vec::with_capacity(grid.len());
    let mut trotter = Vec::with_capacity(grid.len());
    let mut state = psi0.clone();
    let mut ref_amps = reference.initial().to_vec();
    let mut step_circuit: Option<Circuit> = None;
    for &(k, t) in &grid {
        if k > 0 {
            if cfg.single_step {
                stepper.reset();
                let c = stepper.step(0, t)?;
                state = run_statevector(&c, &psi0)?;
                ref_amps = reference.advance(reference.initial(), spec, t, 0)?;
                step_circuit.get_or_insert(c);
            } else {
                let c = stepper.step(k - 1, cfg.dt())?;
                state = run_statevector(&c, &state)?;
                ref_amps = reference.advance(&ref_amps, spec, cfg.dt(), k - 1)?;
                step_circuit.get_or_insert(c);
            }
        }
        match shots {
            None => circuit.push(stepper.survival(&state)?),
            Some(shots) => {
                let hist = sample_counts(&state, shots, seed ^ ((idx as u64) << 32) ^ k as u64);
                let est = stepper
                    .decoders()?
                    .iter()
                    .map(|d| survival_from_counts(&hist, d))
                    .collect::<Result<Vec<_>>>()?;
                circuit.push(est.iter().map(|e| e.value).collect());
                errors.push(est.iter().map(|e| e.std_error).collect());
            }
        }
        trotter.push(reference.survival(&ref_amps, spec)?);
    }
    let step = match step_circuit {
        Some(c) => c,
        None => Stepper::new(kind, spec).step(0, cfg.dt())?,
    };
    Ok(EncodingSeries {
        kind,
        circuit,
        circuit_error: shots.map(|_| errors),
        exact: exact.to_vec(),
        trotter,
        qubits: step.width(),
        step_gates: step.gate_count(),
        step_multi_qubit_gates: step.multi_qubit_gate_count(),
        step_depth: step.depth(),
    })
}

pub fn run_scenario(cfg: &ScenarioConfig) -> Result<ScenarioReport> {
    cfg.validate()?;
    let spec = cfg.ensemble()?;
    let grid = cfg.time_grid();
    let times: Vec<f64> = grid.iter().map(|&(_, t)| t).collect();
    let exact = exact_series(&spec, &times)?;
    let series = cfg
        .encodings
        .iter()
        .enumerate()
        .map(|(i, &kind)| series_for(cfg, &spec, kind, &exact, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(ScenarioReport {
        name: cfg.name.clone(),
        steps: grid.iter().map(|&(k, _)| k).collect(),
        times,
        n_modes: spec.n_modes(),
        series,
    })
}

/// Full circuit (preparation plus steps) for time point `k` of `kind`.
pub fn circuit_at_step(cfg: &ScenarioConfig, kind: EncodingKind, k: usize) -> Result<Circuit> {
    let spec = cfg.ensemble()?;
    let mut circ = prepare_initial_state(&spec, kind)?;
    let mut stepper = Stepper::new(kind, &spec);
    if cfg.single_step {
        if k > 0 {
            circ.append(&stepper.step(0, k as f64 * cfg.dt())?)?;
        }
    } else {
        for s in 0..k {
            circ.append(&stepper.step(s, cfg.dt())?)?;
        }
    }
    Ok(circ)
}

/// `(file name, QASM text)` for every encoding and time point `1…n_steps`,
/// named `<scenario>_<encoding>_step<k>.qasm`.
pub fn export_scenario_qasm(cfg: &ScenarioConfig) -> Result<Vec<(String, String)>> {
    cfg.validate()?;
    let mut files = Vec::new();
    for &kind in &cfg.encodings {
        for k in 1..=cfg.n_steps {
            let circ = circuit_at_step(cfg, kind, k)?;
            files.push((format!("{}_{}_step{k}.qasm", cfg.name, kind), export_qasm(&circ)));
        }
    }
    Ok(files)
}

/// Per-encoding summary printed by `compare`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub kind: EncodingKind,
    pub qubits: usize,
    pub step_gates: usize,
    pub step_multi_qubit_gates: usize,
    pub step_depth: usize,
    pub trotter_order: TrotterOrder,
    pub max_dev_exact: f64,
    pub max_dev_trotter: f64,
    /// `max|circuit − exact|` at `n_steps` over the same at `2 n_steps`,
    /// on the shared time points. Absent for single-step sweeps and
    /// sampled runs.
    pub halving_ratio: Option<f64>,
}

fn max_dev(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(x, y)| x.iter().zip(y).map(|(p, q)| (p - q).abs()))
        .fold(0.0, f64::max)
}

pub fn compare_scenario(cfg: &ScenarioConfig) -> Result<Vec<ComparisonRow>> {
    let report = run_scenario(cfg)?;
    let refined = if cfg.single_step || cfg.shots.is_some() {
        None
    } else {
        let mut fine = cfg.clone();
        fine.n_steps *= 2;
        Some(run_scenario(&fine)?)
    };
    Ok(report
        .series
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let coarse = max_dev(&s.circuit, &s.exact);
            let halving_ratio = refined.as_ref().filter(|_| coarse > 1e-12).map(|r| {
                let f = &r.series[i];
                let even = |v: &[Vec<f64>]| v.iter().step_by(2).cloned().collect::<Vec<_>>();
                coarse / max_dev(&even(&f.circuit), &even(&f.exact))
            });
            ComparisonRow {
                kind: s.kind,
                qubits: s.qubits,
                step_gates: s.step_gates,
                step_multi_qubit_gates: s.step_multi_qubit_gates,
                step_depth: s.step_depth,
                trotter_order: s.kind.trotter_order(),
                max_dev_exact: coarse,
                max_dev_trotter: max_dev(&s.circuit, &s.trotter),
                halving_ratio,
            }
        })
        .collect())
}

/// Plain-text table of [`compare_scenario`] output.
pub fn format_comparison(rows: &[ComparisonRow]) -> String {
    let mut out = format!(
        "{:<16} {:>6} {:>8} {:>8} {:>7} {:>6} {:>12} {:>12} {:>8}\n",
        "encoding", "qubits", "gates", "2q+", "depth", "order", "max|c-ex|", "max|c-tr|", "ratio"
    );
    for r in rows {
        let ratio = r.halving_ratio.map_or("-".to_string(), |x| format!("{x:.3}"));
        let order = match r.trotter_order {
            TrotterOrder::First => "1st",
            TrotterOrder::Second => "2nd",
        };
        let _ = writeln!(
            out,
            "{:<16} {:>6} {:>8} {:>8} {:>7} {:>6} {:>12.3e} {:>12.3e} {:>8}",
            r.kind.name(),
            r.qubits,
            r.step_gates,
            r.step_multi_qubit_gates,
            r.step_depth,
            order,
            r.max_dev_exact,
            r.max_dev_trotter,
            ratio
        );
    }
    out
}
