//! Exact evolution `exp(−iHt)` by eigendecomposition, plus the exact
//! products of Trotter factors that the circuit builders approximate.

mod trotter;

use std::collections::BTreeMap;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, DenseHermitian, DenseUnitary};
use crate::physics::TridiagonalHermitian;
use crate::state::StateVector;

pub use trotter::{
    brick_wall_layers, conventional_schedule, diagonal_trotter_reference, dicke_trotter_reference, trotter_reference,
    trotter_reference_state, trotter_reference_state_from, ScheduledPair, TrotterOrder, MAX_DENSE_REFERENCE_QUBITS,
};

/// Norm drift tolerated along an exact trajectory.
pub const NORM_DRIFT_TOL: f64 = 1e-9;

/// Eigendecomposition of a Hermitian generator, reusable for any `t`.
#[derive(Debug, Clone)]
pub struct Propagator {
    vectors: CMatrix,
    values: Vec<f64>,
}

impl Propagator {
    pub fn new(h: &DenseHermitian) -> Self {
        let eig = h.matrix().clone().symmetric_eigen();
        Self {
            vectors: eig.eigenvectors,
            values: eig.eigenvalues.iter().copied().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.values
    }

    fn phases(&self, t: f64) -> Vec<Complex64> {
        self.values
            .iter()
            .map(|&e| Complex64::from_polar(1.0, -e * t))
            .collect()
    }

    /// `exp(−iHt)`.
    pub fn unitary(&self, t: f64) -> DenseUnitary {
        let phases = self.phases(t);
        let mut scaled = self.vectors.clone();
        for (j, p) in phases.iter().enumerate() {
            scaled.column_mut(j).iter_mut().for_each(|x| *x *= p);
        }
        DenseUnitary::from_matrix(scaled * self.vectors.adjoint())
    }

    /// `exp(−iHt) ψ` without forming the unitary.
    pub fn apply(&self, t: f64, psi: &[Complex64]) -> Vec<Complex64> {
        let v = DVector::from_column_slice(psi);
        let mut coeffs = self.vectors.ad_mul(&v);
        for (c, p) in coeffs.iter_mut().zip(self.phases(t)) {
            *c *= p;
        }
        (&self.vectors * coeffs).as_slice().to_vec()
    }
}

/// `exp(−iHt)` via eigendecomposition of `H`.
pub fn matrix_exponential(h: &DenseHermitian, t: f64) -> DenseUnitary {
    Propagator::new(h).unitary(t)
}

/// Like [`matrix_exponential`] for an unvalidated matrix; rejects
/// non-Hermitian input.
pub fn expm_hermitian(matrix: &CMatrix, t: f64) -> Result<DenseUnitary> {
    Ok(matrix_exponential(&DenseHermitian::new(matrix.clone())?, t))
}

/// Generator accepted by [`evolve_exact`].
#[derive(Debug, Clone, Copy)]
pub enum Generator<'a> {
    Dense(&'a DenseHermitian),
    Tridiagonal(&'a TridiagonalHermitian),
}

impl<'a> From<&'a DenseHermitian> for Generator<'a> {
    fn from(h: &'a DenseHermitian) -> Self {
        Generator::Dense(h)
    }
}

impl<'a> From<&'a TridiagonalHermitian> for Generator<'a> {
    fn from(h: &'a TridiagonalHermitian) -> Self {
        Generator::Tridiagonal(h)
    }
}

/// Sampled evolution with optional named observables.
#[derive(Debug, Clone, Default)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<StateVector>,
    pub observables: BTreeMap<String, Vec<f64>>,
}

impl Trajectory {
    /// Evaluates `f` on every state and stores the series under `name`.
    pub fn record(&mut self, name: impl Into<String>, f: impl Fn(&StateVector) -> f64) -> &[f64] {
        let series: Vec<f64> = self.states.iter().map(f).collect();
        let name = name.into();
        self.observables.insert(name.clone(), series);
        &self.observables[&name]
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// `states[k] = exp(−iH times[k]) ψ₀`.
pub fn evolve_exact<'a>(h: impl Into<Generator<'a>>, psi0: &StateVector, times: &[f64]) -> Result<Trajectory> {
    let dense;
    let h = match h.into() {
        Generator::Dense(h) => h,
        Generator::Tridiagonal(t) => {
            dense = t.to_dense();
            &dense
        }
    };
    if h.dim() != psi0.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            got: psi0.dim(),
        });
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidScenario("times must be strictly increasing".into()));
    }
    let prop = Propagator::new(h);
    let states = times
        .iter()
        .map(|&t| psi0.with_amplitudes(prop.apply(t, psi0.amplitudes())))
        .collect::<Vec<_>>();
    if let Some(bad) = states.iter().find(|s| (s.norm() - 1.0).abs() > NORM_DRIFT_TOL) {
        return Err(Error::InvalidEnsemble(format!(
            "norm drifted to {} during exact evolution",
            bad.norm()
        )));
    }
    Ok(Trajectory {
        times: times.to_vec(),
        states,
        observables: BTreeMap::new(),
    })
}
