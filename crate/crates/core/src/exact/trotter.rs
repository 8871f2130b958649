//! Exact products of Trotter factors, in the order the circuit builders use.
//!
//! The conventional step runs `N` brick-wall layers of nearest-neighbour
//! pair gates. Each pair gate exchanges the two logical qubits it acts on,
//! so one step reverses the logical order and every logical pair meets
//! exactly once. The pair factor is
//! `e^{−i v_pq dt/2} e^{−i J_pq σ·σ dt} e^{−i v_pq dt/2}` with the vacuum share
//! `v_pq = ½(b_p·σ_p + b_q·σ_q)/(N − 1)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix_exponential;
use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix, DenseHermitian, DenseUnitary, ZERO};
use crate::physics::hamiltonian::{build_pair_term, heisenberg_exchange};
use crate::physics::spin::raise_coefficient;
use crate::physics::{build_diagonal_subspace_hamiltonian, Caps, EnsembleSpec};

/// Largest qubit count for which [`trotter_reference`] forms a dense matrix.
pub const MAX_DENSE_REFERENCE_QUBITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrotterOrder {
    First,
    #[default]
    Second,
}

/// Lower physical index `i` of every pair `(i, i+1)` in each of the `n`
/// layers of step number `step`. Layer `L` uses `i ≡ L + step·(n−1) (mod 2)`,
/// so consecutive steps run the same layers in opposite order.
pub fn brick_wall_layers(n: usize, step: usize) -> Vec<Vec<usize>> {
    let offset = step * n.saturating_sub(1);
    (0..n)
        .map(|layer| ((layer + offset) % 2..n.saturating_sub(1)).step_by(2).collect())
        .collect()
}

/// One SWAP-fused pair gate of a conventional step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScheduledPair {
    pub layer: usize,
    /// Physical qubit `i`; the gate acts on `(i, i+1)`.
    pub position: usize,
    /// Logical qubit sitting on `i` before the gate.
    pub lower: usize,
    /// Logical qubit sitting on `i + 1` before the gate.
    pub upper: usize,
}

impl ScheduledPair {
    /// The logical pair ordered as `(p, q)` with `p < q`.
    pub fn logical(&self) -> (usize, usize) {
        (self.lower.min(self.upper), self.lower.max(self.upper))
    }
}

/// Pair gates of step number `step` starting from `start_map`
/// (`start_map[l]` is the physical position of logical qubit `l`), and the
/// map after the step.
pub fn conventional_schedule(start_map: &[usize], step: usize) -> (Vec<ScheduledPair>, Vec<usize>) {
    let n = start_map.len();
    let mut at = vec![0usize; n];
    for (l, &p) in start_map.iter().enumerate() {
        at[p] = l;
    }
    let mut pairs = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for (layer, positions) in brick_wall_layers(n, step).into_iter().enumerate() {
        for i in positions {
            pairs.push(ScheduledPair {
                layer,
                position: i,
                lower: at[i],
                upper: at[i + 1],
            });
            at.swap(i, i + 1);
        }
    }
    let mut map = vec![0usize; n];
    for (p, &l) in at.iter().enumerate() {
        map[l] = p;
    }
    (pairs, map)
}

/// `exp(−iHt)` for a small Hermitian matrix given as a raw matrix.
fn expm(m: CMatrix, t: f64) -> CMatrix {
    matrix_exponential(&DenseHermitian::new(m).expect("Hermitian by construction"), t).into_matrix()
}

fn pair_factor(spec: &EnsembleSpec, p: usize, q: usize, dt: f64, order: TrotterOrder) -> Result<CMatrix> {
    let n = spec.n_modes();
    let term = build_pair_term(p, q, spec, n)?;
    Ok(match order {
        TrotterOrder::First => expm(term.local.into_matrix(), dt),
        TrotterOrder::Second => {
            let exchange = heisenberg_exchange() * c(spec.j(p, q));
            let vacuum = term.local.matrix() - &exchange;
            let half = expm(vacuum, dt / 2.0);
            &half * expm(exchange, dt) * &half
        }
    })
}

/// Applies a 4×4 operator to qubits `(p, q)`; local bit 0 is `p`.
fn apply_two_qubit(amps: &mut [Complex64], op: &CMatrix, p: usize, q: usize) {
    let (mp, mq) = (1usize << p, 1usize << q);
    let mut local = [ZERO; 4];
    for base in 0..amps.len() {
        if base & (mp | mq) != 0 {
            continue;
        }
        let idx = [base, base | mp, base | mq, base | mp | mq];
        for (k, &i) in idx.iter().enumerate() {
            local[k] = amps[i];
        }
        for (r, &i) in idx.iter().enumerate() {
            amps[i] = (0..4).map(|k| op[(r, k)] * local[k]).sum();
        }
    }
}

fn conventional_factors(spec: &EnsembleSpec, dt: f64, order: TrotterOrder) -> Result<Vec<Vec<Option<CMatrix>>>> {
    if !spec.is_per_neutrino() {
        return Err(Error::InvalidEnsemble(
            "conventional Trotter product needs one neutrino per mode".into(),
        ));
    }
    let n = spec.n_modes();
    if n < 2 {
        return Err(Error::TooFewSites(n));
    }
    let mut factors = vec![vec![None; n]; n];
    for p in 0..n {
        for q in (p + 1)..n {
            factors[p][q] = Some(pair_factor(spec, p, q, dt, order)?);
        }
    }
    Ok(factors)
}

fn apply_conventional_steps(
    factors: &[Vec<Option<CMatrix>>],
    steps: std::ops::Range<usize>,
    order: TrotterOrder,
    amps: &mut [Complex64],
) {
    let n = factors.len();
    let mut map: Vec<usize> = (0..n).collect();
    for step in 0..steps.start {
        map = conventional_schedule(&map, step).1;
    }
    for step in steps {
        match order {
            TrotterOrder::Second => {
                let (pairs, next) = conventional_schedule(&map, step);
                for pair in pairs {
                    let (p, q) = pair.logical();
                    apply_two_qubit(amps, factors[p][q].as_ref().unwrap(), p, q);
                }
                map = next;
            }
            TrotterOrder::First => {
                for p in 0..n {
                    for q in (p + 1)..n {
                        apply_two_qubit(amps, factors[p][q].as_ref().unwrap(), p, q);
                    }
                }
            }
        }
    }
}

/// Applies `n_steps` Trotter steps to a state given in the logical qubit
/// order. `Second` uses the symmetric pair factors in network order;
/// `First` uses `exp(−i h_pq dt)` for all pairs in lexicographic order.
pub fn trotter_reference_state(
    spec: &EnsembleSpec,
    dt: f64,
    n_steps: usize,
    order: TrotterOrder,
    psi: &[Complex64],
) -> Result<Vec<Complex64>> {
    trotter_reference_state_from(spec, dt, 0..n_steps, order, psi)
}

/// Applies steps `steps.start..steps.end` only, so a long run can be
/// advanced one step at a time with the same layer order as a single call.
pub fn trotter_reference_state_from(
    spec: &EnsembleSpec,
    dt: f64,
    steps: std::ops::Range<usize>,
    order: TrotterOrder,
    psi: &[Complex64],
) -> Result<Vec<Complex64>> {
    let factors = conventional_factors(spec, dt, order)?;
    let dim = 1usize << spec.n_modes();
    if psi.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: psi.len(),
        });
    }
    let mut amps = psi.to_vec();
    apply_conventional_steps(&factors, steps, order, &mut amps);
    Ok(amps)
}

/// Dense matrix of [`trotter_reference_state`], in the logical qubit order.
pub fn trotter_reference(spec: &EnsembleSpec, dt: f64, n_steps: usize, order: TrotterOrder) -> Result<DenseUnitary> {
    let n = spec.n_modes();
    if n > MAX_DENSE_REFERENCE_QUBITS {
        return Err(Error::DimensionCap {
            what: "dense Trotter reference",
            dim: n,
            cap: MAX_DENSE_REFERENCE_QUBITS,
        });
    }
    let factors = conventional_factors(spec, dt, order)?;
    let dim = 1usize << n;
    let mut u = CMatrix::zeros(dim, dim);
    let mut col = vec![ZERO; dim];
    for j in 0..dim {
        col.iter_mut().for_each(|a| *a = ZERO);
        col[j] = c(1.0);
        apply_conventional_steps(&factors, 0..n_steps, order, &mut col);
        u.column_mut(j).copy_from_slice(&col);
    }
    Ok(DenseUnitary::from_matrix(u))
}

/// Left-multiplies `u` by `exp(−iφ (|a⟩⟨b| + |b⟩⟨a|))`.
fn two_level_rows(u: &mut CMatrix, a: usize, b: usize, phi: f64) {
    let (cs, sn) = (phi.cos(), phi.sin());
    let mis = Complex64::new(0.0, -sn);
    for col in 0..u.ncols() {
        let (x, y) = (u[(a, col)], u[(b, col)]);
        u[(a, col)] = x * cs + y * mis;
        u[(b, col)] = x * mis + y * cs;
    }
}

fn diagonal_rows(u: &mut CMatrix, phase: impl Fn(usize) -> f64) {
    for r in 0..u.nrows() {
        let f = Complex64::from_polar(1.0, -phase(r));
        u.row_mut(r).iter_mut().for_each(|x| *x *= f);
    }
}

/// Dicke-space product of one first-order step, repeated `n_steps` times,
/// in the register frame (value `j_i` counts flipped particles of mode `i`).
///
/// Factor order: for each mode, `exp(−i b'_z S_z dt)` then the two-level
/// pieces of `exp(−i b'_x S_x dt)` for `k = 0…N_i−1`; then for each pair
/// `i < j` with `J_ij ≠ 0`, `exp(−i 4J S_z S_z dt)` followed by the
/// two-level pieces `|a; b⟩ ↔ |a+1; b−1⟩` with `a` outer and `b` inner.
pub fn dicke_trotter_reference(spec: &EnsembleSpec, dt: f64, n_steps: usize) -> Result<DenseUnitary> {
    let sizes: Vec<usize> = spec.modes.iter().map(|m| m.n_particles).collect();
    let mut strides = Vec::with_capacity(sizes.len());
    let mut dim = 1usize;
    for &n in &sizes {
        strides.push(dim);
        dim = dim
            .checked_mul(n + 1)
            .filter(|&d| d <= Caps::default().max_dicke_dim)
            .ok_or(Error::DimensionCap {
                what: "Dicke Trotter reference",
                dim: usize::MAX,
                cap: Caps::default().max_dicke_dim,
            })?;
    }
    let value = |idx: usize, i: usize| (idx / strides[i]) % (sizes[i] + 1);
    let sz = |idx: usize, i: usize| value(idx, i) as f64 - sizes[i] as f64 / 2.0;

    let mut step = CMatrix::identity(dim, dim);
    for i in 0..sizes.len() {
        let b = spec.b_vector(i).flavor_swapped();
        debug_assert!(b.y == 0.0);
        diagonal_rows(&mut step, |r| b.z * dt * sz(r, i));
        for k in 0..sizes[i] {
            let phi = b.x * raise_coefficient(sizes[i], k) * dt / 2.0;
            for idx in (0..dim).filter(|&r| value(r, i) == k) {
                two_level_rows(&mut step, idx, idx + strides[i], phi);
            }
        }
    }
    for i in 0..sizes.len() {
        for j in (i + 1)..sizes.len() {
            let jij = spec.j(i, j);
            if jij == 0.0 {
                continue;
            }
            diagonal_rows(&mut step, |r| 4.0 * jij * dt * sz(r, i) * sz(r, j));
            for a in 0..sizes[i] {
                for bv in 1..=sizes[j] {
                    let phi = 2.0 * jij * dt * raise_coefficient(sizes[i], a) * raise_coefficient(sizes[j], bv - 1);
                    for idx in (0..dim).filter(|&r| value(r, i) == a && value(r, j) == bv) {
                        two_level_rows(&mut step, idx, idx + strides[i] - strides[j], phi);
                    }
                }
            }
        }
    }
    Ok(DenseUnitary::from_matrix(matrix_power(&step, n_steps)))
}

/// `(N+1)`-dimensional product of one first-order diagonal-subspace step
/// `∏_{i=1..N} exp(−i t_i dt X_{i−1,i}) · exp(−i H_D dt)`, repeated.
pub fn diagonal_trotter_reference(n: usize, delta: f64, theta: f64, j: f64, dt: f64, n_steps: usize) -> DenseUnitary {
    let h = build_diagonal_subspace_hamiltonian(n, delta, theta, j);
    let mut step = CMatrix::identity(n + 1, n + 1);
    diagonal_rows(&mut step, |r| h.diagonal[r] * dt);
    for i in 1..=n {
        two_level_rows(&mut step, i - 1, i, h.offdiagonal[i - 1] * dt);
    }
    DenseUnitary::from_matrix(matrix_power(&step, n_steps))
}

fn matrix_power(m: &CMatrix, k: usize) -> CMatrix {
    (0..k).fold(CMatrix::identity(m.nrows(), m.ncols()), |acc, _| m * acc)
}
