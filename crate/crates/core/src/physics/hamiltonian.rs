//! Hamiltonian builders for the three representations: one qubit per
//! neutrino, one Dicke multiplet per mode, and the antidiagonal subspace of
//! a bipolar system.

use num_complex::Complex64;

use super::ensemble::{BVector, EnsembleSpec};
use super::spin::{embed_mode, DickeFrame, SpinOps};
use crate::error::{Error, Result};
use crate::linalg::{c, embed, pauli_matrix, CMatrix, DenseHermitian, ZERO};

/// Size limits that keep the dense oracles at desk scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub max_qubits: usize,
    pub max_dicke_dim: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Self {
            max_qubits: 14,
            max_dicke_dim: 4096,
        }
    }
}

/// `H_q = ½ Σ_p b_p·σ_p + Σ_{p<q} J_pq σ_p·σ_q` on one qubit per neutrino.
pub fn build_qubit_hamiltonian(spec: &EnsembleSpec) -> Result<DenseHermitian> {
    build_qubit_hamiltonian_with(spec, &Caps::default())
}

pub fn build_qubit_hamiltonian_with(spec: &EnsembleSpec, caps: &Caps) -> Result<DenseHermitian> {
    if !spec.is_per_neutrino() {
        return Err(Error::InvalidEnsemble(
            "qubit Hamiltonian needs one particle per mode; expand the ensemble first".into(),
        ));
    }
    let n = spec.n_modes();
    if n > caps.max_qubits {
        return Err(Error::DimensionCap {
            what: "qubit Hamiltonian",
            dim: n,
            cap: caps.max_qubits,
        });
    }
    let dim = 1usize << n;
    let bs: Vec<BVector> = (0..n).map(|p| spec.b_vector(p)).collect();
    let mut h = CMatrix::zeros(dim, dim);
    let z = |s: usize, p: usize| if (s >> p) & 1 == 0 { 1.0 } else { -1.0 };
    for s in 0..dim {
        let mut diag = 0.0;
        for p in 0..n {
            diag += 0.5 * bs[p].z * z(s, p);
            // X and Y flip qubit p; Y|b⟩ = i(−1)^b |1−b⟩.
            let flipped = s ^ (1 << p);
            h[(flipped, s)] += Complex64::new(0.5 * bs[p].x, 0.5 * bs[p].y * z(s, p));
            for q in (p + 1)..n {
                let j = spec.j(p, q);
                if j == 0.0 {
                    continue;
                }
                diag += j * z(s, p) * z(s, q);
                // XX + YY = 2 (|01⟩⟨10| + |10⟩⟨01|) on the pair.
                if z(s, p) != z(s, q) {
                    h[(s ^ (1 << p) ^ (1 << q), s)] += c(2.0 * j);
                }
            }
        }
        h[(s, s)] += c(diag);
    }
    DenseHermitian::new(h)
}

/// `b·σ` as a 2×2 matrix.
pub fn b_dot_sigma(b: BVector) -> CMatrix {
    pauli_matrix(1) * c(b.x) + pauli_matrix(2) * c(b.y) + pauli_matrix(3) * c(b.z)
}

/// `σ·σ` on two qubits.
pub fn heisenberg_exchange() -> CMatrix {
    (1..=3)
        .map(|l| pauli_matrix(l).kronecker(&pauli_matrix(l)))
        .fold(CMatrix::zeros(4, 4), |acc, m| acc + m)
}

/// One term `h_pq` of the pair decomposition, acting on qubits `(p, q)`;
/// local bit 0 is qubit `p`, local bit 1 is qubit `q`.
#[derive(Debug, Clone)]
pub struct PairTerm {
    pub p: usize,
    pub q: usize,
    pub local: DenseHermitian,
}

impl PairTerm {
    pub fn embedded(&self, n_qubits: usize) -> Result<DenseHermitian> {
        DenseHermitian::new(embed(self.local.matrix(), &[self.p, self.q], n_qubits))
    }
}

/// `h_pq = ½(b_p·σ_p + b_q·σ_q)/(n_sites − 1) + J_pq σ_p·σ_q`.
///
/// Each qubit takes part in `n_sites − 1` pairs, so the vacuum field is
/// shared evenly and `Σ_{p<q} h_pq = H_q` when `n_sites` is the number of
/// neutrinos.
pub fn build_pair_term(p: usize, q: usize, spec: &EnsembleSpec, n_sites: usize) -> Result<PairTerm> {
    if n_sites < 2 {
        return Err(Error::TooFewSites(n_sites));
    }
    if p >= q || q >= spec.n_modes() {
        return Err(Error::InvalidEnsemble(format!(
            "pair ({p}, {q}) invalid for {} sites",
            spec.n_modes()
        )));
    }
    let share = 0.5 / (n_sites as f64 - 1.0);
    let id = CMatrix::identity(2, 2);
    let vac_p = id.kronecker(&b_dot_sigma(spec.b_vector(p)));
    let vac_q = b_dot_sigma(spec.b_vector(q)).kronecker(&id);
    let local = (vac_p + vac_q) * c(share) + heisenberg_exchange() * c(spec.j(p, q));
    Ok(PairTerm {
        p,
        q,
        local: DenseHermitian::new(local)?,
    })
}

/// Options for the Dicke-space builder.
#[derive(Debug, Clone, Copy, Default)]
pub struct SpinOptions {
    pub frame: DickeFrame,
    /// Keep `2 Σ_i J_i S_i²`; it is constant on flavour-pure initial states.
    pub include_self_term: bool,
    pub caps: Caps,
}

/// `H_s = Σ_i b_i·S_i + 4 Σ_{i<j} J_ij S_i·S_j` on `⊗_i span{|S_i, m_i⟩}`.
pub fn build_spin_hamiltonian(spec: &EnsembleSpec) -> Result<DenseHermitian> {
    build_spin_hamiltonian_with(spec, &SpinOptions::default())
}

/// Dicke Hamiltonian in the frame used by the register encoders, where the
/// register value of a mode is the number of its qubits in `|1⟩`.
pub fn build_register_hamiltonian(spec: &EnsembleSpec) -> Result<DenseHermitian> {
    build_spin_hamiltonian_with(
        spec,
        &SpinOptions {
            frame: DickeFrame::Register,
            ..SpinOptions::default()
        },
    )
}

pub fn build_spin_hamiltonian_with(spec: &EnsembleSpec, opts: &SpinOptions) -> Result<DenseHermitian> {
    let dims: Vec<usize> = spec.modes.iter().map(|m| m.n_particles + 1).collect();
    let total = dims
        .iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .filter(|&d| d <= opts.caps.max_dicke_dim)
        .ok_or(Error::DimensionCap {
            what: "Dicke Hamiltonian",
            dim: dims.iter().fold(1usize, |a, &d| a.saturating_mul(d)),
            cap: opts.caps.max_dicke_dim,
        })?;
    let ops: Vec<SpinOps> = spec.modes.iter().map(|m| SpinOps::new(m.n_particles)).collect();
    let mut h = CMatrix::zeros(total, total);
    for (i, op) in ops.iter().enumerate() {
        let b = match opts.frame {
            DickeFrame::Spin => spec.b_vector(i),
            DickeFrame::Register => spec.b_vector(i).flavor_swapped(),
        };
        let local = op.sx() * c(b.x) + op.sy() * c(b.y) + &op.sz * c(b.z);
        h += embed_mode(&local, i, &dims);
        if opts.include_self_term {
            let s2 = &op.sz * &op.sz + (&op.splus * &op.sminus + &op.sminus * &op.splus) * c(0.5);
            h += embed_mode(&s2, i, &dims) * c(2.0 * spec.j(i, i));
        }
    }
    for i in 0..ops.len() {
        for j in (i + 1)..ops.len() {
            let jij = spec.j(i, j);
            if jij == 0.0 {
                continue;
            }
            let zz = embed_mode(&ops[i].sz, i, &dims) * embed_mode(&ops[j].sz, j, &dims);
            let pm = embed_mode(&ops[i].splus, i, &dims) * embed_mode(&ops[j].sminus, j, &dims);
            let mp = pm.adjoint();
            h += (zz + (pm + mp) * c(0.5)) * c(4.0 * jij);
        }
    }
    DenseHermitian::new(h)
}

/// Real symmetric tridiagonal matrix; `offdiagonal[k]` links `k` and `k+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalHermitian {
    pub diagonal: Vec<f64>,
    pub offdiagonal: Vec<f64>,
}

impl TridiagonalHermitian {
    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    pub fn to_dense(&self) -> DenseHermitian {
        let n = self.dim();
        let mut m = CMatrix::from_element(n, n, ZERO);
        for (i, &d) in self.diagonal.iter().enumerate() {
            m[(i, i)] = c(d);
        }
        for (k, &t) in self.offdiagonal.iter().enumerate() {
            m[(k, k + 1)] = c(t);
            m[(k + 1, k)] = c(t);
        }
        DenseHermitian::new(m).expect("real symmetric by construction")
    }
}

/// Bipolar Hamiltonian on the antidiagonal states `|m, −m⟩`, `m = i − S`:
/// diagonal `−2Δ cos2θ m − 4J m²`, couplings `t_i = 2J i (N − i + 1)`.
pub fn build_diagonal_subspace_hamiltonian(n: usize, delta: f64, theta: f64, j: f64) -> TridiagonalHermitian {
    let s = n as f64 / 2.0;
    let dc = delta * (2.0 * theta).cos();
    let diagonal = (0..=n)
        .map(|i| {
            let m = i as f64 - s;
            -2.0 * dc * m - 4.0 * j * m * m
        })
        .collect();
    let offdiagonal = (1..=n).map(|i| 2.0 * j * i as f64 * (n - i + 1) as f64).collect();
    TridiagonalHermitian { diagonal, offdiagonal }
}
