//! su(2) algebra on Dicke multiplets and the maps between Dicke states and
//! symmetric qubit states.
//!
//! A multiplet of `N` spin-½ particles is indexed by `j = m + S`,
//! `j ∈ {0, …, N}`, `S = N/2`.

use crate::linalg::{c, kron, CMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LadderDirection {
    Raise,
    Lower,
}

/// `√(S(S+1) − m(m±1))`, or 0 when the transition leaves `[−S, S]`.
pub fn ladder_coefficient(s: f64, m: f64, direction: LadderDirection) -> f64 {
    const EPS: f64 = 1e-9;
    if m.abs() > s + EPS {
        return 0.0;
    }
    let target = match direction {
        LadderDirection::Raise => m + 1.0,
        LadderDirection::Lower => m - 1.0,
    };
    if target.abs() > s + EPS {
        return 0.0;
    }
    let shift = match direction {
        LadderDirection::Raise => m * (m + 1.0),
        LadderDirection::Lower => m * (m - 1.0),
    };
    (s * (s + 1.0) - shift).max(0.0).sqrt()
}

/// Coefficient of `|k+1⟩⟨k|` in `S⁺` for a register holding a multiplet of
/// `n` particles.
pub fn raise_coefficient(n: usize, k: usize) -> f64 {
    let s = n as f64 / 2.0;
    ladder_coefficient(s, k as f64 - s, LadderDirection::Raise)
}

/// `S_z`, `S⁺`, `S⁻` (real) on one multiplet of `n` particles.
#[derive(Debug, Clone)]
pub struct SpinOps {
    pub sz: CMatrix,
    pub splus: CMatrix,
    pub sminus: CMatrix,
}

impl SpinOps {
    pub fn new(n: usize) -> Self {
        let dim = n + 1;
        let s = n as f64 / 2.0;
        let sz = CMatrix::from_fn(dim, dim, |r, col| if r == col { c(r as f64 - s) } else { c(0.0) });
        let splus = CMatrix::from_fn(dim, dim, |r, col| {
            if r == col + 1 {
                c(raise_coefficient(n, col))
            } else {
                c(0.0)
            }
        });
        let sminus = splus.transpose();
        Self { sz, splus, sminus }
    }

    pub fn sx(&self) -> CMatrix {
        (&self.splus + &self.sminus) * c(0.5)
    }

    pub fn sy(&self) -> CMatrix {
        (&self.splus - &self.sminus) * num_complex::Complex64::new(0.0, -0.5)
    }

    pub fn dim(&self) -> usize {
        self.sz.nrows()
    }
}

/// Which single-qubit state plays the role of spin-up in the Dicke basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DickeFrame {
    /// `|0⟩` is spin-up (`σ_z = +1`): `j` counts qubits in `|0⟩`.
    #[default]
    Spin,
    /// `|1⟩` is spin-up: `j` equals the Hamming weight of the bitstring.
    /// This is the frame used by the register encoders.
    Register,
}

/// Columns are the `n + 1` Dicke states of `n` qubits, as `2^n` vectors with
/// non-negative entries.
pub fn dicke_embedding(n: usize, frame: DickeFrame) -> CMatrix {
    let dim = 1usize << n;
    let mut e = CMatrix::zeros(dim, n + 1);
    let mut counts = vec![0usize; n + 1];
    for idx in 0..dim {
        counts[idx.count_ones() as usize] += 1;
    }
    for idx in 0..dim {
        let w = idx.count_ones() as usize;
        let j = match frame {
            DickeFrame::Register => w,
            DickeFrame::Spin => n - w,
        };
        e[(idx, j)] = c(1.0 / (counts[w] as f64).sqrt());
    }
    e
}

/// Embedding of the product Dicke space `⊗_i span{|j_i⟩}` into the qubit
/// space with mode 0 on the lowest qubits. The product index is
/// `Σ_i j_i · Π_{l<i} (N_l + 1)`.
pub fn product_dicke_embedding(sizes: &[usize], frame: DickeFrame) -> CMatrix {
    sizes.iter().fold(CMatrix::identity(1, 1), |acc, &n| {
        kron(&dicke_embedding(n, frame), &acc)
    })
}

/// Embeds an operator on mode `mode` into the product space of multiplets
/// with the given dimensions.
pub fn embed_mode(op: &CMatrix, mode: usize, dims: &[usize]) -> CMatrix {
    dims.iter().enumerate().fold(CMatrix::identity(1, 1), |acc, (i, &d)| {
        let factor = if i == mode { op.clone() } else { CMatrix::identity(d, d) };
        kron(&factor, &acc)
    })
}
