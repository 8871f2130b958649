//! Small dense complex matrices: Hermitian generators, unitaries and the
//! qubit-embedding helpers shared by the oracles and the circuit backend.
//!
//! Qubit `q` is bit `q` of a basis-state index (little-endian).

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Tolerance used when validating Hermitian input.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// A Hermitian matrix, validated on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseHermitian(CMatrix);

impl DenseHermitian {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                got: matrix.ncols(),
            });
        }
        let dev = hermiticity_deviation(&matrix);
        let scale = max_abs(&matrix).max(1.0);
        if dev > HERMITIAN_TOL * scale {
            return Err(Error::NotHermitian(dev));
        }
        Ok(Self(matrix))
    }

    /// Builds from a real symmetric matrix given as rows.
    pub fn from_real(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let m = CMatrix::from_fn(n, n, |r, c| Complex64::new(rows[r][c], 0.0));
        Self::new(m)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(CMatrix::zeros(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    /// Sum of two Hermitian matrices of equal dimension.
    pub fn add(&self, other: &DenseHermitian) -> Result<DenseHermitian> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(Self(&self.0 + &other.0))
    }

    pub fn scale(&self, factor: f64) -> DenseHermitian {
        Self(&self.0 * Complex64::new(factor, 0.0))
    }

    /// Expectation value `<psi|H|psi>` (real part).
    pub fn expectation(&self, psi: &[Complex64]) -> f64 {
        let v = nalgebra::DVector::from_column_slice(psi);
        let hv = &self.0 * &v;
        v.dotc(&hv).re
    }

    /// Restriction `P^† H P` onto the span of the given orthonormal columns.
    pub fn project(&self, basis: &CMatrix) -> Result<DenseHermitian> {
        if basis.nrows() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: basis.nrows(),
            });
        }
        let reduced = basis.adjoint() * &self.0 * basis;
        DenseHermitian::new(symmetrize(reduced))
    }
}

/// A unitary matrix. Construction is unchecked; use [`DenseUnitary::unitarity_residual`].
#[derive(Debug, Clone, PartialEq)]
pub struct DenseUnitary(CMatrix);

impl DenseUnitary {
    pub fn from_matrix(matrix: CMatrix) -> Self {
        Self(matrix)
    }

    pub fn identity(dim: usize) -> Self {
        Self(CMatrix::identity(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    /// `self` applied after `first`, i.e. the matrix product `self · first`.
    pub fn after(&self, first: &DenseUnitary) -> DenseUnitary {
        Self(&self.0 * &first.0)
    }

    pub fn adjoint(&self) -> DenseUnitary {
        Self(self.0.adjoint())
    }

    pub fn apply(&self, psi: &[Complex64]) -> Vec<Complex64> {
        let v = nalgebra::DVector::from_column_slice(psi);
        (&self.0 * v).as_slice().to_vec()
    }

    /// `max |U^†U - 1|` over entries.
    pub fn unitarity_residual(&self) -> f64 {
        let n = self.dim();
        let p = self.0.adjoint() * &self.0;
        max_abs(&(p - CMatrix::identity(n, n)))
    }
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn hermiticity_deviation(m: &CMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

fn symmetrize(m: CMatrix) -> CMatrix {
    let adj = m.adjoint();
    (m + adj) * Complex64::new(0.5, 0.0)
}

/// `|tr(U^† V)| / dim`; equals 1 iff `V = e^{iφ} U` for unitary inputs.
pub fn phase_fidelity(u: &CMatrix, v: &CMatrix) -> f64 {
    assert_eq!(u.shape(), v.shape(), "shape mismatch");
    let tr: Complex64 = u.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
    tr.norm() / u.nrows() as f64
}

/// Maximal entrywise deviation after removing the best global phase.
pub fn phase_aligned_diff(u: &CMatrix, v: &CMatrix) -> f64 {
    let tr: Complex64 = u.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
    let phase = if tr.norm() > 0.0 { tr / tr.norm() } else { ONE };
    max_abs_diff(&(u * phase), v)
}

/// Whether two unitaries agree up to a global phase within `tol`.
pub fn equal_up_to_phase(u: &CMatrix, v: &CMatrix, tol: f64) -> bool {
    u.shape() == v.shape() && phase_aligned_diff(u, v) <= tol
}

/// Distance between two states after removing the global phase,
/// `sqrt(2 - 2|<a|b>|)`.
pub fn state_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let overlap: Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    (2.0 - 2.0 * overlap.norm()).max(0.0).sqrt()
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Single-qubit Pauli matrix by letter index: 0 = I, 1 = X, 2 = Y, 3 = Z.
pub fn pauli_matrix(letter: usize) -> CMatrix {
    match letter {
        0 => CMatrix::identity(2, 2),
        1 => CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        2 => CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]),
        3 => CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
        _ => panic!("Pauli letter index {letter} out of range"),
    }
}

/// Embeds `op` acting on `qubits` (local bit k ↔ `qubits[k]`) into an
/// `n_qubits` register.
pub fn embed(op: &CMatrix, qubits: &[usize], n_qubits: usize) -> CMatrix {
    let k = qubits.len();
    assert_eq!(op.nrows(), 1 << k, "operator size does not match qubit count");
    let dim = 1usize << n_qubits;
    let mask: usize = qubits.iter().map(|&q| 1usize << q).sum();
    let scatter = |local: usize| -> usize {
        qubits
            .iter()
            .enumerate()
            .filter(|(b, _)| (local >> b) & 1 == 1)
            .map(|(_, &q)| 1usize << q)
            .sum()
    };
    let offsets: Vec<usize> = (0..1usize << k).map(scatter).collect();
    let mut out = CMatrix::zeros(dim, dim);
    for rest in 0..dim {
        if rest & mask != 0 {
            continue;
        }
        for (c, &oc) in offsets.iter().enumerate() {
            for (r, &or) in offsets.iter().enumerate() {
                let v = op[(r, c)];
                if v != ZERO {
                    out[(rest | or, rest | oc)] += v;
                }
            }
        }
    }
    out
}

/// Permutation matrix sending basis state `j` to `perm[j]`.
pub fn permutation_matrix(perm: &[usize]) -> CMatrix {
    let n = perm.len();
    let mut m = CMatrix::zeros(n, n);
    for (j, &i) in perm.iter().enumerate() {
        m[(i, j)] = ONE;
    }
    m
}

/// Basis permutation induced by relabelling qubits: logical qubit `l` of the
/// input ends up on physical qubit `map[l]`.
pub fn qubit_permutation(map: &[usize]) -> Vec<usize> {
    let n = map.len();
    (0..1usize << n)
        .map(|idx| {
            map.iter()
                .enumerate()
                .filter(|(l, _)| (idx >> l) & 1 == 1)
                .map(|(_, &p)| 1usize << p)
                .sum()
        })
        .collect()
}

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}
