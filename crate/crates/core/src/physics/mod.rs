//! Model definitions: ensembles, su(2) multiplets and Hamiltonians.

pub mod ensemble;
pub mod hamiltonian;
pub mod spin;

pub use ensemble::{coupling_strength, vacuum_b_vector, BVector, EnsembleSpec, Flavor, ModeSpec};
pub use hamiltonian::{
    build_diagonal_subspace_hamiltonian, build_pair_term, build_qubit_hamiltonian, build_qubit_hamiltonian_with,
    build_register_hamiltonian, build_spin_hamiltonian, build_spin_hamiltonian_with, Caps, PairTerm, SpinOptions,
    TridiagonalHermitian,
};
pub use spin::{DickeFrame, SpinOps};
