//! Active-space effective Hamiltonians and their solvers.
//!
//! The crate covers the desk-scale version of a quantum-embedding workflow:
//!
//! * [`integrals`]: one- and two-body coefficients of an active-space
//!   Hamiltonian, FCIDUMP interchange and core folding.
//! * [`screening`]: static constrained-RPA screening of a model host and
//!   projection of the screened interaction onto active orbitals.
//! * [`fci`]: exact diagonalization in the Slater-determinant basis.
//! * [`qubits`]: Pauli algebra, Jordan-Wigner / parity / Bravyi-Kitaev
//!   encodings and parity tapering.
//! * [`vqe`]: UCCSD ansatz, statevector and finite-shot backends and the
//!   variational loop.

pub mod error;
pub mod fci;
pub mod integrals;
pub mod qubits;
pub mod screening;
pub mod testing;
pub mod units;
pub mod vqe;

pub use error::{Error, Result};
pub use fci::{CiVector, DeterminantBasis, FciMethod, SlaterDeterminant, Spectrum};
pub use integrals::{ActiveSpace, OrbitalIntegrals, SymmetryReport};
pub use qubits::{Encoding, PauliOperator, PauliString, QubitMapping};
pub use screening::{DoubleCounting, ModelHost, Polarizability, ScreenedInteraction};
pub use vqe::{Statevector, UccsdAnsatz, VqeTrace};



