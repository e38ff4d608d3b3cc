//! Bell-type separability inequalities for qubit-qudit systems.
//!
//! The crate evaluates, for a density matrix on `H_2 ⊗ H_d`, a family of
//! inequalities built from local observables `A_i = U σ_i U†` and
//! `B_j = V λ_j V†`. Every separable state satisfies them and every state
//! with a non-positive partial transpose violates at least one of them.
//!
//! Layout:
//!
//! - [`linalg`]: dense complex matrices, Kronecker products and a Jacobi
//!   eigensolver for Hermitian matrices.
//! - [`state`]: validated density matrices and pure states, partial
//!   transpose, partial trace and Schmidt decomposition.
//! - [`observables`]: Pauli and `λ_j` generators, unitary parameterization,
//!   observable sets.
//! - [`inequality`]: exact evaluation of the inequality, witness values and
//!   the detector seeded by the most negative partial-transpose eigenvector.
//! - [`criteria`]: PPT, realignment (CCNR), reduction and majorization.
//! - [`catalog`]: the state families used throughout plus random generators.
//! - [`optimizer`]: multi-start simplex search for the maximal violation.
//! - [`measurement`]: shot-noise simulation of the three local settings.
//! - [`io`]: the JSON state file and CSV scan formats.

pub mod catalog;
pub mod criteria;
pub mod error;
pub mod inequality;
pub mod io;
pub mod linalg;
pub mod measurement;
pub mod observables;
pub mod optimizer;
pub mod rng;
pub mod state;
pub mod tolerances;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, C64};
pub use observables::{ObservableSet, Orientation, UnitaryPair};
pub use state::{DensityMatrix, PureState, Subsystem};
