//! Constraint-preserving mixer compilation: Pauli decomposition of `E T Eᵀ`,
//! CX cost accounting, Trotterization checks, kernel augmentation and
//! circuit emission.

pub mod augment;
pub mod boolmat;
pub mod circuit;
pub mod cost;
pub mod decompose;
pub mod error;
pub mod pauli;
pub mod scalar;
pub mod simulate;
pub mod subspace;
pub mod tables;
pub mod trotter;

pub use error::{Error, Result};
pub use pauli::{PauliString, PauliSum, Phase};
pub use scalar::Scalar;
pub use subspace::{BasisState, FeasibleSet, TransitionMatrix};

/// Exact dyadic coefficients.
pub type Exact = num_rational::Ratio<i64>;

pub type PauliSumF32 = PauliSum<f32>;
pub type PauliSumF64 = PauliSum<f64>;
pub type PauliSumExact = PauliSum<Exact>;
pub type TransitionMatrixF64 = TransitionMatrix<f64>;
pub type TransitionMatrixExact = TransitionMatrix<Exact>;
pub type PairGroupF64 = decompose::PairGroup<f64>;
