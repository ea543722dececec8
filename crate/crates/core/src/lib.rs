//! Pseudo-density matrices for timelike-separated quantum systems and the
//! mutual information built from the Hermitian entropy S(X) = −Tr[X log₂|X|].

pub mod bayes;
pub mod capacity;
pub mod channel;
pub mod entropy;
pub mod error;
pub mod holevo;
pub mod linalg;
pub mod nelder_mead;
pub mod pauli;
pub mod pdm;
pub mod random;
pub mod reproduce;
pub mod state;
pub mod svd;
pub mod theorems;

pub use channel::{CanonicalForm, PauliTransfer, QuantumChannel};
pub use entropy::{hermitian_entropy, majorizes, mutual_information, shannon_entropy, ProbabilityVector};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, HermitianOperator, Spectrum, C64};
pub use pauli::PauliString;
pub use pdm::{multi_time_pdm, pdm_from_expectations, star_product, two_time_expectation, Pdm};
pub use state::DensityMatrix;
