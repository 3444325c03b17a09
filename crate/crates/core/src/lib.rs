//! Analysis of quantum boolean functions: Pauli Fourier transforms,
//! property tests, Goldreich-Levin learning, noise and hypercontractivity,
//! influences, FKN diagnostics and spin-chain dynamics.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`). Qubit 0 is the
//! most significant tensor factor.

pub mod build;
pub mod dynamics;
pub mod error;
pub mod fkn;
pub mod format;
pub mod influence;
pub mod learning;
pub mod noise;
pub mod pauli;
pub mod random;
pub mod scalar;
pub mod testing;

pub use error::{Error, Result};
pub use pauli::{DenseOperator, Pauli, PauliString, Spectrum};
pub use scalar::Real;

pub type Operator64 = DenseOperator<f64>;
pub type Operator32 = DenseOperator<f32>;
pub type Spectrum64 = Spectrum<f64>;
pub type Spectrum32 = Spectrum<f32>;
pub type Chain64 = dynamics::ChainHamiltonian<f64>;
pub type Chain32 = dynamics::ChainHamiltonian<f32>;
