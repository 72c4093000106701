//! Dynamically generated noiseless subsystems.
//!
//! Bang-bang decoupling with a finite group `G` replaces a system Hamiltonian
//! by its group average, which lives in the commutant of `G`. The state space
//! then splits as `H = (+)_J C_J (x) D_J`, with `G` acting only on the `D_J`
//! factors and the commutant acting only on the `C_J` factors. This crate
//! builds the groups, computes the algebras and the decomposition, decides
//! which factors are noiseless for a given error space, and simulates the
//! decoupling cycles and encoded gates against an explicit spin bath.
//!
//! The numerical core is generic over the real scalar ([`Real`], implemented
//! for `f32` and `f64`); the `*64` aliases below are what the CLI uses.

pub mod dynamics;
pub mod encoded;
pub mod error;
pub mod group;
pub mod linalg;
pub mod pauli;
pub mod scalar;
pub mod subsystem;

pub use error::{Error, Result};
pub use pauli::{PauliString, Phase};
pub use scalar::{Complex, NumericPolicy, Real};

pub type Operator64 = linalg::Operator<f64>;
pub type Operator32 = linalg::Operator<f32>;
pub type StateVector64 = linalg::StateVector<f64>;
pub type StateVector32 = linalg::StateVector<f32>;
pub type DecouplingGroup64 = group::DecouplingGroup<f64>;
pub type DecouplingGroup32 = group::DecouplingGroup<f32>;
pub type AlgebraBasis64 = group::AlgebraBasis<f64>;
pub type SubsystemDecomposition64 = subsystem::SubsystemDecomposition<f64>;
pub type NoiseModel64 = dynamics::NoiseModel<f64>;
pub type CycleSchedule64 = dynamics::CycleSchedule<f64>;
