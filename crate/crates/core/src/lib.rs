//! Quantum-correlation measures and the key-rate bounds they certify.
//!
//! The crate is organized in three layers:
//!
//! * **Finite-dimensional states** ([`qmat`], [`info`]): validated density
//!   matrices with entropy, mutual information, Holevo information,
//!   classical correlations extractable by local projective measurement,
//!   and the discord left over.
//! * **Operational protocols** ([`game`]): the channel-guessing game that
//!   splits mutual information into classically and quantumly accessible
//!   parts, and a sampled certification protocol that detects entangling
//!   measurements from guess transcripts alone.
//! * **Continuous-variable bounds** ([`gaussian`], [`keyrates`]): Gaussian
//!   states under loss, their measurement-optimized discord, and
//!   reverse-reconciliation key-rate bounds approaching the repeaterless
//!   capacity `-log2(1 - eta)`.
//!
//! The [`sample`] module provides seeded random instances of all of the
//! above for property tests and benchmarks.

pub mod error;
pub mod game;
pub mod gaussian;
pub mod info;
pub mod keyrates;
mod optim;
pub mod qmat;
pub mod sample;

pub use error::Error;
pub use game::{CertificationReport, CertifyStrategy, EncodingEnsemble, GameReport};
pub use gaussian::{GaussianDiscord, GaussianState, LossyChannel};
pub use info::{CorrelationReport, MeasurementBasis};
pub use keyrates::{RateReport, StateRep, TripartitePartition};
pub use qmat::{QState, UnitaryOp};
