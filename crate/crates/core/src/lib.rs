//! Longest weakly increasing subsequences of binary Markov random words.
//!
//! The crate is organised bottom-up:
//!
//! - [`chain`]: the two-state chain, word sampling and the exact moment formulas
//!   for the letter-difference walk `S_k`.
//! - [`lis`]: three independent ways of computing `LI_n` (exhaustive, patience,
//!   and the walk-maximum identity) plus the RSK shape of a word.
//! - [`laws`]: the limiting distributions of the centred and scaled `LI_n`,
//!   their densities, CDFs and samplers, and the drifted-maximum tail bound.
//! - [`montecarlo`]: repeated-trial experiments and Kolmogorov–Smirnov machinery.
//! - [`cli`]: the command-line front end and its output schema.

// `!(x > 0.0)` is used deliberately so that NaN is rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chain;
pub mod cli;
pub mod error;
pub mod laws;
pub mod lis;
pub mod montecarlo;
pub mod quad;
pub mod rng;

pub use chain::{ChainParams, DerivedParams, InitialDistribution, Word};
pub use error::{Error, Result};
pub use laws::{Asymptotics, GuePerturbation, LimitLaw};
pub use lis::{LatticeWalk, YoungShape};
pub use montecarlo::{EmpiricalDistribution, ExperimentConfig, ExperimentKind, KsResult};
