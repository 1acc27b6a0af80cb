//! The SPARC (sparsity and clustering) regularizer: a K-sparse constraint
//! plus a pairwise l-infinity penalty on the K largest entries.
//!
//! - [`prox`]: proximity operators and penalties for LASSO, elastic net,
//!   OSCAR and SPARC.
//! - [`solver`]: SpaRSA for penalized least squares.
//! - [`data`], [`metrics`], [`experiment`]: benchmark pipelines.
//! - [`cli`]: the `sparc` command-line tool.

pub mod cli;
pub mod data;
pub mod error;
pub mod experiment;
pub mod metrics;
pub mod prox;
pub mod solver;

pub use error::{Result, SparcError};
pub use prox::{Method, Regularizer};
pub use solver::{sparsa_solve, Objective, SolverConfig, SolverResult};
