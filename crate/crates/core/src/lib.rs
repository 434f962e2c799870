//! Asymptotic enumeration of 2-connected and 2-edge-connected labelled
//! graphs with `n` vertices and `m` edges, plus the machinery to check the
//! formulas at desk scale: exhaustive enumeration for tiny cases and Monte
//! Carlo simulation of the pairing and kernel configuration models.
//!
//! Module map:
//!
//! - [`numeric`]: the `λ_c` root solver, truncated Poisson distribution,
//!   derived model parameters and log-space helpers.
//! - [`formulas`]: log-space evaluators for every counting formula.
//! - [`graphs`]: labelled multigraphs, 2-core / pre-kernel / kernel
//!   extraction and connectivity predicates.
//! - [`models`]: pairing and kernel configuration samplers, truncated
//!   Poisson degree sequences, typical-set classification.
//! - [`oracle`]: exact counts by brute force.
//! - [`mc`]: batched, seed-reproducible Monte Carlo estimators.
//! - [`cli`]: the `biconn` command line front end.

pub mod cli;
pub mod error;
pub mod exec;
pub mod formulas;
pub mod graphs;
pub mod mc;
pub mod models;
pub mod numeric;
pub mod oracle;

pub use error::{Error, Result};
pub use graphs::{DegreeSequence, Multigraph};
pub use numeric::{LogReal, ModelParams};
