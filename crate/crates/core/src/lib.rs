//! Time-slotted wireless link scheduling under the SINR physical
//! interference model.
//!
//! The crate is organised bottom-up:
//!
//! - [`geometry`]: points, links, topologies, and the shifted grid partition
//!   (cells, super-subSquares, sub-squares, removed strips).
//! - [`interference`]: transmit powers, cumulative interference, SINR,
//!   affectness, p-signal sets and their refinement.
//! - [`mwisl`]: local maximum-weighted independent set of links solvers and
//!   the cardinality / separation-margin calculators.
//! - [`scheduler`]: the localized pick-and-compare step plus the centralized
//!   greedy (GMS) and random (RA) baselines.
//! - [`traffic`]: Poisson arrivals, queue dynamics, backlog metrics.
//! - [`harness`]: topology generation, experiment runs, audits, rate sweeps,
//!   configuration and CSV output.
//!
//! The `examples/` directory holds one runnable program per capability, and
//! the `linksched` binary exposes the experiment harness on the command line.

pub mod error;
pub mod geometry;
pub mod harness;
pub mod interference;
pub mod mwisl;
pub mod scheduler;
pub mod traffic;

pub use error::{Error, Result};
pub use geometry::{Link, LinkId, NetworkTopology, Point2D};
pub use interference::{PowerModel, Schedule, SinrModel, SinrParams};
