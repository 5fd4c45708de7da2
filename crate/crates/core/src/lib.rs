//! Dynamical-decoupling sequence synthesis.
//!
//! Pipeline: colour a device interaction hypergraph, collapse it to its
//! quotient over colour classes, pick a decoupling group from an additive code
//! over GF(4), verify which terms it suppresses, and emit a pulse schedule
//! lifted back to physical qubits. A dense-matrix oracle cross-checks the
//! symbolic verdicts at small sizes.

pub mod codes;
pub mod compiler;
pub mod device;
pub mod field;
pub mod io;
pub mod kitaev;
pub mod sequencer;
pub mod sim;

pub use codes::{AdditiveCode, Alphabet, OrthogonalArray};
pub use compiler::{DDGroup, Status, TermSet, Verdict};
pub use device::{Coloring, DeviceGraph, Model, QuotientGraph};
pub use field::{PauliString, F4};
pub use sequencer::{Mode, Schedule};
pub use sim::{DenseOperator, Real, SimReport};

/// Double-precision dense operator.
pub type DenseOperator64 = sim::DenseOperator<f64>;
/// Single-precision dense operator.
pub type DenseOperator32 = sim::DenseOperator<f32>;
/// Double-precision stroboscopic report.
pub type SimReport64 = sim::SimReport<f64>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("invalid coloring: hyperedge {0:?} is not rainbow")]
    InvalidColoring(Vec<usize>),
    #[error("generators are not independent over GF(2)")]
    Dependent,
    #[error("too large for exhaustive enumeration: {0}")]
    TooLarge(String),
    #[error("infeasible: term {0} commutes with every candidate")]
    Infeasible(PauliString),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
