use alloc::string::String;

use thiserror::Error;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("wire {wire} out of range for a {n}-qubit register")]
    WireOutOfRange { wire: usize, n: usize },

    #[error("gate wires must be distinct (wire {0} repeated)")]
    DuplicateWire(usize),

    #[error("gate {kind} expects {expected} wires, got {found}")]
    WireCount {
        kind: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("state has the wrong basis label for this operation")]
    WrongBasis,

    #[error("sigma cascade needs at least two wires, got {0}")]
    SigmaTooShort(usize),

    #[error("{what} exceeds capacity limit {limit}")]
    Capacity { what: &'static str, limit: usize },

    #[error("unsupported gate: {0}")]
    UnsupportedGate(String),

    #[error("degenerate input: {0}")]
    Degenerate(&'static str),

    #[error("{0}")]
    Domain(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("rule integrity violated at step {step}: {forward} forward and {backward} backward matches")]
    Integrity {
        step: usize,
        forward: usize,
        backward: usize,
    },

    #[error("trajectory exceeded {cap} steps without reaching a stop state")]
    Runaway { cap: usize },

    #[error("trajectory halted at step {step} without matching a stop projector")]
    NoStop { step: usize },

    #[error("effective-Hamiltonian mismatch {deviation:e} at block ({row}, {col})")]
    Equivalence { row: usize, col: usize, deviation: f64 },

    #[error("non-finite value supplied for {0}")]
    NonFinite(&'static str),

    #[error("time step too coarse: step * norm = {0} exceeds 0.1")]
    Resolution(f64),

    #[error("degenerate ground state at s = {s}: gap {gap:e}")]
    Degeneracy { s: f64, gap: f64 },

    #[error("eigensolver failed to converge")]
    NoConvergence,
}

pub type Result<T> = core::result::Result<T, Error>;
