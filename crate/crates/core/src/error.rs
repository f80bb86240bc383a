//! Error type shared by every module of the crate.

use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("element {elem} is not in the group {group}")]
    NotInGroup { elem: String, group: &'static str },

    #[error("{0} and {1} are not in the same conjugacy class")]
    NotConjugate(String, String),

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("vertex {vertex} and plaquette {plaquette} do not form a site")]
    InvalidSite { vertex: usize, plaquette: usize },

    #[error("triangle cannot be embedded: {0}")]
    Triangle(String),

    #[error("invalid ribbon: {0}")]
    Ribbon(String),

    #[error("reference configuration carries flux on plaquette {0}")]
    FluxInReference(usize),

    #[error("state is not a common eigenstate of the stabilizers: {0}")]
    MixedSyndrome(String),

    #[error("sector input mixes conjugacy classes")]
    MixedClass,

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{protocol}: cap of {cap} exhausted (residual error {residual:.3e})")]
    CapExhausted {
        protocol: String,
        cap: usize,
        residual: f64,
    },

    #[error("qubit operation on a register with |2> weight {0:.3e}")]
    Leakage(f64),

    #[error("ancilla slot {slot} left in an unexpected state (overlap deficit {deficit:.3e})")]
    AncillaHygiene { slot: usize, deficit: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
