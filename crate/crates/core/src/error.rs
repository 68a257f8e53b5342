use thiserror::Error;

use crate::orbit::Label;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid permutation images {0:?}: not a bijection on 1..=4")]
    InvalidPermutation([u8; 4]),

    #[error("invalid transposition ({0} {1}): need 1 <= i < j <= 4")]
    InvalidTransposition(u8, u8),

    #[error("representation inconsistent at {element}: factorizations differ by {deviation:e}")]
    RepresentationInconsistency { element: String, deviation: f64 },

    #[error("invalid state: norm {norm} is not 1")]
    InvalidState { norm: f64 },

    #[error("orbit does not partition into orthonormal bases: {0}")]
    NoBasisPartition(String),

    #[error("orbit vector {vector:?} matches no fixture entry")]
    LabelingMismatch { vector: [f64; 3] },

    #[error("basis is not orthonormal (deviation {deviation:e})")]
    InvalidBasis { deviation: f64 },

    #[error("label {0} not found")]
    LabelNotFound(Label),

    #[error("orbit not closed: image {vector:?} of seed matches no labelled vector")]
    OrbitClosure { vector: [f64; 3] },

    #[error("generated inequality terms differ from the reference fixture: {0}")]
    InequalityFixtureMismatch(String),

    #[error("constraint graph structure violated: {0}")]
    GraphStructure(String),

    #[error("irreducible block structure not recognised: {0}")]
    BlockStructure(String),

    #[error("invalid strategy: outcome {outcome} for observable {index} is outside 0..=2")]
    InvalidStrategy { index: usize, outcome: u8 },

    #[error("win table differs from the reference fixture: {0}")]
    WinTableMismatch(String),
}
