use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("box `{0}` does not fit into the container in dimension {1}")]
    OversizedBox(String, usize),
    #[error("unknown box `{0}`")]
    UnknownBox(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("expected {expected} coordinates for `{id}`, got {got}")]
    DimensionMismatch { id: String, expected: usize, got: usize },
    #[error("dimension {0} out of range (d = {1})")]
    DimensionOutOfRange(usize, usize),
    #[error("packing is not valid for this instance")]
    InvalidPacking,
    #[error("edge sets do not form a packing class")]
    NotPackingClass,
    #[error("graph is not an interval graph")]
    NotInterval,
    #[error("orientation contains a directed cycle")]
    CyclicOrientation,
    #[error("input too large: {0}")]
    TooLarge(String),
    #[error("box `{0}` exceeds the fixed cross-section")]
    InfeasibleCrossSection(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
