use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("edge {edge} references vertex {vertex}, but the complex has {n_vertices} vertices")]
    DanglingVertex {
        edge: usize,
        vertex: usize,
        n_vertices: usize,
    },

    #[error("face {face} references edge {edge}, but the complex has {n_edges} edges")]
    DanglingEdge {
        face: usize,
        edge: usize,
        n_edges: usize,
    },

    #[error("face {face} boundary is not a closed walk")]
    OpenFace { face: usize },

    #[error("edge {edge} has non-positive length {length}")]
    NonPositiveLength { edge: usize, length: f64 },

    #[error("chain index {index} out of range (size {size})")]
    ChainOutOfRange { index: usize, size: usize },

    #[error("chain is not a cycle")]
    NotACycle,

    #[error("profile was built for a different complex ({expected} vertices, found {found})")]
    ProfileMismatch { expected: usize, found: usize },

    #[error("boundary rank {rank} exceeds the exact search cap {cap}")]
    CapExceeded { rank: usize, cap: usize },

    #[error("edge {edge} is not covered by the nerve (kappa too small)")]
    EdgeNotCovered { edge: usize },

    #[error("face {face} boundary word is not the identity; the face does not lift")]
    FaceDoesNotLift { face: usize },

    #[error("invalid permutation representation: {0}")]
    InvalidPermRep(String),

    #[error("parameter out of range: {0}")]
    InvalidParameter(String),

    #[error("{kind} parse error at line {line}: {msg}")]
    Parse {
        kind: &'static str,
        line: usize,
        msg: String,
    },
}
