use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed graph6 text; `offset` is the byte position of the failure.
    #[error("graph6 parse error at byte {offset}: {reason}")]
    Graph6Parse { offset: usize, reason: String },

    /// Short-form graph6 covers n <= 62 only.
    #[error("graph on {n} vertices exceeds the short-form graph6 limit of 62")]
    UnsupportedSize { n: usize },

    /// A model was asked to run on a graph it is not defined for.
    #[error("model precondition violated: {0}")]
    ModelPrecondition(String),

    /// A caller-supplied value is out of range or inconsistent.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// Linear orders that do not define a shunt model: two in-arcs at
    /// `vertex` carry the same label (labels are 1-based).
    #[error("invalid linear orders: vertex {vertex} receives label {label} from two neighbors")]
    InvalidOrders { vertex: usize, label: usize },

    /// Coin rejected by the rotation-system walk (non-circulant or
    /// degenerate spectrum).
    #[error("coin incompatible with a rotation-system walk: {0}")]
    CoinIncompatible(String),

    /// An invariant that should hold by construction failed; indicates a bug.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
