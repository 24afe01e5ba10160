use thiserror::Error;

/// Errors raised by the numerical routines and literal parsers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    #[error("subgradient at zero")]
    SubgradientAtZero,

    #[error("no dual available for custom norm `{0}`")]
    NoDual(String),

    #[error("member index {index} out of range 1..={size}")]
    MemberIndex { index: usize, size: usize },

    #[error("tensor size mismatch: left has {left} members, right has {right}")]
    TensorSize { left: usize, right: usize },

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("aliasing: frequency {frequency} is not resolved by a grid of {nodes} nodes")]
    Aliasing { frequency: usize, nodes: usize },

    #[error("insufficient bandwidth: grid of {nodes} nodes, need at least {required}")]
    InsufficientBandwidth { nodes: usize, required: usize },

    #[error("oracle scope: {dof} real degrees of freedom exceed the limit of {limit}")]
    OracleScope { dof: usize, limit: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
}

impl Error {
    pub(crate) fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: message.into(),
        }
    }

    /// True for errors caused by the sampling grid being too coarse.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Aliasing { .. } | Error::InsufficientBandwidth { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
