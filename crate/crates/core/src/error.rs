use thiserror::Error;

use crate::channels::ChannelKind;

/// Errors raised by the conversion, validation and channel routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {lhs:?} vs {rhs:?}")]
    Dimension {
        op: &'static str,
        lhs: (usize, usize),
        rhs: (usize, usize),
    },

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("not a valid state: {0}")]
    NonState(String),

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    /// `A_row* A_col` is not a multiple of the identity.
    #[error("not a unitary conjugation: A_{row}* A_{col} is off a multiple of I by {residual:e}")]
    NotUnitaryConjugation { row: usize, col: usize, residual: f64 },

    #[error("channel has no CPTP inverse ({kind:?}, Choi rank {choi_rank})")]
    NotInvertible { kind: ChannelKind, choi_rank: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
