use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("gram matrix singular")]
    GramSingular,

    #[error("matrix does not have full row rank (rank {rank}, rows {rows})")]
    RankDeficient { rank: usize, rows: usize },

    #[error("eigenvalue iteration did not converge")]
    EigenNoConvergence,

    #[error("insufficient linear regime ({usable} usable points)")]
    InsufficientLinearRegime { usable: usize },

    #[error("transient only: no trailing window with a stable slope")]
    TransientOnly,

    #[error("not a fixed point: {0}")]
    NotAFixedPoint(String),

    #[error("nongeneric face: N(A) and N(B̄) intersect nontrivially")]
    NongenericFace,

    #[error("enumeration too large ({0} supports)")]
    EnumerationTooLarge(u128),

    #[error("subspaces intersect nontrivially")]
    SubspacesIntersect,

    #[error("could not certify uniqueness after {0} attempts")]
    UniquenessNotCertified(usize),

    #[error("parse error in {path}: {msg}")]
    Parse { path: PathBuf, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for errors caused by bad user input rather than numerical trouble.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Dimension(_)
                | Error::InvalidArgument(_)
                | Error::NotSquare { .. }
                | Error::RankDeficient { .. }
                | Error::EnumerationTooLarge(_)
                | Error::Parse { .. }
                | Error::Io(_)
                | Error::Json(_)
                | Error::Csv(_)
        )
    }
}
