use thiserror::Error;

/// Errors produced across the toolkit.
#[derive(Debug, Error)]
pub enum CpError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The Choi matrix has a significantly negative eigenvalue.
    #[error("map is not completely positive: Choi eigenvalue {eigenvalue}")]
    NotCompletelyPositive { eigenvalue: f64 },

    /// The zero map has no Stinespring dilation; callers should fall back
    /// to the definitional algorithms.
    #[error("degenerate dilation: Choi matrix has rank 0")]
    DegenerateDilation,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, CpError>;
