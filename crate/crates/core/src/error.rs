use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid ring specification: {0}")]
    InvalidRing(String),

    #[error("monomial exponent {0:?} lies outside the semigroup")]
    MonomialOutsideRing(Vec<i64>),

    #[error("operator levels do not compose: inner targets exponent {inner}, outer starts at {outer}")]
    LevelMismatch { inner: u32, outer: u32 },

    #[error("operator data keyed by different certificates: (a,b)=({0},{1}) vs ({2},{3})")]
    CertificateMismatch(u32, u32, u32, u32),

    #[error("invalid translation {t:?} between the named summands")]
    InvalidTranslation { t: Vec<i64> },

    #[error("periodicity violation at exponent {exponent}: certified repetition failed")]
    PeriodicityViolation { exponent: u32 },

    #[error("inconclusive within declared bounds: {0}")]
    Inconclusive(String),

    #[error("bound exceeded: {0}")]
    BoundExceeded(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
