use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("extension degree {0} must be odd")]
    EvenDegree(usize),

    #[error("extension degree {n} outside the supported range {min}..={max}")]
    DegreeOutOfRange { n: usize, min: usize, max: usize },

    #[error("polynomial {0:?} is not primitive over GF(3)")]
    NotPrimitive(Vec<u8>),

    #[error("generator matrix has rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },

    #[error("dimension {k} exceeds the exhaustive enumeration bound {max}")]
    DimensionTooLarge { k: usize, max: usize },

    #[error("{what} is not integral: {value}")]
    NonIntegral { what: String, value: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("point counts differ ({0} vs {1})")]
    PointCountMismatch(usize, usize),

    #[error("design parameters differ: {0}")]
    ParameterMismatch(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
