use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vector norm {0:e} is too small to define a ray")]
    ZeroVector(f64),

    #[error("states are parallel or orthogonal where a generic pair is required (inner product {0})")]
    DegeneratePair(f64),

    #[error("reflectivity {name} = {value} is outside the open interval (0, 1)")]
    InvalidReflectivity { name: &'static str, value: f64 },

    #[error("unknown path `{0}`")]
    UnknownPath(String),

    #[error("sub-classes {first} and {second} share the sign pattern {pattern}")]
    TableInconsistency {
        first: String,
        second: String,
        pattern: String,
    },

    #[error("sign pattern {0} matches no sub-class")]
    UnknownPattern(String),

    #[error("unsupported output format `{0}`")]
    UnsupportedFormat(String),

    #[error("cannot parse `{input}` as a number: {reason}")]
    Number { input: String, reason: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
