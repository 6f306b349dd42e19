use std::path::PathBuf;

use crate::hexgroup::Flavor;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid cube coordinate ({x}, {y}, {z}): x + y + z = {} != 0", x + y + z)]
    InvalidCube { x: i32, y: i32, z: i32 },

    #[error("invalid double-width coordinate (row {row}, col {col}): col - row must be even")]
    InvalidDoubleWidth { row: i32, col: i32 },

    #[error("cannot compose a {left:?} element with a {right:?} element")]
    FlavorMismatch { left: Flavor, right: Flavor },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("mask violation: {0}")]
    MaskViolation(String),

    #[error("unsupported transform: {0}")]
    UnsupportedTransform(String),

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("{}: {source}", path.display())]
    File {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }

    pub(crate) fn parse(offset: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            offset,
            message: msg.into(),
        }
    }
}
