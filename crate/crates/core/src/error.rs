use std::io;

use crate::geometry::LinkId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("link {link} cannot meet the SINR threshold even without interference (signal {signal}, required {required})")]
    NonSchedulableLink {
        link: LinkId,
        signal: f64,
        required: f64,
    },

    #[error("link {link} has length {length} outside [{r_min}, {r_max}]")]
    LinkLengthOutOfRange {
        link: LinkId,
        length: f64,
        r_min: f64,
        r_max: f64,
    },

    #[error("degenerate bound: {0}")]
    DegenerateBound(String),

    #[error("local instance has {size} links, cap is {cap}")]
    InstanceTooLarge { size: usize, cap: usize },

    #[error("network generation failed: {0}")]
    GenerationFailed(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) => 4,
            Error::Csv(e) if matches!(e.kind(), csv::ErrorKind::Io(_)) => 4,
            _ => 2,
        }
    }
}
