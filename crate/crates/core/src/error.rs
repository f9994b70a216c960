use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("bit window {start}:{length} does not fit a {width}-bit value")]
    WindowOutOfRange { start: u32, length: u32, width: u32 },

    #[error("window length {0} is outside 1..=16")]
    WindowLength(u32),

    #[error("invalid address {0:?}: expected six hex octets separated by '-' or ':'")]
    AddressSyntax(String),

    #[error("invalid vendor prefix {0:?}: expected three hex octets with optional '@weight'")]
    PrefixSyntax(String),

    #[error("unknown hash scheme {0:?}")]
    UnknownScheme(String),

    #[error("invalid CRC parameters: {0}")]
    CrcParameters(String),

    #[error("line {line}: {reason}: {text:?}")]
    LineSyntax {
        line: usize,
        text: String,
        reason: String,
    },

    #[error("empty trace")]
    EmptyTrace,

    #[error(
        "cannot place {requested} unique stations; at most {available} suffixes are available"
    )]
    Capacity { requested: u64, available: u64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("no (start, length) pair in the requested ranges fits a {width}-bit value")]
    EmptySweep { width: u32 },

    #[error("target rejection rate {0} cannot be reached")]
    Unsatisfiable(f64),

    #[error("wanted address set is empty")]
    EmptyWantedSet,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}
