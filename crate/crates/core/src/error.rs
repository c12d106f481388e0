use thiserror::Error;

use crate::verdict::Verdict;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("a ring must have at least one element")]
    ZeroOrder,

    #[error("{what} is not total: {detail}")]
    NotTotal { what: &'static str, detail: String },

    #[error("{what} of size {size} exceeds the cap of {cap}")]
    Cap { what: String, size: u128, cap: u128 },

    #[error("ring axioms fail: {0}")]
    InvalidRing(Verdict),

    #[error("not a unital endomorphism: {0}")]
    InvalidEndomorphism(Verdict),

    #[error("operands live over different rings or endomorphisms")]
    Mismatch,

    #[error("{0}")]
    Shape(String),

    #[error("bad element literal: {0}")]
    Literal(String),

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl Error {
    pub(crate) fn cap(what: impl Into<String>, size: u128, cap: u128) -> Self {
        Error::Cap {
            what: what.into(),
            size,
            cap,
        }
    }

    pub(crate) fn unknown(kind: &'static str, name: impl Into<String>) -> Self {
        Error::Unknown {
            kind,
            name: name.into(),
        }
    }
}
