use crate::arith::{Nat, ResidueClass};
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus must be at least 1")]
    InvalidModulus,

    #[error("{value} has no inverse modulo {modulus} (gcd = {gcd})")]
    NoInverse { value: Nat, modulus: Nat, gcd: Nat },

    #[error("{value} has no multiplicative order modulo {modulus} (gcd = {gcd})")]
    NoOrder { value: Nat, modulus: Nat, gcd: Nat },

    #[error("inconsistent congruences: {first} and {second}")]
    Inconsistent {
        first: ResidueClass,
        second: ResidueClass,
    },

    #[error("{what} out of range: {detail}")]
    OutOfRange { what: &'static str, detail: String },

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("cannot generalize over the base class: {reason}")]
    CannotGeneralize {
        reason: String,
        /// Verdict obtained for the representative base alone.
        representative: Box<crate::constructions::FamilyVerdict>,
    },

    #[error("unknown certificate reference `{0}`")]
    UnresolvedCertificate(String),

    #[error("parse error in {source_name} at line {line}, column {column}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("internal logic error: {0}")]
    Logic(String),
}

impl Error {
    pub(crate) fn parse(source_name: &str, err: serde_json::Error) -> Self {
        Error::Parse {
            source_name: source_name.to_string(),
            line: err.line(),
            column: err.column(),
            message: err.to_string(),
        }
    }

    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource(_))
    }
}
