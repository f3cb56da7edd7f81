use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("not a chain complex: composite of boundaries is nonzero mod {p}")]
    NotAComplex { p: u64 },

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("{modulus} is not a power of {p}")]
    NotPrimePower { modulus: u64, p: u64 },

    #[error("map is not well defined on the source group: {0}")]
    IllDefinedMap(String),

    #[error("invalid truncation set: {0}")]
    InvalidTruncation(String),

    #[error("mismatched operands: {0}")]
    Mismatch(String),

    #[error("{n} is not in the truncation set")]
    NotInTruncation { n: u64 },

    #[error("inexact division in inverse ghost recursion at index {n}")]
    InexactGhost { n: u64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("enumeration bound exceeded: {size} elements > bound {bound}")]
    BoundExceeded { size: u128, bound: u128 },

    #[error("matrix identity failed: {0}")]
    IdentityFailure(String),

    #[error("pattern bidegree mismatch: {0}")]
    BidegreeMismatch(String),

    #[error("route disagreement: {0}")]
    RouteDisagreement(String),
}
