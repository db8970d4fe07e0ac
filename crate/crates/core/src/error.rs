use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),
    #[error("alphabet mismatch: expected {expected} symbols, found {found}")]
    AlphabetMismatch { expected: usize, found: usize },
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("edge set is not a spanning tree")]
    NotASpanningTree,
    #[error("fringe enumeration exceeded cap {cap}")]
    FringeCapExceeded { cap: usize },
    #[error("word is not a member of the ambient subgroup")]
    NotAMember,
    #[error("first subgroup is not contained in the second")]
    NotASubgroup,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("certificate failure: {0}")]
    CertificateFailure(String),
    #[error("group order cap exceeded: {order} > {cap}")]
    OrderCapExceeded { order: usize, cap: usize },
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("invalid group table: {0}")]
    InvalidGroup(String),
}

pub type Result<T> = std::result::Result<T, Error>;
