use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("GF({0}) is not a supported prime field")]
    InvalidField(u32),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),

    #[error("relation is not admissible: {0}")]
    NotAdmissible(String),

    #[error("infinite-dimensional algebra: {0}")]
    InfiniteDimensional(String),

    #[error("objects live over different algebras: {0}")]
    AlgebraMismatch(String),

    #[error("not a module: {0}")]
    InvalidModule(String),

    #[error("not a module homomorphism: {0}")]
    InvalidMap(String),

    #[error("UNDECIDED: search space of {candidates} candidates exceeds the cap of {cap}")]
    Undecided { candidates: u128, cap: u128 },

    #[error("enumeration cap exceeded: {0}; use a smaller dmax or p")]
    CapExceeded(String),

    #[error("module {0} is outside the enumerated universe; raise dmax")]
    OutsideUniverse(String),

    #[error("unknown module name {0:?}")]
    UnknownName(String),

    #[error("wrong domain for functor {functor}: {message}")]
    DomainMismatch {
        functor: &'static str,
        message: String,
    },

    #[error("REFUSED: hypothesis {hypothesis} does not hold: {detail}")]
    Refused { hypothesis: String, detail: String },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
