use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("operands live over different rings")]
    RingMismatch,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("cannot differentiate along auxiliary variable `{0}`")]
    DerivativeInT(String),
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("element does not lie in the submodule")]
    NotInSubmodule,
    #[error("no power up to {cap} lies in the ideal")]
    CapExceeded { cap: u32 },
    #[error("input is not graded: {0}")]
    NotGraded(String),
    #[error("homology did not stabilize below degree bound {bound}")]
    BoundTooSmall { bound: i64 },
    #[error("homology has infinite length")]
    InfiniteLength,
    #[error("potentials differ")]
    PotentialMismatch,
    #[error("the zero vector is not a point of projective space")]
    ZeroPoint,
    #[error("no periodicity found within {0} syzygy steps")]
    NoPeriodicityWithinBound(usize),
    #[error("singular locus is not isolated (Jacobian ideal has positive dimension)")]
    NonIsolated,
    #[error("potential has no critical point")]
    NoCriticalPoint,
    #[error("Jacobian ideal is not primary to the origin")]
    NotPrimaryAtOrigin,
    #[error("top Chern class requires an even number of variables")]
    OddDimensionTop,
    #[error("no admissible point found in {0} trials")]
    SearchExhausted(usize),
    #[error("invalid matrix factorization: {0}")]
    InvalidMf(String),
}

pub type Result<T> = std::result::Result<T, Error>;
