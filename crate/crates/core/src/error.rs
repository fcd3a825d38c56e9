use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dilation factor must be nonzero")]
    ZeroDilation,
    #[error("{what} needs at least {need} elements, got {got}")]
    TooFewElements { what: &'static str, need: usize, got: usize },
    #[error("invalid shift set: {0}")]
    InvalidShiftSet(String),
    #[error("map is not injective on the input set")]
    NotInjective,
    #[error("map is not defined on {0}")]
    OutsideDomain(String),
    #[error("map and shift set live in different value domains")]
    DomainMismatch,
    #[error("degenerate curve: {0}")]
    DegenerateCurve(&'static str),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is outside the supported range [2, 2^31)")]
    ModulusOutOfRange(u64),
    #[error("order {order} does not divide p - 1 = {group}")]
    OrderNotDivisor { order: u64, group: u64 },
    #[error("residue {value} is not in [0, {p})")]
    ResidueOutOfRange { value: u64, p: u64 },
    #[error("operands live in different prime fields ({0} vs {1})")]
    ContextMismatch(u64, u64),
    #[error("instance too large for this method: {0}")]
    Oversized(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("malformed set literal: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
