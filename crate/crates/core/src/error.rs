use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic {0} is not supported (need p >= 5)")]
    SmallCharacteristic(u64),
    #[error("field of size {0}^{1} is too large")]
    FieldTooLarge(u64, u32),
    #[error("modulus is reducible or has the wrong shape")]
    ReducibleModulus,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("singular curve (discriminant vanishes identically)")]
    SingularCurve,
    #[error("curve has constant j-invariant; only non-isotrivial curves are accepted")]
    IsotrivialOrConstant,
    #[error("reduction is singular")]
    SingularReduction,
    #[error("Hasse bound violated: a = {a}, q = {q}")]
    HasseViolation { a: i64, q: u64 },
    #[error("group order could not be pinned down in the Hasse interval (q = {0})")]
    AmbiguousOrder(u64),
    #[error("truncation {trunc} does not certify the degree; raise it")]
    TruncationTooSmall { trunc: usize },
    #[error("functional equation violated at coefficient {index}")]
    FunctionalEquationViolation { index: usize },
    #[error("integer overflow while building the L-polynomial")]
    CoefficientOverflow,
    #[error("Sym^2 L-polynomial vanishes at s = 1")]
    DeltaCrossCheckFailed,
    #[error("vanishing order mismatch: L^(m) vanishes at the centre for m = {0}")]
    OrderMismatch(u32),
    #[error("fit needs at least two distinct grid points")]
    DegenerateGrid,
    #[error("modulus and residue are not coprime")]
    NotCoprime,
    #[error("exponent must be non-negative")]
    NegativeExponent,
    #[error("limit {0} exceeds the supported range")]
    LimitTooLarge(u64),
    #[error("local Euler factor vanishes")]
    ZeroLocalFactor,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
