use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(String),
    #[error("modulus must be monic of degree {expected}, got {got}")]
    BadModulusDegree { expected: usize, got: String },
    #[error("modulus is reducible over the prime field")]
    ReducibleModulus,
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("malformed document: {0}")]
    MalformedDocument(String),
    #[error("term {term} has degree {got}, expected {expected}")]
    DegreeMismatch { term: usize, expected: usize, got: usize },
    #[error("term {term} contains a zero linear form")]
    ZeroFormInTerm { term: usize },
    #[error("term {term} has a zero affine factor")]
    ZeroAffineFactor { term: usize },
    #[error("zero scalar in term {term}")]
    ZeroScalar { term: usize },
    #[error("circuit has {got} terms but top fanin is {k}")]
    TooManyTerms { k: usize, got: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("index {index} out of range for {len} terms")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("expansion exceeds the monomial cap of {cap}")]
    ExpansionTooLarge { cap: usize },
    #[error("field has at most {bound} elements; more are required")]
    FieldTooSmall { bound: u128 },
    #[error("parameters out of range: {0}")]
    InvalidParameters(String),
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("graded component has more than {cap} monomials")]
    GradedSpaceTooLarge { cap: usize },
    #[error("path enumeration exceeded the cap of {cap} tree nodes")]
    PathExplosion { cap: usize },
    #[error("circuit is identically zero")]
    CircuitIsZero,
    #[error("no certificate found for a nonzero circuit")]
    CertificateNotFound,
    #[error("oracle error: {0}")]
    Oracle(String),
}

pub type Result<T> = std::result::Result<T, Error>;
