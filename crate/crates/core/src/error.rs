use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus is not irreducible over GF({p}): {modulus:?}")]
    NotIrreducible { p: u32, modulus: Vec<u32> },
    #[error("modulus degree mismatch: expected monic degree {expected}, got coefficients {got:?}")]
    DegreeMismatch { expected: u32, got: Vec<u32> },
    #[error("order {order} exceeds the supported bound {max}")]
    OrderTooLarge { order: u64, max: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("element does not belong to this field")]
    FieldMismatch,
    #[error("operation requires characteristic {expected}, field has characteristic {actual}")]
    WrongCharacteristic { expected: u32, actual: u32 },
    #[error("field has characteristic 2; use the characteristic-2 failure report")]
    EvenCharacteristic,
    #[error("axiom failure: {0}")]
    AxiomFailure(String),
    #[error("points {0:?} are not a quadrilateral")]
    NotAQuadrilateral([usize; 4]),
    #[error("coordinatization failed: {0}")]
    CoordinatizationFailure(String),
    #[error("parse error at line {line}: {msg}")]
    ParseError { line: usize, msg: String },
    #[error("unknown point index {0}")]
    UnknownPoint(usize),
    #[error("point {0} is not in the arc")]
    NotInArc(usize),
    #[error("point set is not an oval")]
    NotAnOval,
    #[error("plane has odd order {0}; tangents are not concurrent")]
    OddOrder(usize),
    #[error("point {0} is not on the conic")]
    PointNotOnConic(usize),
    #[error("duplicate points in input")]
    DuplicatePoints,
    #[error("polynomial does not define a hyperoval (collinear triple {0:?})")]
    NotAHyperoval([usize; 3]),
    #[error("plane has no coordinates; a Desarguesian plane built from a field is required")]
    NotDesarguesian,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("budget exhausted after {0} steps")]
    BudgetExceeded(u64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
