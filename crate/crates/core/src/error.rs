use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("no exact Laurent quotient exists")]
    NotDivisible,
    #[error("denominator vanishes at the evaluation point")]
    DenominatorZero,
    #[error("expression is not subtraction-free: {0}")]
    NotPositive(String),
    #[error("potential #{0} has a non-monomial denominator")]
    NonMonomialDenominator(usize),
    #[error("cone has empty interior")]
    EmptyCone,
    #[error("word {0:?} is not reduced")]
    NotReduced(Vec<i32>),
    #[error("word {0:?} is not a reduced word for the longest element")]
    NotReducedForW0(Vec<i32>),
    #[error("no braid or commutation move at position {0}")]
    NoMoveHere(usize),
    #[error("leading principal minor {0} vanishes")]
    NotDecomposable(usize),
    #[error("iterated derivative vanishes identically")]
    ZeroDerivative,
    #[error("numerical breakdown: {0}")]
    NumericalBreakdown(String),
    #[error("point lies on a wall between linearity chambers")]
    PointOnChamberWall,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Invalid(String),
}

impl Error {
    /// Stable machine-readable tag used in CLI error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Arity { .. } => "ArityMismatch",
            Error::Dimension { .. } => "DimensionMismatch",
            Error::NotDivisible => "NotDivisible",
            Error::DenominatorZero => "DenominatorZero",
            Error::NotPositive(_) => "NotPositive",
            Error::NonMonomialDenominator(_) => "NonMonomialDenominator",
            Error::EmptyCone => "EmptyCone",
            Error::NotReduced(_) => "NotReduced",
            Error::NotReducedForW0(_) => "NotReducedForW0",
            Error::NoMoveHere(_) => "NoMoveHere",
            Error::NotDecomposable(_) => "NotDecomposable",
            Error::ZeroDerivative => "ZeroDerivative",
            Error::NumericalBreakdown(_) => "NumericalBreakdown",
            Error::PointOnChamberWall => "PointOnChamberWall",
            Error::Parse(_) => "ParseError",
            Error::Invalid(_) => "InvalidInput",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
