use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DartError {
    #[error("invalid dart parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("masses must be positive and sum to 1 (sum = {0})")]
    MassSum(f64),
    #[error("components have mismatched dimensions")]
    DimensionMismatch,
    #[error("operation requires a {expected}-dimensional dart")]
    WrongDimension { expected: usize },
    #[error("operation requires a purely atomic dart")]
    NotAtomic,
    #[error("projection direction must be a unit vector")]
    NotUnitDirection,
    #[error("no characteristic-function zero with nonzero real part was found")]
    NoComplexZero,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PayoffError {
    #[error("invalid payoff parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("construction unavailable: {0}")]
    ConstructionUnavailable(&'static str),
    #[error("payoff must be nonnegative to be truncated")]
    Negative,
    #[error(transparent)]
    Dart(#[from] DartError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExpectError {
    #[error("dart is {dart}-dimensional but payoff is {payoff}-dimensional")]
    DimensionMismatch { dart: usize, payoff: usize },
    #[error("distance must be positive and finite")]
    BadDistance,
    #[error("aim must be finite")]
    BadAim,
    #[error("invalid evaluation spec: {0}")]
    BadSpec(&'static str),
    #[error("engine `{0}` cannot evaluate this dart")]
    EngineUnsupported(&'static str),
    #[error(transparent)]
    Dart(#[from] DartError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OptError {
    #[error("search box is empty")]
    EmptyBox,
    #[error("search box is unbounded")]
    UnboundedBox,
    #[error("distance grid must be positive and strictly increasing")]
    BadGrid,
    #[error(transparent)]
    Expect(#[from] ExpectError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("argument {0} outside the supported range")]
    OutOfRange(f64),
    #[error("unsupported Bessel order {0}")]
    BadOrder(u32),
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("no sign change found below {0}")]
    NoZero(f64),
    #[error("inconclusive: {0}")]
    Inconclusive(&'static str),
    #[error(transparent)]
    Dart(#[from] DartError),
}
