use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("field of size {size} exceeds the budget {budget}")]
    SizeBudget { size: u64, budget: u64 },
    #[error("enumeration of {what} exceeds the budget {budget}")]
    BudgetExceeded { what: String, budget: u64 },
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("Tr(u) = 0 at the branch center")]
    ZeroTrace,
    #[error("tangent parameter has nonzero trace")]
    TraceNotZero,
    #[error("series has zero constant term and cannot be inverted")]
    NonInvertibleSeries,
    #[error("inner series of a composition must have zero constant term")]
    ComposePrecondition,
    #[error("precision {0} is insufficient; raise precision")]
    PrecisionInsufficient(usize),
    #[error("Hensel lift failed: {0}")]
    LiftFailure(String),
    #[error("zero polynomial has no multiplicity")]
    ZeroPolynomial,
    #[error("exact division failed: {0}")]
    Divisibility(String),
    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),
    #[error("point is not rational over {0}")]
    NotRational(&'static str),
    #[error("constant c must lie in {0} for this check")]
    ConstantNotInSubfield(&'static str),
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
