use thiserror::Error;

/// All failure modes of the library.
///
/// The CLI maps every variant to exit status 3; flag validation errors never
/// reach this type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("parameter mismatch: {0}")]
    ParamMismatch(String),

    #[error("division by zero")]
    DivideByZero,

    #[error("element is not divisible")]
    NotDivisible,

    #[error("zero input has no valuation")]
    ZeroInput,

    #[error("valuation not resolved below precision ceiling q^{ceiling}")]
    PrecisionCeiling { ceiling: u32 },

    #[error("could not factor {value}: cofactor {cofactor} exceeds bound {bound}")]
    FactoringFailure {
        value: String,
        cofactor: String,
        bound: String,
    },

    #[error("need {needed} admissible auxiliary primes, only {found} available")]
    NoAuxPrimes { needed: usize, found: usize },

    #[error("rank did not stabilize within {used} auxiliary primes")]
    RankUnstable { used: usize },

    #[error("cochain is not a {degree}-cocycle")]
    NotCocycle { degree: usize },

    #[error("module mismatch: {0}")]
    ModuleMismatch(String),

    #[error("group is not cyclic with the given generator")]
    NotCyclic,

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid module: {0}")]
    InvalidModule(String),

    #[error("size ceiling exceeded: {size} > {ceiling}")]
    SizeCeiling { size: u128, ceiling: u128 },

    #[error("coboundary defect is not central")]
    DefectNotCentral,

    #[error("p = {p} is irregular (indices {indices:?})")]
    IrregularPrime { p: u64, indices: Vec<u64> },

    #[error("no generator found for prime {prime} within coefficient box {bound}")]
    GeneratorNotFound { prime: String, bound: i64 },

    #[error("could not express {element} in the generating set")]
    ActionExpression { element: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParams(_) => "invalid_params",
            Error::ParamMismatch(_) => "param_mismatch",
            Error::DivideByZero => "divide_by_zero",
            Error::NotDivisible => "not_divisible",
            Error::ZeroInput => "zero_input",
            Error::PrecisionCeiling { .. } => "precision_ceiling",
            Error::FactoringFailure { .. } => "factoring_failure",
            Error::NoAuxPrimes { .. } => "no_aux_primes",
            Error::RankUnstable { .. } => "rank_unstable",
            Error::NotCocycle { .. } => "not_cocycle",
            Error::ModuleMismatch(_) => "module_mismatch",
            Error::NotCyclic => "not_cyclic",
            Error::InvalidGroup(_) => "invalid_group",
            Error::InvalidModule(_) => "invalid_module",
            Error::SizeCeiling { .. } => "size_ceiling",
            Error::DefectNotCentral => "defect_not_central",
            Error::IrregularPrime { .. } => "irregular_prime",
            Error::GeneratorNotFound { .. } => "generator_not_found",
            Error::ActionExpression { .. } => "action_expression",
            Error::Unsupported(_) => "unsupported",
            Error::Parse(_) => "parse",
        }
    }
}
