use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty input sequence")]
    Empty,
    #[error("entry {value} at position {position} is not 0 or 1")]
    NonBinaryEntry { position: usize, value: i64 },
    #[error("dimension vector must start and end with 1")]
    LeadingOrTrailingZero,
    #[error("consecutive zeros at positions {0} and {next}", next = .0 + 1)]
    ConsecutiveZeros(usize),
    #[error("string length {value} at index {index} is not positive")]
    NonPositiveEntry { index: usize, value: i64 },

    #[error("({0}, {1}) is not a root of the ideal")]
    RootNotInIdeal(usize, usize),
    #[error("zero coefficient at ({0}, {1})")]
    ZeroCoefficient(usize, usize),
    #[error("cannot parse scalar {0:?}")]
    ScalarParse(String),

    #[error("{0:?} is not a standard subset of 1..={1}")]
    NotStandardSubset(Vec<usize>, usize),
    #[error("module is not Delta-good")]
    NotDeltaGood,
    #[error("no standard morphism onto index {0}")]
    InadmissibleIndex(usize),
    #[error("modules live over different quivers (t = {0} vs t = {1})")]
    QuiverMismatch(usize, usize),
    #[error("only l = 1 is supported, got l = {0}")]
    UnsupportedLevel(usize),
    #[error("invalid module data: {0}")]
    InvalidModule(String),
    #[error("subset shape does not admit this resolution: {0}")]
    WrongSubsetShape(String),

    #[error("parameter {0} is zero")]
    ZeroParameter(usize),
    #[error("expected {expected} parameters, got {got}")]
    ParameterCount { expected: usize, got: usize },
    #[error("construction failed: {0}")]
    Construction(String),

    #[error("{0} is not prime")]
    NonPrimeField(u64),
    #[error("state budget exceeded: need {needed}, budget {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error("orbit size {size} is not a power of {q}")]
    NotAPowerOfQ { size: u64, q: u64 },
    #[error("element is not a minimal representative")]
    NotMinimal,

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
