use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("input outside its domain: {0}")]
    InputDomain(String),

    #[error("cannot parse {0:?} as an exact fraction")]
    Parse(String),

    #[error("mechanism `{mechanism}` does not support a profile of {n} agents")]
    UnsupportedMechanism { mechanism: String, n: usize },

    #[error("unknown mechanism `{0}`")]
    UnknownMechanism(String),

    #[error("invalid lottery: {0}")]
    InvalidLottery(String),

    #[error("approximation ratio is unbounded: opt is 0 but the mechanism's social cost is {0}")]
    UnboundedRatio(String),

    #[error("phi is undefined on the all-zero profile")]
    PhiUndefined,

    #[error("not a segment profile: {0}")]
    NotSegment(String),

    #[error("profile is not normalized")]
    NotNormalized,

    #[error("boundary parameters k={k}, m_minus={m_minus}, m_plus={m_plus} give a zero denominator")]
    DegenerateBoundary { k: u64, m_minus: u64, m_plus: u64 },

    #[error("report {point} is not a point of the grid with {l} points")]
    OffGrid { point: String, l: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("enumeration size {estimate} exceeds the budget of {budget}; restrict with max_distinct")]
    BudgetExceeded { estimate: u128, budget: u128 },
}
