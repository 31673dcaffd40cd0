use thiserror::Error;

use crate::mss::Symbol;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("universe must contain at least one element")]
    EmptyUniverse,

    #[error("element names must be nonempty (position {0})")]
    EmptyElementName(usize),

    #[error("duplicate element name `{0}`")]
    DuplicateElement(String),

    #[error("universe has {size} elements; at most {max} are supported")]
    UniverseTooLarge { size: usize, max: usize },

    #[error("unknown element `{0}`")]
    UnknownElement(String),

    #[error("operands live in different universes ({left} vs {right} elements)")]
    UniverseMismatch { left: usize, right: usize },

    #[error("exhaustive enumeration over {size} elements exceeds the cap of {cap}")]
    ExhaustiveTooLarge { size: usize, cap: usize },

    #[error("predicate `{0}` needs approximation operators but none were supplied")]
    MissingOperators(&'static str),

    #[error("bited upper plugin violates lower(A) <= u_b(A) <= upper(A) at subset with bits {0:#b}")]
    PluginOutOfBounds(u64),

    #[error("extensional tables are limited to {max} elements (got {size})")]
    ExtensionalTooLarge { size: usize, max: usize },

    #[error("table has {got} entries, expected {expected}")]
    TableSize { got: usize, expected: usize },

    #[error("operators are not derived from the bound granulation")]
    OperatorsNotGranular,

    #[error("slot `{0}` is not bound in this structure")]
    NotBound(Symbol),

    #[error("the carrier cannot be dropped from a reduct")]
    CarrierDropped,

    #[error("invalid clustering: {0}")]
    InvalidClustering(String),

    #[error("exhaustive search needs {required} instances but the budget is {budget}")]
    BudgetExceeded { required: u128, budget: u64 },

    #[error("unknown claim `{0}`")]
    UnknownClaim(String),

    #[error("unknown axiom `{0}`")]
    UnknownAxiom(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
