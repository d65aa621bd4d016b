use thiserror::Error;

/// Errors raised while reading automata or running the checkers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("line {line}: unknown state `{name}`")]
    UnknownState { line: usize, name: String },

    #[error("line {line}: unknown letter `{name}`")]
    UnknownLetter { line: usize, name: String },

    #[error("line {line}: duplicate transition for state `{state}` on letter `{letter}`")]
    DuplicateTransition {
        line: usize,
        state: String,
        letter: String,
    },

    #[error("missing transition for state `{state}` on letter `{letter}` (use sink completion to fill it)")]
    MissingTransition { state: String, letter: String },

    #[error("invalid automaton: {0}")]
    Invalid(String),

    #[error("capacity exceeded: {what} needs {required}, budget is {budget}")]
    CapacityExceeded {
        what: &'static str,
        required: u128,
        budget: u128,
    },

    #[error("transition semigroup exceeds the budget of {budget} elements")]
    SemigroupBudget { budget: usize },

    #[error("profile product exceeds the budget of {budget} states (k={k}, l={l})")]
    ProfileBudget { budget: usize, k: usize, l: usize },

    #[error("witness search requires an initial state and an accepting set")]
    MissingLanguageData,

    #[error("the empty word has no factor profile")]
    EmptyWord,

    #[error("invalid parameter: {0}")]
    Parameter(String),
}

impl Error {
    /// True for every variant signalling an exhausted resource budget.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::CapacityExceeded { .. } | Error::SemigroupBudget { .. } | Error::ProfileBudget { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
