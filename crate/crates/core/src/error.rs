use thiserror::Error;

/// A diagnostic from reading a machine description, tagged with the line it
/// refers to (1-based).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("missing header `{0}:`")]
    MissingHeader(&'static str),
    #[error("header `{0}:` given twice")]
    DuplicateHeader(String),
    #[error("unknown header `{0}:`")]
    UnknownHeader(String),
    #[error("header `{0}:` after the first rule")]
    HeaderAfterRules(String),
    #[error("header `{header}:` expects {expected}")]
    HeaderArity { header: &'static str, expected: &'static str },
    #[error("duplicate state name `{0}`")]
    DuplicateState(String),
    #[error("duplicate symbol name `{0}`")]
    DuplicateSymbol(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("unknown move `{0}` (expected L, R or N)")]
    UnknownMove(String),
    #[error("malformed rule, expected `state symbol -> state symbol move` or `state symbol -> HALT`")]
    MalformedRule,
    #[error("second rule for ({state}, {symbol})")]
    DuplicateRule { state: String, symbol: String },
    #[error("rule given for the halting state `{0}`")]
    RuleForHaltingState(String),
    #[error("missing rule for ({state}, {symbol})")]
    MissingRule { state: String, symbol: String },
    #[error("alphabet must have ≥ 2 symbols")]
    AlphabetTooSmall,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("machine is invalid: {0}")]
    InvalidMachine(String),
    #[error("unknown corpus machine `{0}` (known: utm_6_4, wutm_6_2)")]
    UnknownCorpusMachine(String),
    #[error("symbol `{0}` is not in the alphabet")]
    UnknownSymbol(String),
    #[error("state `{0}` is not in the machine")]
    UnknownState(String),
    #[error("configuration does not belong to this machine: {0}")]
    ForeignConfiguration(String),
    #[error("phi is undefined at the halting state")]
    HaltingStateArgument,
    #[error("word length {n} is outside 1..={cap}")]
    WordLengthOutOfRange { n: usize, cap: usize },
    #[error("word count exceeded the node budget of {budget} at n = {n}")]
    NodeBudgetExceeded { n: usize, budget: u64 },
    #[error("sequence is not the image of a configuration: {0}")]
    NotInImage(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
