use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("amplitude {text:?}, column {column}: expected {expected}")]
    Amplitude {
        text: String,
        column: usize,
        expected: String,
    },
    #[error("line {line}, column {column}: expected {expected}, found {found:?}")]
    Syntax {
        line: usize,
        column: usize,
        expected: String,
        found: String,
    },
    #[error("line {line}: {message}")]
    Semantic { line: usize, message: String },
    #[error("invalid machine: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("symbol {0:?} is not in the input alphabet")]
    UnknownSymbol(String),
    #[error("no transition row for ({state}, {symbol}{status})")]
    MissingRow {
        state: String,
        symbol: String,
        status: String,
    },
    #[error("counter overflow after input prefix {prefix:?}")]
    CounterOverflow { prefix: String },
    #[error("reversal bound {bound} exceeded on counter {counter} in state {state} after input prefix {prefix:?}")]
    ReversalExceeded {
        bound: u32,
        counter: usize,
        state: String,
        prefix: String,
    },
    #[error("{0}")]
    WrongKind(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error("{0}")]
    Precondition(String),
    #[error("canonical form violated: {0}")]
    Canonical(String),
    #[error("increment {0} overflows 64-bit counter arithmetic")]
    Overflow(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("well-formedness applies to quantum machines only")]
    NotQuantum,
    #[error("gadget exceeds unit column norm")]
    GadgetNorm,
    #[error("{0}")]
    Invalid(String),
}

/// Umbrella error for callers that drive the whole pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("{0}")]
    Other(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
