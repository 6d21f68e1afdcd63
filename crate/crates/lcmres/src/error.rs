use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("alphabet mismatch: vectors of length {0} and {1}")]
    AlphabetMismatch(usize, usize),
    #[error("non-divisibility: {1} does not divide {0}")]
    NonDivisible(String, String),
    #[error("minimality violated: generator {0} divides generator {1}")]
    Minimality(usize, usize),
    #[error("duplicate generator at positions {0} and {1}")]
    DuplicateGenerator(usize, usize),
    #[error("slack alphabet: factor `{0}` unused by every generator")]
    SlackAlphabet(String),
    #[error("zero generator at position {0}")]
    ZeroGenerator(usize),
    #[error("alphabet labels must be distinct and nonempty")]
    BadAlphabet,
    #[error("realization error: {0}")]
    Realization(String),
    #[error("element not in the lattice: {0}")]
    NotInLattice(String),
    #[error("{0} is not in the projection image")]
    NotInProjectionImage(String),
    #[error("saturated set required: {0}")]
    NotSaturated(String),
    #[error("depth table is missing flat {{{0}}}")]
    IncompleteOracle(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("malformed chain complex: d∘d ≠ 0 between degrees {0} and {1}")]
    NotAComplex(i32, i32),
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),
    #[error("too many generators: {0} exceeds the cap {1} (raise with --max-m)")]
    TooManyGenerators(usize, usize),
    #[error("input error: {0}")]
    Input(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("internal invariant violation: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the CLI: 2 input, 4 internal.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Internal(_) | Error::NotAComplex(..) => 4,
            _ => 2,
        }
    }
}
