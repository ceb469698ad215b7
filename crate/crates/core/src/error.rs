use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported code length {0} (expected 8 or 16)")]
    UnsupportedLength(usize),
    #[error("parameter {name} = {value} out of range {range}")]
    OutOfRange {
        name: &'static str,
        value: i64,
        range: &'static str,
    },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("lattice is not positive definite")]
    Indefinite,
    #[error("lattice is not even")]
    NotEven,
    #[error("lattice Gram matrix is not integral")]
    NotIntegral,
    #[error("Gram matrix is singular")]
    Singular,
    #[error("sublattice does not have full rank")]
    NotFullRank,
    #[error("vector is not in the lattice: {0}")]
    NotInLattice(String),
    #[error("matrix is not an isometry of the lattice")]
    NotIsometry,
    #[error("glue is not isotropic: {0}")]
    NotIsotropic(String),
    #[error("{0} is not an odd prime")]
    NotOddPrime(i64),
    #[error("prime {s} does not satisfy s = -1 mod {modulus}")]
    Congruence { s: i64, modulus: i64 },
    #[error("invalid frame: {0}")]
    InvalidFrame(String),
    #[error("invalid marking: {0}")]
    InvalidMarking(String),
    #[error("{0} is too large for the search budget")]
    TooLarge(String),
    #[error("search budget exceeded")]
    BudgetExceeded,
    #[error("character is trivial")]
    TrivialCharacter,
    #[error("not a member of Sigma: {0}")]
    NotSigma(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
