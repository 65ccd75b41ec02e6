use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot coerce Q(zeta_{from}) into Q(zeta_{to}): {to} is not a multiple of {from}")]
    NotAMultiple { from: u32, to: u32 },
    #[error("field of order {q} exceeds the table bound 2^24")]
    TooLarge { q: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("F_p^{d} is not a subfield of F_p^{m}")]
    BadSubfield { d: u32, m: u32 },
    #[error("input must be nonzero")]
    ZeroInput,
    #[error("N = {n} does not divide q - 1 = {q_minus_one}")]
    BadN { n: u32, q_minus_one: u32 },
    #[error("the additive character is trivial")]
    TrivialAdditive,
    #[error("multiset sizes differ: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("cost {cost:.3e} exceeds budget {budget:.3e}")]
    Infeasible { cost: f64, budget: f64 },
    #[error("bad parameter t: {0}")]
    BadT(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("N = {0} is not supported here")]
    UnsupportedN(u32),
    #[error("pairing is neither symmetric nor antisymmetric")]
    NotSignDefinite,
    #[error("no Lambda_v value available (run the Katz comparison first)")]
    MissingLambda,
    #[error("every ratio is undefined (canonical trace vanishes at all admissible t)")]
    AllRatiosUndefined,
    #[error("config error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
