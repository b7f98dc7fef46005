use thiserror::Error;

/// Crate-wide error type. `exit_code` maps variants onto the CLI contract:
/// 2 for usage errors, 3 for internal inconsistencies.
#[derive(Debug, Error)]
pub enum Error {
    #[error("mixed alphabets: {0}")]
    MixedAlphabets(String),
    #[error("empty word not allowed: {0}")]
    EmptyWord(String),
    #[error("single-letter word has no standard factorization")]
    SingleLetter,
    #[error("quasi-shuffle product is defined on the Y alphabet only")]
    StuffleOnX,
    #[error("series constant term violation: {0}")]
    ConstantTerm(String),
    #[error("inhomogeneous rewrite rule: {0}")]
    InhomogeneousRule(String),
    #[error("rewrite rule discipline violated: {0}")]
    RuleDiscipline(String),
    #[error("divergent input {0}: use the gamma-constant command for regularized values")]
    Divergent(String),
    #[error("invalid input: {0}")]
    Parse(String),
    #[error("unresolvable symbol in numeric evaluation: {0}")]
    Unresolvable(String),
    #[error("internal inconsistency at weight {weight}: {detail}")]
    Inconsistent { weight: u32, detail: String },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Inconsistent { .. } => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
