use crate::net::Diagnostic;
use crate::theory::Theory;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("theory mismatch: expected {expected}, found {found}")]
    TheoryMismatch { expected: Theory, found: Theory },

    #[error("theory {0} has no inverse operation")]
    NoInverse(Theory),

    #[error("{op} is not supported for theory {theory}")]
    Unsupported { op: &'static str, theory: Theory },

    #[error("no image for `{0}`")]
    Unmapped(String),

    #[error("unknown transition `{0}`")]
    UnknownTransition(String),

    #[error("name `{0}` collides with a reserved identity-transition name")]
    NameCollision(String),

    #[error("invalid net: {}", join(.0))]
    InvalidNet(Vec<Diagnostic>),

    #[error("invalid morphism: {}", join(.0))]
    InvalidMorphism(Vec<Diagnostic>),

    #[error("product over {0} has infinitely many transitions")]
    InfiniteProduct(Theory),

    #[error("ill-typed term: {0}")]
    IllTyped(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("budget exhausted: {0}")]
    Budget(String),

    #[error("integer overflow during lattice reduction")]
    Overflow,

    #[error("malformed JSON: {0}")]
    Json(String),
}

fn join(diags: &[Diagnostic]) -> String {
    diags.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; ")
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
