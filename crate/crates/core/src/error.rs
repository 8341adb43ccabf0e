use thiserror::Error;

/// Errors surfaced by the library. CLI exit codes are derived from these in
/// the binary, not here.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown model `{name}`; valid names: {valid}")]
    UnknownModel { name: String, valid: String },
    #[error("class point outside fundamental domain: {0}")]
    Domain(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("class is not in the image of X(j) for inclusion `{0}`")]
    NotInImage(String),
    #[error("inclusion `{0}` is not normal; general induction is unsupported")]
    NonNormalInclusion(String),
    #[error("character decomposition failed; residual sup-norm {residual:.3e}")]
    DecompositionFailed { residual: f64 },
    #[error("singular curve: discriminant of y^2 = x^3 + {a}x + {b} is zero")]
    SingularCurve { a: i64, b: i64 },
    #[error("bad reduction at p = {0}")]
    BadReduction(u64),
    #[error("Hasse bound violated at p = {p}: a_p = {ap}")]
    HasseViolation { p: u64, ap: i64 },
    #[error("csv error at line {line}: {msg}")]
    Csv { line: usize, msg: String },
    #[error("too few samples: got {got}, need at least {need}")]
    TooFewSamples { got: usize, need: usize },
    #[error("model `{0}` has no sign character")]
    NoSignCharacter(String),
    #[error("model integrity: {0}")]
    ModelIntegrity(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
