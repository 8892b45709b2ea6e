use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("KL divergence undefined: {0}")]
    DivergenceUndefined(String),
    #[error("invalid binning: {0}")]
    InvalidBinning(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("density is not normalizable: {0}")]
    NonNormalizable(String),
    #[error("conditional probability undefined at w = {0} (zero density)")]
    UndefinedConditional(f64),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("density fit did not converge (best mean NLL {best_nll:.6})")]
    FitFailed { best: Vec<f64>, best_nll: f64 },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("empty input")]
    EmptyInput,
    #[error("need at least {need} samples, got {have}")]
    InsufficientSamples { need: usize, have: usize },
    #[error("exhaustive enumeration too large: N={n}, M={m} (limit N<=12, M<=4)")]
    TooLarge { n: usize, m: usize },
    #[error("swap step would drive an entry negative")]
    Negativity,
    #[error("rows have equal conditional probability; swapping gains nothing")]
    NoGain,
    #[error("inconsistent inputs: {0}")]
    Inconsistent(String),
    #[error("model spec: {0}")]
    Spec(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
