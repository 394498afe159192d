//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("no interior equilibrium: reaction has no sign change on (0, 1)")]
    NoInteriorEquilibrium,

    #[error("existence condition violated: a + b < ab (a={a}, b={b}) and no root found")]
    ExistenceConditionViolated { a: f64, b: f64 },

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("critical value non-positive: {0}")]
    NegativeCritical(String),

    #[error("singular normalizer N{index} = {value:e} (degenerate tangency)")]
    SingularNormalizer { index: u8, value: f64 },

    #[error("spectral side condition failed: offending modes {modes:?}")]
    SideConditionFailed { modes: Vec<u32> },

    #[error("invalid mode pair: require k2 > k1 >= 1, got ({k1}, {k2})")]
    InvalidModePair { k1: u32, k2: u32 },

    #[error("unexpected singularity at mode {k}: condition number {cond:e} exceeds 1e12")]
    UnexpectedSingularity { k: u32, cond: f64 },

    #[error("bordered solve failed at critical mode {k}: bordered matrix is singular")]
    BorderedSolveFailed { k: u32 },

    #[error("non-finite normal form coefficient: {0}")]
    NonFiniteCoefficient(String),

    #[error("root finding failed: {0}")]
    RootFindingFailed(String),

    #[error("continuation stalled at (eps1, eps2) = ({0:e}, {1:e})")]
    ContinuationStalled(f64, f64),

    #[error("degenerate cubic: diagonal coefficient {0:e} within 1e-10 of zero")]
    DegenerateCubic(f64),

    #[error("unfolding classification not applicable: {0}")]
    NotApplicable(String),

    #[error("step size underflow in trajectory integration (dt = {0:e})")]
    StepSizeUnderflow(f64),

    #[error("field blow-up at t = {t}: max |field| = {max:e}")]
    BlowUp { t: f64, max: f64 },

    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),

    #[error("unknown scenario '{0}'")]
    UnknownScenario(String),

    #[error("artifact drift in {path}: recomputed output differs from file on disk")]
    CheckFailed { path: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
