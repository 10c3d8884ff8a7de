use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point set is empty")]
    EmptySet,
    #[error("grid of {points} points exceeds the budget of {budget}")]
    ResolutionTooLarge { points: u128, budget: u128 },
    #[error("operation requires exact rational input")]
    RequiresExact,
    #[error("mixed exact and float representations")]
    RepresentationMismatch,
    #[error("points live in different spaces")]
    SpaceMismatch,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("value {0} is not finite")]
    NotFinite(f64),
    #[error("coordinate {value} outside the domain of {space}")]
    OutOfDomain { value: String, space: String },
    #[error("orbit union of {requested} points exceeds the cap of {cap}")]
    SizeBudgetExceeded { requested: u128, cap: u128 },
    #[error("float expansion cannot certify coefficient {depth} (trusted up to {trusted})")]
    DepthPrecisionExceeded { depth: usize, trusted: usize },
    #[error("growth rule {rule} exhausts exact precision at depth {depth}")]
    DepthUnreachable { rule: String, depth: usize },
    #[error("first return did not happen within {steps} steps")]
    NonReturn { steps: usize },
    #[error("exponential sum is not real (imaginary part {imag})")]
    NonRealSum { imag: f64 },
    #[error("frequency vector must be nonzero")]
    ZeroFrequency,
    #[error("grid has {inside} samples inside the support per axis, need at least {needed}")]
    GridTooCoarse { inside: usize, needed: usize },
    #[error("grid resolution {resolution} too low for frequency {frequency}")]
    AliasingRisk { resolution: usize, frequency: i64 },
    #[error("sequence is not admissible at b = {b}: S_b = {partial} > {cap}")]
    InadmissibleSequence { b: usize, partial: u128, cap: u128 },
    #[error("generators {0} and {1} do not commute")]
    NotCommuting(usize, usize),
    #[error("generator {0} has an eigenvalue near a root of unity")]
    NotErgodic(usize),
    #[error("point set does not lie on the requested leaf: {0}")]
    LeafMismatch(String),
    #[error("matrix is not in SL(n, Z): {0}")]
    NotSpecialLinear(String),
    #[error("ball enumeration exceeded its budget of {budget} elements")]
    BallBudgetExceeded {
        budget: usize,
        partial: Box<crate::torus_group::GroupBall>,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
