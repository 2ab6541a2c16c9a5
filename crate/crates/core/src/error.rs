use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate channel: m + S + E - V vanishes on the {side} side")]
    DegenerateChannel { side: &'static str },
    #[error("singular matching: independence determinant {det:e} is below tolerance")]
    SingularMatching { det: f64 },

    #[error("syntax error at byte {offset}: expected {}", expected.join(" or "))]
    Syntax { offset: usize, expected: Vec<String> },
    #[error("unknown function `{name}` at byte {offset}")]
    UnknownFunction { name: String, offset: usize },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("evaluation pole in {what} at x = {x}")]
    EvaluationPole { what: &'static str, x: f64 },
    #[error("unbound parameter `{0}`")]
    UnboundParameter(String),

    #[error("zero imaginary shift puts the pole on the real axis")]
    ZeroShift,
    #[error("pole on the integration axis near x = {x} (|denominator| = {modulus:e})")]
    PoleOnAxis { x: f64, modulus: f64 },
    #[error("declared {component} limit {declared} disagrees with sampled value {sampled}")]
    LimitMismatch { component: String, declared: String, sampled: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("step limit of {0} exceeded")]
    StepLimitExceeded(usize),
    #[error("singular asymptotic basis: C+ and D+ coincide")]
    SingularBasis,
    #[error("model does not belong to the {0} class")]
    WrongPotentialClass(&'static str),
    #[error("not a scattering energy: {0}")]
    NotScattering(String),

    #[error("parameters outside the stated domain: {0}")]
    OutOfStatedDomain(String),
    #[error("unsupported model: {0}")]
    UnsupportedModel(String),
    #[error("imaginary shift {0} makes the normalization degenerate")]
    ShiftDomain(f64),

    #[error("partner map is singular at this momentum")]
    SingularMap,
    #[error("grid too coarse: residual {fine:e} did not improve on {coarse:e}")]
    GridTooCoarse { coarse: f64, fine: f64 },
    #[error("threshold energy E = m: intertwining constant diverges")]
    ThresholdEnergy,

    #[error("no sign change found in the bracket")]
    NoBracket,
    #[error("root search did not converge: {0}")]
    NonConvergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;
