use alloc::string::String;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("unsupported root system `{0}` (supported: A1, A2, A3, B2, G2)")]
    UnsupportedSystem(String),

    #[error("cannot parse `{0}` as a rational number")]
    Parse(String),

    #[error("expected {expected} coordinates, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("spectral parameter is singular (pi(A_lambda) = 0); use the regularized singular path")]
    SingularParameter,

    #[error("spectral parameter is regular; the singular path needs pi(A_lambda) = 0")]
    RegularParameter,

    #[error("H lies on a chamber wall (pi(H) = 0); use the wall-limit evaluation")]
    WallPoint,

    #[error("probe direction is not strictly dominant")]
    NotDominant,

    #[error("probe collision: two coset frequencies s.xi0(H0) coincide; pick another probe")]
    ProbeCollision,

    #[error("no collision-free probe direction found within {0} attempts")]
    ProbeBudgetExhausted(usize),

    #[error("divided-difference step underflow (h = {0:e}); use the exact symbolic path")]
    StepUnderflow(f64),

    #[error("repeated frequency in exponential polynomial")]
    RepeatedFrequency,

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}
