use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("operation requires a real test function (c_-n = conj(c_n))")]
    NotReal,

    #[error("invalid piecewise-linear function: {0}")]
    InvalidPiecewise(String),

    #[error("invalid quadrature spec: {0}")]
    InvalidQuadrature(String),

    #[error("line integral diverges near the point at infinity (cut-off value {cut_value:.6e})")]
    Divergent { cut_value: f64 },

    #[error("operation requires weight {expected}, found {found}")]
    WrongWeight {
        expected: &'static str,
        found: &'static str,
    },

    #[error("vector field must vanish at -1 to order {required}, declared {declared}")]
    VanishingOrder { required: u32, declared: u32 },

    #[error("declared vanishing order {declared} at -1 is not satisfied (derivative {order} is {value:.3e})")]
    VanishingCheck {
        declared: u32,
        order: u32,
        value: f64,
    },

    #[error("operation requires a band-limited circle representative")]
    NotBandLimited,

    #[error("transformed support reaches the point at infinity beyond the endpoint cut")]
    SupportAtInfinity,

    #[error("Fock cutoff mismatch: {0} vs {1}")]
    CutoffMismatch(u32, u32),

    #[error("partition level {level} exceeds cutoff {cutoff}")]
    LevelAboveCutoff { level: u32, cutoff: u32 },

    #[error("exactness window too small: {0}")]
    Window(String),

    #[error("degenerate test pair: |int F'''G| = {0:.3e} below threshold")]
    DegeneratePair(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
