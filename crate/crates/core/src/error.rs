use thiserror::Error;

/// Errors raised by the solver, analysis and perturbation routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter is outside the regime the model is defined for.
    #[error("domain error: {0}")]
    Domain(String),

    /// Reduced temperature outside the standing assumption t > 1.
    #[error("reduced temperature t = {t} is outside the nematic regime (t > 1 is required)")]
    TemperatureOutOfRange { t: f64 },

    /// The right-hand side of the radial equation was evaluated at the origin.
    #[error("radial equation is singular at r = 0; launch from the core series instead")]
    SingularOrigin,

    /// The adaptive integrator could not make progress.
    #[error("step size underflow at r = {r:.6e} (step {step:.3e})")]
    StepUnderflow { r: f64, step: f64 },

    /// Scanning the shooting parameter found no sign change to bisect.
    #[error("no bracket found: {0}")]
    BracketNotFound(String),

    /// Finite-ball shooting found no amplitude meeting h(R) = 1.
    #[error("no root: {0}")]
    NoRoot(String),

    /// Bisection continuation stalled before reaching the end of the domain.
    #[error("shooting continuation stalled at r = {r:.6} (domain end {end:.6})")]
    ContinuationStalled { r: f64, end: f64 },

    /// A perturbation support extends past the solved domain.
    #[error("perturbation support [{lo}, {hi}] exceeds the profile domain [0, {end}]")]
    SupportExceedsDomain { lo: f64, hi: f64, end: f64 },

    /// A finite-difference stencil leaves the solved domain.
    #[error("stencil around r = {r} with spacing {spacing} leaves the domain (0, {end}]")]
    StencilOutsideDomain { r: f64, spacing: f64, end: f64 },

    /// Only the uniform (z z - I/3) and radial (r r - I/3) directions are supported.
    #[error("unsupported tensor direction '{0}' (expected 'uniform' or 'radial')")]
    UnsupportedDirection(String),

    /// Malformed profile data.
    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("serialization failed: {0}")]
    Serialization(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
