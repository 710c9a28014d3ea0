use num_complex::Complex64;
use thiserror::Error;

/// Unified error type for the whole crate.
///
/// Numerical routines here never return silent NaN or garbage: every failure
/// mode that can be detected is reported through one of these variants.
#[derive(Debug, Error)]
pub enum Error {
    /// 2F1 lower parameter c is a nonpositive integer; the series is undefined.
    #[error("2F1: c = {c} is a nonpositive integer")]
    DegenerateC { c: f64 },

    /// Kummer/Whittaker lower parameter b is a nonpositive integer.
    #[error("confluent M: b = {b} is a nonpositive integer")]
    DegenerateB { b: Complex64 },

    /// Series failed to reach the requested tolerance within the term cap.
    #[error("series did not converge within {terms} terms")]
    NoConvergence { terms: usize },

    /// 2F1 argument outside the supported domain x <= 0.
    #[error("2F1: argument x = {x} is outside the supported domain x <= 0")]
    DomainError { x: f64 },

    /// Whittaker M at y = 0 sits on the branch point of y^(m+1/2).
    #[error("Whittaker M at y = 0 is branch-ambiguous")]
    BranchError,

    /// The series converged termwise but cancellation consumed too many
    /// digits for the result to be trusted.
    #[error("series cancellation too severe (peak/result = {ratio:.2e}); result withheld")]
    PrecisionLoss { ratio: f64 },

    /// A computed quantity overflowed or became NaN.
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    /// Model constructor rejected its inputs.
    #[error("invalid model parameter: {0}")]
    InvalidParameter(String),

    /// At this energy at least one asymptotic channel does not propagate.
    #[error("E = {e} is at or below the channel threshold {threshold}; both asymptotic channels must propagate")]
    EvanescentChannel { e: f64, threshold: f64 },

    /// Energy below the floor of the transformed problem.
    #[error("E = {e} is not in the scattering regime (requires E > {floor})")]
    NotScattering { e: f64, floor: f64 },

    /// 2 m0 V0 <= 1 makes lambda1 imaginary; the closed-form barrier solution
    /// does not apply (the numeric oracle still does).
    #[error("2*m0*V0 = {two_m0_v0} <= 1: lambda1 is imaginary, no closed-form barrier solution")]
    ImaginaryLambda1 { two_m0_v0: f64 },

    /// Junction matching system numerically singular.
    #[error("matching system is numerically singular (pivot ratio {cond:.2e})")]
    SingularSystem { cond: f64 },

    /// RK4 half-step check disagreed beyond the sentinel tolerance.
    #[error("integration step too coarse: half-step check differs by {rel_diff:.2e} (limit 1e-7)")]
    StepTooCoarse { rel_diff: f64 },

    /// Configuration key not recognized.
    #[error("unknown configuration key '{key}' (line {line})")]
    UnknownKey { key: String, line: usize },

    /// A required parameter was resolved by neither flags, file, nor preset.
    #[error("missing required parameter '{0}'")]
    MissingRequired(String),

    /// Malformed command line or configuration input.
    #[error("parse error in {place}: {detail}")]
    ParseError { place: String, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
