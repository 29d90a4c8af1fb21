use num_complex::Complex64;
use thiserror::Error;

/// Failure modes shared by every module of the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("quadrature did not converge: estimate {value}, error estimate {error:e}")]
    NonConvergence { value: Complex64, error: f64 },

    #[error("hypergeometric argument {y} is too close to 1 for the series")]
    SlowConvergence { y: f64 },

    #[error("finite-difference stencil leaves the disk (modulus {modulus})")]
    StencilOutOfDomain { modulus: f64 },

    #[error("reduction chain broken at order {n}: residual {residual:e}")]
    ChainBroken { n: usize, residual: f64, coefficients: Vec<Complex64> },

    #[error("normalization unavailable at r = {r}: {reason}")]
    NormalizationUnavailable { r: f64, reason: String },

    #[error("operation requires lambda off the forbidden ray, got {lambda}")]
    ForbiddenRay { lambda: Complex64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("zero scan inconclusive: |Phi_n| is small at r = {r}")]
    ScanInconclusive { r: f64 },

    #[error("positivity violated: Phi_n({r}) = {value}")]
    PositivityViolation { r: f64, value: Complex64 },

    #[error("kernel band supremum does not decrease: {previous} -> {current} at r = {r}")]
    DecayViolation { r: f64, previous: f64, current: f64 },

    #[error("maximal ratio diverges under refinement: {coarse} -> {refined}")]
    RatioDiverging { coarse: f64, refined: f64 },

    #[error("radial fit residual {residual:e} exceeds tolerance {tolerance:e}")]
    FitResidualLarge { residual: f64, tolerance: f64 },

    #[error("no polynomial of degree <= {budget} meets the spiral bound (best max error {best_error})")]
    FitFailed { budget: usize, best_error: f64, best_degree: usize },

    #[error("angle reduction lost precision for lacunary term k = {k}")]
    PrecisionLoss { k: usize },

    #[error("series tail {tail:e} exceeds tolerance relative to |value| = {magnitude:e}")]
    TruncationWarning { value: Complex64, tail: f64, magnitude: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
