use thiserror::Error;

/// Errors surfaced by solvers, parameter validation and file I/O.
#[derive(Error, Debug)]
pub enum GpError {
    /// Input violates a domain precondition (non-finite, out of range, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative solver failed to reach its tolerance.
    #[error("solver error: {context} (last residual {residual:.3e} after {iterations} iterations)")]
    Solver {
        context: String,
        residual: f64,
        iterations: usize,
    },

    /// A root bracket could not be established.
    #[error("bracket failure: {0}")]
    Bracket(String),

    /// Two objects expected on a common grid disagree.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// Phase degree requested on a contour where the amplitude vanishes.
    #[error("degree undefined: amplitude {amplitude:.3e} below floor at radius {radius}")]
    DegreeUndefined { radius: f64, amplitude: f64 },

    /// Internal consistency violation (indicates a bug, not bad input).
    #[error("internal error: {0}")]
    Internal(String),

    /// Configuration file or --set override could not be parsed.
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, GpError>;

impl GpError {
    pub fn domain(msg: impl Into<String>) -> Self {
        GpError::Domain(msg.into())
    }
}

/// Checks that `v` is finite and strictly positive; used by parameter constructors.
pub fn ensure_positive(name: &str, v: f64) -> Result<f64> {
    if !v.is_finite() || v <= 0.0 {
        return Err(GpError::domain(format!("{name} must be finite and > 0, got {v}")));
    }
    Ok(v)
}

pub fn ensure_finite(name: &str, v: f64) -> Result<f64> {
    if !v.is_finite() {
        return Err(GpError::domain(format!("{name} must be finite, got {v}")));
    }
    Ok(v)
}
