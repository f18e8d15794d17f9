use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A function was evaluated outside its domain (singular point, nonpositive
    /// mass, negative radius for a fractional power, ...).
    #[error("domain error at r = {point}: {reason}")]
    Domain { point: f64, reason: String },

    /// Adaptive quadrature hit its recursion-depth cap before reaching the
    /// requested tolerance. Carries the best estimate and its error bound.
    #[error("quadrature did not converge: best estimate {estimate}, error bound {bound}")]
    Accuracy { estimate: f64, bound: f64 },

    /// Invalid problem specification (bad descriptor, inconsistent
    /// dimension/angular data, malformed JSON, unknown catalog id, ...).
    #[error("spec error: {0}")]
    Spec(String),

    /// Matrix/vector dimension mismatch.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// Iterative eigensolver failed to converge.
    #[error("eigensolver did not converge: {0}")]
    Convergence(String),

    /// Request exceeds the dense desk-scale size guard.
    #[error("size guard: {0}")]
    SizeGuard(String),

    /// A pipeline stage failed; names the stage for diagnosis.
    #[error("stage '{stage}' failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn domain(point: f64, reason: impl Into<String>) -> Self {
        Error::Domain {
            point,
            reason: reason.into(),
        }
    }

    pub fn spec(reason: impl Into<String>) -> Self {
        Error::Spec(reason.into())
    }

    /// Wrap an error with the name of the pipeline stage that produced it.
    pub fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
