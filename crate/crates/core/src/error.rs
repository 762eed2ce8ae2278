use thiserror::Error;

/// Errors raised by the field, rate and regime computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input violated a documented precondition. `field` names the offender.
    #[error("invalid {field}: {reason}")]
    Domain { field: &'static str, reason: String },

    /// The boundary integral did not settle before the sample cap.
    #[error(
        "quadrature did not converge after {samples} samples: \
         last estimates {previous:.6e} and {latest:.6e} (relative delta {relative_delta:.3e})"
    )]
    Quadrature {
        samples: usize,
        previous: f64,
        latest: f64,
        relative_delta: f64,
    },
}

impl Error {
    pub(crate) fn domain(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            field,
            reason: reason.into(),
        }
    }

    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Quadrature { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
