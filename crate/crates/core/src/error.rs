//! Error and warning types shared across the crate.

use crate::Complex;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// Argument sits on (or within tolerance of) a pole of the gamma family.
    #[error("gamma-family pole at z = {z}")]
    Pole { z: Complex },

    /// Input violates a validity condition; the message names the condition.
    #[error("domain error: {0}")]
    Domain(String),

    /// A series or panel subdivision failed to converge within its budget.
    #[error("no convergence: {0}")]
    NoConvergence(String),

    /// Cancellation destroyed more significant digits than the result retains.
    #[error("precision loss: {lost_digits:.1} digits cancelled")]
    PrecisionLoss { lost_digits: f64 },

    /// The requested point coincides with a degenerate (double-pole) case and
    /// must be routed through the limiting formula.
    #[error("degenerate case: s = s_m for m = {m}")]
    Degenerate { m: usize },

    /// The W·M product vanishes at a finite-difference stencil point.
    #[error("zero product of Whittaker functions at the stencil")]
    ZeroProduct,

    /// An integrand returned NaN or infinity.
    #[error("non-finite integrand value at u = {at}")]
    NonFinite { at: f64 },
}

/// Non-fatal diagnostics attached to evaluation results.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Warning {
    /// Quadrature truncation criterion was never met; the tail matters.
    Tail,
    /// Parameters sit close to a degenerate point; the non-degenerate formula
    /// loses digits there.
    Conditioning { distance: f64 },
    /// Cancellation cost this many decimal digits (compensated retry applied).
    PrecisionLoss { lost_digits: f64 },
}
