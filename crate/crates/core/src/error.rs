use thiserror::Error;

/// Errors raised by the kernels, step formulas and solvers.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the routine.
    #[error("{name} = {value} is outside the domain of {routine}")]
    Domain {
        routine: &'static str,
        name: &'static str,
        value: f64,
    },

    /// The arctanh branch of the SNM step is undefined (|h|·sqrt(-Ω) >= 1).
    #[error("SNM step undefined at x = {x}: arctanh argument out of range")]
    StepUndefined { x: f64 },

    /// (B/2)f + f' vanished, so Φ/Φ' and the Halley correction are undefined.
    #[error("degenerate denominator at x = {x}")]
    DegenerateDenominator { x: f64 },

    /// The osculating curve has a pole at the requested abscissa.
    #[error("osculating curve has a pole at x = {x}")]
    Pole { x: f64 },

    /// An iterative kernel or the quadrature oracle ran out of budget.
    #[error("{routine} did not converge")]
    NoConvergence { routine: &'static str },

    /// Solver options violate their invariants.
    #[error("invalid solver options: {0}")]
    InvalidOptions(&'static str),

    /// The starting value is not inside the problem domain.
    #[error("starting value {x0} is outside the problem domain")]
    StartOutsideDomain { x0: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(routine: &'static str, name: &'static str, value: f64) -> Error {
    Error::Domain {
        routine,
        name,
        value,
    }
}
