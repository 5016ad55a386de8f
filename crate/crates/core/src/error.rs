use thiserror::Error;

/// Errors raised by evaluation, zero finding and the verification engine.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("nu must exceed -1 (got {nu})")]
    InvalidOrder { nu: f64 },

    #[error("tolerance must be positive and finite (got {tol})")]
    InvalidTolerance { tol: f64 },

    #[error("argument must be finite (got {x})")]
    NonFiniteArgument { x: f64 },

    #[error("series did not converge within {terms} terms")]
    NonConvergence { terms: usize },

    #[error("error bound {achieved:e} exceeds requested tolerance {requested:e}")]
    ToleranceUnreachable { achieved: f64, requested: f64 },

    #[error("x = {x} is outside the domain (limit {limit})")]
    OutOfDomain { x: f64, limit: f64 },

    #[error("tail bound {bound:e} cannot reach tolerance with {zeros} zeros")]
    TailBoundFailure { bound: f64, zeros: usize },

    #[error("evaluation too close to a pole at x = {x}")]
    NearPole { x: f64 },

    #[error("could not certify the sign of J_nu at x = {x}")]
    SignCertificationFailure { x: f64 },

    #[error("sign-change count {found} != {expected} after mesh refinement")]
    MeshRefinementExhausted { expected: usize, found: usize },

    #[error("order mismatch: expected nu = {expected}, got {found}")]
    OrderMismatch { expected: f64, found: f64 },

    #[error("difference of Rayleigh sums at m = {m} is below working precision")]
    DegenerateDifference { m: usize },

    #[error("table covers up to index {available}, {requested} requested")]
    CacheTooSmall { requested: usize, available: usize },

    #[error("missing parameter: {0}")]
    MissingParameter(&'static str),

    #[error("invalid zero table: {0}")]
    InvalidTable(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidTolerance { tol })
    }
}

pub(crate) fn check_finite(x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFiniteArgument { x })
    }
}
