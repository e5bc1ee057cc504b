use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("grid coverage: {0}")]
    Coverage(String),
    #[error("wavefunction reached the grid boundary at t = {t:e} (edge/peak = {ratio:e})")]
    BoundaryLeak { t: f64, ratio: f64 },
    #[error("{kind} phase advance {advance:.3e} rad per step exceeds {limit} rad")]
    PhaseAdvance {
        kind: &'static str,
        advance: f64,
        limit: f64,
    },
    #[error("regime precondition failed: {0}")]
    Regime(String),
    #[error("numerical invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
