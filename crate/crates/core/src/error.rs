use thiserror::Error;

use crate::optics::BeamSplitterParams;

/// Why a scheme instance cannot be solved in the generic way.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DegeneracyReason {
    /// Both single-photon cross terms vanish, so every beam splitter cancels `|1>`.
    BothVacuousTerms,
    /// At least one input has no single-photon component; no photon pair exists.
    NoPhotonPair,
    /// At least one input has no vacuum component.
    NoVacuumComponent,
}

impl DegeneracyReason {
    pub fn as_str(self) -> &'static str {
        match self {
            DegeneracyReason::BothVacuousTerms => "both_vacuous_terms",
            DegeneracyReason::NoPhotonPair => "no_photon_pair",
            DegeneracyReason::NoVacuumComponent => "no_vacuum_component",
        }
    }
}

impl std::fmt::Display for DegeneracyReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("state is not normalized (squared norm {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },
    #[error("total photon number {photons} exceeds cutoff {cutoff}")]
    CutoffExceeded { photons: u32, cutoff: u32 },
    #[error("mode count mismatch: expected {expected}, found {found}")]
    ModeMismatch { expected: usize, found: usize },
    #[error("state has no amplitude above the pruning threshold")]
    ZeroState,
    #[error("amplitude is not finite")]
    NonFinite,
    #[error("mode index {index} out of range for {modes} modes")]
    IndexOutOfRange { index: usize, modes: usize },
    #[error("mode {0} listed twice")]
    DuplicateMode(usize),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },
    #[error("{name} = {value} is outside [{min}, {max}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },
    #[error("invalid detection pattern: {0}")]
    InvalidPattern(String),
    #[error("single-photon coefficient {magnitude:e} is not cancelled")]
    PurityViolated { magnitude: f64 },
    #[error("degenerate input ({reason}); fallback beam splitter {fallback:?}")]
    Degenerate {
        reason: DegeneracyReason,
        fallback: BeamSplitterParams,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
