//! Fock-state simulation of linear-optical circuits, with a heralded
//! scheme that turns two `alpha|0> + beta|1>` superpositions into a pure
//! single photon.

pub mod cli;
pub mod error;
pub mod fock;
pub mod measurement;
pub mod optics;
pub mod optimize;
pub mod oracle;
pub mod random;
pub mod scheme;

pub use error::{DegeneracyReason, Error, Result};
pub use fock::{InputState, Occupation, StateVector};
pub use optics::{BeamSplitterParams, InterferometerUnitary};
pub use scheme::{run_scheme, SchemeResult};
