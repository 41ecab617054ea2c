//! Zero-temperature phase diagram, excitation gap and light-atom
//! entanglement of the quantum tricritical Dicke model.
//!
//! The thermodynamic-limit analysis splits into a classical energy
//! landscape ([`meanfield`]) and a three-mode quadratic fluctuation problem
//! ([`fluctuations`]). [`criticality`] measures scaling near the phase
//! boundary and [`ed`] cross-checks everything against finite-N exact
//! diagonalization.

pub mod criticality;
pub mod ed;
pub mod error;
pub mod fluctuations;
pub mod linalg;
pub mod meanfield;
pub mod params;

pub use error::{Error, Result};
pub use meanfield::{BoundaryPoint, MeanFieldSolution, Phase, TransitionOrder};
pub use params::{ModelParams, RawParams};
