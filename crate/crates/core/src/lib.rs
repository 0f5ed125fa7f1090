//! Two-photon polarization states mixed with colored and white noise.
//!
//! The state family is
//! `rho(p, r) = p |Φ+><Φ+| + r/2 (|00><00| + |11><11|) + (1 - p - r)/4 · I`.
//! The crate computes its spectrum and entropy, decides separability with
//! the partial-transpose and majorization criteria, maximizes the CHSH
//! quantity over the analyzer angles, simulates finite-count correlation
//! measurements and fits the colored-noise weight to measured Bell values.

pub mod chsh;
pub mod error;
pub mod fit;
pub mod linalg;
pub mod separability;
pub mod sim;
pub mod state;

mod roots;

pub use error::{Error, Result};
pub use state::NoiseParams;
