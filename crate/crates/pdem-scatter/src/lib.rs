//! Scattering states for a particle with a position-dependent effective
//! mass crossing a double heterojunction.
//!
//! Two landscapes are covered: a diffused quantum well and an inverted
//! Morse barrier, both with smooth interiors and flat exteriors.  The crate
//! produces the interior wavefunction, the reflection/transmission
//! amplitudes, and the flux coefficients two independent ways: a closed-form
//! route built on hypergeometric and Whittaker functions, and a Runge-Kutta
//! oracle that integrates the mass-weighted Schrodinger equation directly.

pub mod analytic;
pub mod cli;
pub mod error;
pub mod matcher;
pub mod models;
pub mod oracle;
pub mod specialfn;

mod dd;

pub use error::Error;
