//! Single-photon transport through a coupled-resonator waveguide with Nₐ
//! two-level atoms doped into consecutive cavities.
//!
//! Energies are in units of the atom-cavity coupling `g`. Spectra are indexed
//! by the detuning `Δ = E − Ω`.
//!
//! - [`model`]: parameters, dispersion, interior momentum
//! - [`scattering`]: closed-form transmission, single-atom amplitudes
//! - [`bands`]: perfect-reflection window, block bands, group velocities
//! - [`lattice`]: exact linear solve for arbitrary site-dependent blocks
//! - [`disorder`]: random realizations and ensemble averages
//! - [`loss`]: phenomenological decay and cavity loss

pub mod bands;
pub mod disorder;
pub mod error;
pub mod grid;
pub mod lattice;
pub mod linalg;
pub mod loss;
pub mod model;
pub mod scattering;

pub use error::{Error, Result};
pub use model::ModelParams;
