//! Equilibrium radiation and lattice-heat numerics.
//!
//! The crate models the spectral energy density of cavity radiation — the
//! classic three-dimensional law, its n-dimensional generalization, and an
//! extended form in which an external field adds spontaneous- and
//! stimulated-like transition channels on top of the usual Einstein
//! coefficients. The same oscillator statistics drive the Einstein and Debye
//! heat-capacity models, including the field-modified phonon variants.
//!
//! Modules:
//! - [`specfun`]: gamma, Bose integrals, Debye function, displacement peaks;
//! - [`radiation`]: spectral densities, Einstein coefficients, energy totals;
//! - [`extfield`]: field-modified occupancy, spectra, diagnostics, energies;
//! - [`heat`]: Einstein and Debye solids, field-modified phonon energies;
//! - [`fitting`]: spectrum datasets, CSV ingestion, model fitting.
//!
//! All quantities are SI unless a [`radiation::PhysicalConstants`] in natural
//! mode (ħ = k = c = 1) is supplied; the constants are always passed
//! explicitly, never read from global state.

pub mod error;
pub mod extfield;
pub mod fitting;
pub mod heat;
pub mod radiation;
pub mod specfun;

pub use error::{Error, Result};
