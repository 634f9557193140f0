//! Spontaneous emission, vacuum level shift and the resulting trapping force
//! for a two-level atom near the center of a concentric spherical resonator
//! whose mirrors subtend a large solid angle.
//!
//! All outputs are dimensionless: rates and shifts in units of the
//! free-space damping rate, lengths in units of `1/k`, energies in
//! `hbar Gamma_vac` and forces in `hbar k Gamma_vac`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cavity;
pub mod cli;
pub mod error;
pub mod fieldmap;
pub mod quadrature;

pub use cavity::{CavityConfig, Detuning, DipoleOrientation, Position, Response};
pub use error::{Error, Result};
