//! Cavity parameters, the resonance and polarization factors entering the
//! angular integrals, and the closed forms at the cavity center.

mod airy;
mod closed_form;
mod geometry;
mod types;

pub use airy::{airy_factors, AiryFactors};
pub use closed_form::{center_gamma, center_shift, isotropic_center_gamma, SolidAngle};
pub use geometry::{aberration_phase, detuning_to_phase, effective_theta, fwhm_phase, polarization_weight};
pub use types::{
    CavityConfig, Detuning, DipoleOrientation, Position, Response, UnitVector, MAX_KR, MIN_K_R_MIRROR, WARN_KR,
};
