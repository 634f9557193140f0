use nalgebra::Vector3;

use super::types::CavityConfig;
use crate::error::{Error, Result};

/// Transverse-field weight `(3/2)(1 - (d.n)^2)` for emission along `omega_hat`.
///
/// Averages to 1 over the sphere. For the isotropic dipole the caller uses 1.
#[inline]
pub fn polarization_weight(d_hat: &Vector3<f64>, omega_hat: &Vector3<f64>) -> f64 {
    let c = d_hat.dot(omega_hat);
    1.5 * (1.0 - c * c)
}

/// Round-trip half phase of a ray through `kr` travelling along `omega_hat`:
/// `phi0 + (|kr|^2 - (kr.n)^2) / (2 kR)`.
///
/// The second term is the extra path of a ray with nonzero impact parameter.
#[inline]
pub fn aberration_phase(phi0: f64, kr: &Vector3<f64>, omega_hat: &Vector3<f64>, k_r_mirror: f64) -> f64 {
    let s = kr.dot(omega_hat);
    phi0 + (kr.norm_squared() - s * s) / (2.0 * k_r_mirror)
}

/// Mirror half-angle actually contributing to the resonance.
pub fn effective_theta(config: &CavityConfig) -> Result<f64> {
    let theta = if config.apply_diffraction_correction() {
        config.theta_m() - config.diffraction_loss_angle()
    } else {
        config.theta_m()
    };
    if theta <= 0.0 {
        return Err(Error::Domain(format!("effective aperture {theta} rad is not positive")));
    }
    Ok(theta)
}

/// Full width at half maximum of the odd-mode damping resonance, in phase.
pub fn fwhm_phase(rho: f64) -> Result<f64> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::Domain(format!("cavity linewidth undefined for rho = {rho}")));
    }
    let half = (1.0 - rho) / (2.0 * rho.sqrt());
    if half > 1.0 {
        return Err(Error::Domain(format!(
            "rho = {rho} is too low for the resonance to reach half maximum"
        )));
    }
    Ok(2.0 * half.asin())
}

/// Detuning in cavity linewidths (FWHM) to round-trip half phase.
pub fn detuning_to_phase(linewidths: f64, rho: f64) -> Result<f64> {
    Ok(linewidths * fwhm_phase(rho)?)
}
