//! The damping and shift integrands along one emission direction.

use nalgebra::Vector3;

use crate::cavity::{effective_theta, AiryFactors, CavityConfig, DipoleOrientation, Position};

/// Integrand values for one direction. Dividing the sphere integral of each
/// term by `4 pi` gives the response ratios.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrandSample {
    pub direction: Vector3<f64>,
    pub gamma_term: f64,
    pub shift_term: f64,
}

/// Evaluates the integrands for a single direction `omega_hat` (unit norm).
///
/// Directions within the effective aperture of either mirror see the full
/// Airy response; all others see free space.
pub fn integrand_at(
    omega_hat: &Vector3<f64>,
    position: &Position,
    orientation: &DipoleOrientation,
    config: &CavityConfig,
    phi0: f64,
) -> IntegrandSample {
    let integrand = Integrand::new(position, orientation, config, phi0);
    let (gamma_term, shift_term) = integrand.terms(omega_hat, integrand.in_cap(omega_hat));
    IntegrandSample { direction: *omega_hat, gamma_term, shift_term }
}

/// Everything about the integrand that does not depend on the direction.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Integrand {
    kr: Vector3<f64>,
    kr2: f64,
    dipole: Option<Vector3<f64>>,
    rho: f64,
    phi0: f64,
    k_r_mirror: f64,
    cos_edge: f64,
}

impl Integrand {
    pub(crate) fn new(position: &Position, orientation: &DipoleOrientation, config: &CavityConfig, phi0: f64) -> Self {
        let theta = effective_theta(config).expect("validated config has a positive aperture");
        let kr = position.kr();
        Integrand {
            kr,
            kr2: kr.norm_squared(),
            dipole: orientation.direction(),
            rho: config.rho(),
            phi0,
            k_r_mirror: config.k_r_mirror(),
            cos_edge: theta.cos(),
        }
    }

    pub(crate) fn cos_edge(&self) -> f64 {
        self.cos_edge
    }

    pub(crate) fn in_cap(&self, omega: &Vector3<f64>) -> bool {
        omega.z.abs() >= self.cos_edge
    }

    #[inline]
    fn weight(&self, omega: &Vector3<f64>) -> f64 {
        match &self.dipole {
            Some(d) => {
                let c = d.dot(omega);
                1.5 * (1.0 - c * c)
            }
            None => 1.0,
        }
    }

    /// `(gamma_term, shift_term)`
    #[inline]
    pub(crate) fn terms(&self, omega: &Vector3<f64>, in_cap: bool) -> (f64, f64) {
        let w = self.weight(omega);
        if !in_cap || self.rho == 0.0 {
            return (w, 0.0);
        }
        let s = self.kr.dot(omega);
        let phi = self.phi0 + (self.kr2 - s * s) / (2.0 * self.k_r_mirror);
        let airy = AiryFactors::eval(self.rho, phi);
        let cos2 = (2.0 * s).cos();
        let odd = 0.5 * (1.0 + cos2);
        let even = 0.5 * (1.0 - cos2);
        (
            w * (airy.odd_damping * odd + airy.even_damping * even),
            w * (airy.odd_shift * odd + airy.even_shift * even),
        )
    }

    /// `(gamma_term, shift_term, d shift_term / d kr)`
    #[inline]
    pub(crate) fn terms_with_gradient(&self, omega: &Vector3<f64>, in_cap: bool) -> (f64, f64, Vector3<f64>) {
        let w = self.weight(omega);
        if !in_cap || self.rho == 0.0 {
            return (w, 0.0, Vector3::zeros());
        }
        let s = self.kr.dot(omega);
        let phi = self.phi0 + (self.kr2 - s * s) / (2.0 * self.k_r_mirror);
        let airy = AiryFactors::eval(self.rho, phi);
        let (d_odd, d_even) = AiryFactors::shift_derivatives(self.rho, phi);
        let (sin2, cos2) = (2.0 * s).sin_cos();
        let odd = 0.5 * (1.0 + cos2);
        let even = 0.5 * (1.0 - cos2);
        // grad cos^2(s) = -sin(2s) n, grad sin^2(s) = +sin(2s) n,
        // grad phi = (kr - s n) / kR
        let grad_phi = (self.kr - omega * s) / self.k_r_mirror;
        let grad = grad_phi * (w * (d_odd * odd + d_even * even))
            + omega * (w * (airy.even_shift - airy.odd_shift) * sin2);
        (
            w * (airy.odd_damping * odd + airy.even_damping * even),
            w * (airy.odd_shift * odd + airy.even_shift * even),
            grad,
        )
    }
}
