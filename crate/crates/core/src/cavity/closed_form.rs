//! Damping and level shift at the exact cavity center.
//!
//! At `r = 0` every ray sees the same phase `phi0` and only odd modes
//! couple, so the angular integral factorizes into solid-angle fractions
//! times the odd-mode Airy factors.

use super::airy::AiryFactors;
use super::geometry::effective_theta;
use super::types::{CavityConfig, DipoleOrientation};
use crate::error::{Error, Result};

/// Fractions of the full sphere covered by the two mirror caps and by the
/// open band between them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolidAngle {
    /// `cos(theta)` of the cap edge.
    pub cos_edge: f64,
}

impl SolidAngle {
    pub fn of(config: &CavityConfig) -> Result<Self> {
        Ok(SolidAngle { cos_edge: effective_theta(config)?.cos() })
    }

    /// `dOmega_cav / 4pi = 1 - cos(theta)` for the double cap.
    pub fn cavity_fraction(&self) -> f64 {
        1.0 - self.cos_edge
    }

    pub fn vacuum_fraction(&self) -> f64 {
        self.cos_edge
    }

    /// (vacuum, cavity) polarization factors multiplying the two fractions.
    fn orientation_factors(&self, orientation: &DipoleOrientation) -> Result<(f64, f64)> {
        let c = self.cos_edge;
        let sin2 = 1.0 - c * c;
        let rim = c * (1.0 + c);
        match orientation {
            DipoleOrientation::Parallel => Ok((1.0 + sin2 / 2.0, 1.0 - rim / 2.0)),
            DipoleOrientation::Perpendicular => Ok((1.0 - sin2 / 4.0, 1.0 + rim / 4.0)),
            DipoleOrientation::Isotropic => Ok((1.0, 1.0)),
            DipoleOrientation::Fixed(_) => Err(Error::Unsupported(
                "no closed form at the center for an arbitrary dipole direction; use sphere quadrature".into(),
            )),
        }
    }
}

/// `Gamma(0)/Gamma_vac` for the parallel, perpendicular or isotropic dipole.
pub fn center_gamma(orientation: &DipoleOrientation, config: &CavityConfig, phi0: f64) -> Result<f64> {
    let omega = SolidAngle::of(config)?;
    let (vac, cav) = omega.orientation_factors(orientation)?;
    let airy = AiryFactors::eval(config.rho(), phi0);
    Ok(omega.vacuum_fraction() * vac + omega.cavity_fraction() * cav * airy.odd_damping)
}

/// `Delta'(0)/Gamma_vac` for the parallel, perpendicular or isotropic dipole.
pub fn center_shift(orientation: &DipoleOrientation, config: &CavityConfig, phi0: f64) -> Result<f64> {
    let omega = SolidAngle::of(config)?;
    let (_, cav) = omega.orientation_factors(orientation)?;
    let airy = AiryFactors::eval(config.rho(), phi0);
    Ok(omega.cavity_fraction() * cav * airy.odd_shift)
}

/// Isotropic center damping for a given cavity solid-angle fraction, e.g. a
/// rounded value quoted for a 45 degree mirror.
pub fn isotropic_center_gamma(cavity_fraction: f64, rho: f64, phi0: f64) -> f64 {
    (1.0 - cavity_fraction) + cavity_fraction * AiryFactors::eval(rho, phi0).odd_damping
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cavity::Detuning;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    const SYMMETRIC: [DipoleOrientation; 3] =
        [DipoleOrientation::Parallel, DipoleOrientation::Perpendicular, DipoleOrientation::Isotropic];

    fn reference_cavity() -> CavityConfig {
        CavityConfig::new(0.98, 8e4, FRAC_PI_4, false).unwrap()
    }

    #[test]
    fn thirty_fold_enhancement() {
        let g = center_gamma(&DipoleOrientation::Isotropic, &reference_cavity(), 0.0).unwrap();
        let c = FRAC_PI_4.cos();
        assert_relative_eq!(g, c + (1.0 - c) * 99.0, max_relative = 1e-13);
        assert!((g - 29.70354).abs() < 1e-5);
        assert_relative_eq!(isotropic_center_gamma(0.3, 0.98, 0.0), 30.4, max_relative = 1e-13);
    }

    #[test]
    fn shift_vanishes_on_resonance() {
        for o in SYMMETRIC {
            assert_eq!(center_shift(&o, &reference_cavity(), 0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn free_space_identity() {
        for theta in [0.1, 0.5, FRAC_PI_4, 1.4] {
            let cfg = CavityConfig::new(0.0, 1e5, theta, false).unwrap();
            for o in SYMMETRIC {
                for phi in [-1.0, 0.0, 0.2] {
                    assert!((center_gamma(&o, &cfg, phi).unwrap() - 1.0).abs() < 1e-12);
                    assert_eq!(center_shift(&o, &cfg, phi).unwrap(), 0.0);
                }
            }
        }
    }

    #[test]
    fn fixed_direction_is_unsupported() {
        let d = DipoleOrientation::fixed(nalgebra::Vector3::new(0.6, 0.0, 0.8)).unwrap();
        assert!(matches!(center_gamma(&d, &reference_cavity(), 0.0), Err(Error::Unsupported(_))));
        assert!(matches!(center_shift(&d, &reference_cavity(), 0.0), Err(Error::Unsupported(_))));
    }

    #[test]
    fn perpendicular_above_parallel_on_resonance() {
        let par = center_gamma(&DipoleOrientation::Parallel, &reference_cavity(), 0.0).unwrap();
        let perp = center_gamma(&DipoleOrientation::Perpendicular, &reference_cavity(), 0.0).unwrap();
        assert!(perp > par && par > 1.0);
    }

    #[test]
    fn half_linewidth_shift_with_diffraction_loss() {
        // independently: (1 - cos theta_eff) * rho sin(2 phi) / ((1-rho)^2 + 4 rho sin^2 phi)
        let cfg = CavityConfig::new(0.98, 8e4, FRAC_PI_4, true).unwrap();
        let phi = Detuning::from_linewidths(0.5, 0.98).unwrap().phi0();
        let theta = FRAC_PI_4 - 1.0 / 3168f64.sqrt();
        let expect = (1.0 - theta.cos()) * 0.98 * (2.0 * phi).sin()
            / (0.02f64.powi(2) + 4.0 * 0.98 * phi.sin().powi(2));
        let got = center_shift(&DipoleOrientation::Isotropic, &cfg, phi).unwrap();
        assert_relative_eq!(got, expect, max_relative = 1e-12);
        assert!((got - 6.940_244).abs() < 1e-5, "{got}");
    }

    proptest! {
        #[test]
        fn orientation_decomposition(rho in 0.0..0.995f64, theta in 0.05..1.5f64, phi in -FRAC_PI_2..FRAC_PI_2) {
            let cfg = CavityConfig::new(rho, 1e5, theta, false).unwrap();
            let g = |o| center_gamma(&o, &cfg, phi).unwrap();
            let s = |o| center_shift(&o, &cfg, phi).unwrap();
            let iso = g(DipoleOrientation::Isotropic);
            let mix = (g(DipoleOrientation::Parallel) + 2.0 * g(DipoleOrientation::Perpendicular)) / 3.0;
            prop_assert!((iso - mix).abs() <= 1e-12 * iso.abs());
            let iso = s(DipoleOrientation::Isotropic);
            let mix = (s(DipoleOrientation::Parallel) + 2.0 * s(DipoleOrientation::Perpendicular)) / 3.0;
            prop_assert!((iso - mix).abs() <= 1e-12 * iso.abs().max(1e-300));
        }

        #[test]
        fn detuning_parity(rho in 0.2..0.995f64, phi in 0.0..FRAC_PI_2) {
            let cfg = CavityConfig::new(rho, 1e5, FRAC_PI_4, false).unwrap();
            for o in SYMMETRIC {
                let gp = center_gamma(&o, &cfg, phi).unwrap();
                let gm = center_gamma(&o, &cfg, -phi).unwrap();
                prop_assert!((gp - gm).abs() <= 1e-12 * gp);
                let sp = center_shift(&o, &cfg, phi).unwrap();
                let sm = center_shift(&o, &cfg, -phi).unwrap();
                prop_assert!((sp + sm).abs() <= 1e-12 * sp.abs().max(1e-300));
            }
        }
    }
}
