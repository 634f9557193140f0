use std::f64::consts::FRAC_PI_2;

use nalgebra::Vector3;
use serde::Serialize;

use super::geometry::fwhm_phase;
use crate::error::{Error, Result};

/// Smallest kR for which the asymptotic mirror boundary conditions hold.
pub const MIN_K_R_MIRROR: f64 = 1.0e3;
/// Hard limit on |kr|; beyond this the ray picture of the resonator is not
/// trusted at all.
pub const MAX_KR: f64 = 300.0;
/// Above this |kr| results are produced but flagged with a warning.
pub const WARN_KR: f64 = 100.0;

const UNIT_NORM_TOL: f64 = 1e-12;

/// Symmetric concentric two-mirror resonator.
///
/// The power transmission is not an independent parameter: lossless mirrors
/// give `T = 1 - rho^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CavityConfig {
    rho: f64,
    transmission: f64,
    k_r_mirror: f64,
    theta_m: f64,
    apply_diffraction_correction: bool,
}

impl CavityConfig {
    pub fn new(
        rho: f64,
        k_r_mirror: f64,
        theta_m: f64,
        apply_diffraction_correction: bool,
    ) -> Result<Self> {
        if !(0.0..1.0).contains(&rho) {
            return Err(Error::Domain(format!(
                "mirror reflectivity rho = {rho} must lie in [0, 1)"
            )));
        }
        if !(k_r_mirror >= MIN_K_R_MIRROR) || !k_r_mirror.is_finite() {
            return Err(Error::Domain(format!(
                "kR = {k_r_mirror} must be at least {MIN_K_R_MIRROR}"
            )));
        }
        if !(theta_m > 0.0 && theta_m < FRAC_PI_2) {
            return Err(Error::Domain(format!(
                "mirror half-aperture {theta_m} rad must lie in (0, pi/2)"
            )));
        }
        let config = CavityConfig {
            rho,
            transmission: 1.0 - rho * rho,
            k_r_mirror,
            theta_m,
            apply_diffraction_correction,
        };
        if apply_diffraction_correction && config.theta_m - config.diffraction_loss_angle() <= 0.0 {
            return Err(Error::Domain(format!(
                "diffraction correction {:.6} rad removes the whole aperture {theta_m} rad",
                config.diffraction_loss_angle()
            )));
        }
        Ok(config)
    }

    /// Same as [`CavityConfig::new`] with the aperture given in degrees.
    pub fn from_degrees(
        rho: f64,
        k_r_mirror: f64,
        theta_m_deg: f64,
        apply_diffraction_correction: bool,
    ) -> Result<Self> {
        Self::new(rho, k_r_mirror, theta_m_deg.to_radians(), apply_diffraction_correction)
    }

    /// Mirrors removed: the free-space reference.
    pub fn free_space(k_r_mirror: f64, theta_m: f64) -> Result<Self> {
        Self::new(0.0, k_r_mirror, theta_m, false)
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn transmission(&self) -> f64 {
        self.transmission
    }

    pub fn k_r_mirror(&self) -> f64 {
        self.k_r_mirror
    }

    pub fn theta_m(&self) -> f64 {
        self.theta_m
    }

    pub fn apply_diffraction_correction(&self) -> bool {
        self.apply_diffraction_correction
    }

    /// `1/sqrt(kR T)`, the angular width of the rim lost to diffraction.
    pub fn diffraction_loss_angle(&self) -> f64 {
        1.0 / (self.k_r_mirror * self.transmission).sqrt()
    }

    /// Numerical aperture `sin(theta_m)`.
    pub fn numerical_aperture(&self) -> f64 {
        self.theta_m.sin()
    }

    pub fn with_rho(&self, rho: f64) -> Result<Self> {
        Self::new(rho, self.k_r_mirror, self.theta_m, self.apply_diffraction_correction)
    }
}

/// Orientation of the atomic dipole relative to the cavity axis (`z`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DipoleOrientation {
    /// Along the cavity axis.
    Parallel,
    /// Along `x`, perpendicular to the cavity axis.
    Perpendicular,
    /// Average over random orientations.
    Isotropic,
    Fixed(UnitVector),
}

impl DipoleOrientation {
    /// Accepts any vector within `1e-12` of unit norm.
    pub fn fixed(d: Vector3<f64>) -> Result<Self> {
        UnitVector::new(d).map(DipoleOrientation::Fixed)
    }

    /// The dipole direction, or `None` for the isotropic average.
    pub fn direction(&self) -> Option<Vector3<f64>> {
        match self {
            DipoleOrientation::Parallel => Some(Vector3::z()),
            DipoleOrientation::Perpendicular => Some(Vector3::x()),
            DipoleOrientation::Isotropic => None,
            DipoleOrientation::Fixed(d) => Some(d.into_inner()),
        }
    }

    pub fn label(&self) -> String {
        match self {
            DipoleOrientation::Parallel => "parallel".into(),
            DipoleOrientation::Perpendicular => "perpendicular".into(),
            DipoleOrientation::Isotropic => "isotropic".into(),
            DipoleOrientation::Fixed(d) => {
                let d = d.into_inner();
                format!("[{}, {}, {}]", d.x, d.y, d.z)
            }
        }
    }

    /// Whether the dipole pattern is unchanged by rotations about the axis.
    pub fn is_axially_symmetric(&self) -> bool {
        matches!(self, DipoleOrientation::Parallel | DipoleOrientation::Isotropic)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitVector(Vector3<f64>);

impl UnitVector {
    pub fn new(v: Vector3<f64>) -> Result<Self> {
        let norm = v.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > UNIT_NORM_TOL {
            return Err(Error::Domain(format!(
                "dipole direction must have unit norm, got |d| = {norm}"
            )));
        }
        Ok(UnitVector(v))
    }

    pub fn into_inner(self) -> Vector3<f64> {
        self.0
    }
}

/// Atom displacement from the cavity center, in units of `1/k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Position(Vector3<f64>);

impl Position {
    pub fn new(kr: Vector3<f64>) -> Result<Self> {
        let r = kr.norm();
        if !r.is_finite() || r > MAX_KR {
            return Err(Error::Domain(format!(
                "|kr| = {r} exceeds the model limit of {MAX_KR}"
            )));
        }
        if r > WARN_KR {
            log::warn!("|kr| = {r:.1} is outside the region |kr| <= {WARN_KR} where the ray model was validated");
        }
        Ok(Position(kr))
    }

    pub fn from_components(x: f64, y: f64, z: f64) -> Result<Self> {
        Self::new(Vector3::new(x, y, z))
    }

    pub fn center() -> Self {
        Position(Vector3::zeros())
    }

    pub fn on_axis(kz: f64) -> Result<Self> {
        Self::new(Vector3::new(0.0, 0.0, kz))
    }

    pub fn kr(&self) -> Vector3<f64> {
        self.0
    }

    /// Distance from the cavity axis.
    pub fn transverse(&self) -> f64 {
        self.0.x.hypot(self.0.y)
    }

    pub fn is_on_axis(&self) -> bool {
        self.0.x == 0.0 && self.0.y == 0.0
    }
}

/// Atom-cavity detuning `(w0 - w_cav)/kappa` and the matching round-trip
/// half phase, measured from the nearest odd-mode resonance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Detuning {
    linewidths: f64,
    phi0: f64,
}

impl Detuning {
    /// Maps a detuning in cavity linewidths onto the round-trip phase.
    ///
    /// With no mirrors (`rho == 0`) the response does not depend on the phase
    /// and the detuning maps to zero phase.
    pub fn from_linewidths(linewidths: f64, rho: f64) -> Result<Self> {
        if rho == 0.0 {
            return Ok(Detuning { linewidths, phi0: 0.0 });
        }
        let fwhm = fwhm_phase(rho)?;
        let limit = FRAC_PI_2 / fwhm;
        if !(linewidths.abs() <= limit * (1.0 + 1e-12)) {
            return Err(Error::Domain(format!(
                "detuning {linewidths} linewidths is outside the single-resonance window +/-{limit:.4}"
            )));
        }
        Ok(Detuning { linewidths, phi0: linewidths * fwhm })
    }

    /// Inverse of [`Detuning::from_linewidths`].
    pub fn from_phase(phi0: f64, rho: f64) -> Result<Self> {
        if !(phi0.abs() <= FRAC_PI_2 * (1.0 + 1e-12)) {
            return Err(Error::Domain(format!(
                "phase {phi0} is outside the single-resonance window +/-pi/2"
            )));
        }
        if rho == 0.0 {
            return Ok(Detuning { linewidths: 0.0, phi0 });
        }
        Ok(Detuning { linewidths: phi0 / fwhm_phase(rho)?, phi0 })
    }

    pub fn resonant() -> Self {
        Detuning { linewidths: 0.0, phi0: 0.0 }
    }

    pub fn linewidths(&self) -> f64 {
        self.linewidths
    }

    pub fn phi0(&self) -> f64 {
        self.phi0
    }
}

/// `Gamma(r)/Gamma_vac` and `Delta'(r)/Gamma_vac`, optionally with the
/// gradient of the shift with respect to `kr`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Response {
    pub gamma_ratio: f64,
    pub shift_ratio: f64,
    pub shift_gradient: Option<Vector3<f64>>,
}

impl Response {
    pub fn new(gamma_ratio: f64, shift_ratio: f64) -> Self {
        Response { gamma_ratio, shift_ratio, shift_gradient: None }
    }

    pub fn free_space() -> Self {
        Response::new(1.0, 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn transmission_follows_reflectivity() {
        let c = CavityConfig::new(0.98, 8e4, FRAC_PI_4, false).unwrap();
        assert_eq!(c.transmission(), 1.0 - 0.98 * 0.98);
    }

    #[test]
    fn rejects_bad_mirrors() {
        assert!(CavityConfig::new(1.0, 8e4, FRAC_PI_4, false).is_err());
        assert!(CavityConfig::new(-0.1, 8e4, FRAC_PI_4, false).is_err());
        assert!(CavityConfig::new(1.2, 8e4, FRAC_PI_4, false).is_err());
        assert!(CavityConfig::new(0.9, 999.0, FRAC_PI_4, false).is_err());
        assert!(CavityConfig::new(0.9, 8e4, FRAC_PI_2, false).is_err());
        assert!(CavityConfig::new(0.9, 8e4, 0.0, false).is_err());
        // 1/sqrt(1000 * 0.0199) = 0.224 rad eats a 10 degree mirror entirely
        assert!(CavityConfig::new(0.99, 1e3, 10f64.to_radians(), true).is_err());
        assert!(CavityConfig::new(0.99, 1e3, 10f64.to_radians(), false).is_ok());
    }

    #[test]
    fn unit_vector_tolerance() {
        assert!(DipoleOrientation::fixed(Vector3::new(0.6, 0.8, 0.0)).is_ok());
        assert!(DipoleOrientation::fixed(Vector3::new(0.6, 0.8, 1e-5)).is_err());
        assert!(DipoleOrientation::fixed(Vector3::new(1.0 + 1e-13, 0.0, 0.0)).is_ok());
    }

    #[test]
    fn position_limits() {
        assert!(Position::on_axis(300.0).is_ok());
        assert!(Position::on_axis(-300.0001).is_err());
        assert!(Position::from_components(f64::NAN, 0.0, 0.0).is_err());
        assert!(Position::from_components(3.0, 4.0, 0.0).unwrap().transverse() == 5.0);
    }

    #[test]
    fn detuning_window() {
        let fsr_half = FRAC_PI_2 / fwhm_phase(0.98).unwrap();
        assert!(Detuning::from_linewidths(fsr_half, 0.98).is_ok());
        assert!(Detuning::from_linewidths(fsr_half * 1.001, 0.98).is_err());
        assert!(Detuning::from_linewidths(1.0, 0.1).is_err());
        assert_eq!(Detuning::from_linewidths(5.0, 0.0).unwrap().phi0(), 0.0);
        let d = Detuning::from_phase(0.3, 0.9).unwrap();
        let back = Detuning::from_linewidths(d.linewidths(), 0.9).unwrap();
        assert!((back.phi0() - 0.3).abs() < 1e-15);
    }
}
