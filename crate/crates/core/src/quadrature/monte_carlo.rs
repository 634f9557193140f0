//! Plain Monte-Carlo estimate of the sphere averages, used as an oracle for
//! the tensor-product quadrature.

use std::f64::consts::PI;

use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::integrand::Integrand;
use crate::cavity::{CavityConfig, DipoleOrientation, Position, Response};
use crate::error::{Error, Result};

pub const MIN_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub response: Response,
    pub gamma_stderr: f64,
    pub shift_stderr: f64,
    pub n_samples: usize,
}

impl MonteCarloEstimate {
    /// Distance of `other` from this estimate in standard errors, per component.
    /// A zero standard error with an exact match counts as zero sigma.
    pub fn sigmas(&self, other: &Response) -> (f64, f64) {
        let z = |diff: f64, se: f64| if diff == 0.0 { 0.0 } else { diff.abs() / se };
        (
            z(other.gamma_ratio - self.response.gamma_ratio, self.gamma_stderr),
            z(other.shift_ratio - self.response.shift_ratio, self.shift_stderr),
        )
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Welford {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Welford {
    fn push(&mut self, x: f64) {
        self.n += 1.0;
        let delta = x - self.mean;
        self.mean += delta / self.n;
        self.m2 += delta * (x - self.mean);
    }

    fn stderr(&self) -> f64 {
        (self.m2 / (self.n - 1.0) / self.n).sqrt()
    }
}

/// Averages the integrands over `n_samples` directions drawn uniformly on the
/// sphere. Deterministic for a given `seed`.
pub fn monte_carlo_reference(
    position: &Position,
    orientation: &DipoleOrientation,
    config: &CavityConfig,
    phi0: f64,
    n_samples: usize,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    if n_samples < MIN_SAMPLES {
        return Err(Error::Domain(format!(
            "Monte-Carlo reference needs at least {MIN_SAMPLES} samples, got {n_samples}"
        )));
    }
    let integrand = Integrand::new(position, orientation, config, phi0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gamma = Welford::default();
    let mut shift = Welford::default();
    for _ in 0..n_samples {
        // uniform in cos(theta) and azimuth is uniform on the sphere
        let u: f64 = rng.gen_range(-1.0..1.0);
        let az: f64 = rng.gen_range(0.0..2.0 * PI);
        let sin_theta = (1.0 - u * u).sqrt();
        let omega = Vector3::new(sin_theta * az.cos(), sin_theta * az.sin(), u);
        let (g, s) = integrand.terms(&omega, integrand.in_cap(&omega));
        gamma.push(g);
        shift.push(s);
    }
    Ok(MonteCarloEstimate {
        response: Response::new(gamma.mean, shift.mean),
        gamma_stderr: gamma.stderr(),
        shift_stderr: shift.stderr(),
        n_samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate_sphere, AngularGrid};
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn free_space_mean() {
        let cfg = CavityConfig::new(0.0, 8e4, FRAC_PI_4, false).unwrap();
        let pos = Position::from_components(5.0, 1.0, -8.0).unwrap();
        let est = monte_carlo_reference(&pos, &DipoleOrientation::Parallel, &cfg, 0.0, 20_000, 7).unwrap();
        assert!((est.response.gamma_ratio - 1.0).abs() < 3.0 * est.gamma_stderr);
        assert_eq!(est.response.shift_ratio, 0.0);
        // isotropic weight is identically one
        let est = monte_carlo_reference(&pos, &DipoleOrientation::Isotropic, &cfg, 0.0, 20_000, 7).unwrap();
        assert_eq!(est.response.gamma_ratio, 1.0);
    }

    #[test]
    fn deterministic_per_seed() {
        let cfg = CavityConfig::new(0.9, 8e4, FRAC_PI_4, true).unwrap();
        let pos = Position::from_components(2.0, 0.0, 9.0).unwrap();
        let a = monte_carlo_reference(&pos, &DipoleOrientation::Isotropic, &cfg, 0.05, 10_000, 3).unwrap();
        let b = monte_carlo_reference(&pos, &DipoleOrientation::Isotropic, &cfg, 0.05, 10_000, 3).unwrap();
        let c = monte_carlo_reference(&pos, &DipoleOrientation::Isotropic, &cfg, 0.05, 10_000, 4).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.response, c.response);
    }

    #[test]
    fn rejects_small_sample() {
        let cfg = CavityConfig::new(0.9, 8e4, FRAC_PI_4, false).unwrap();
        assert!(monte_carlo_reference(&Position::center(), &DipoleOrientation::Isotropic, &cfg, 0.0, 9_999, 1).is_err());
    }

    #[test]
    fn stderr_shrinks_as_root_n() {
        let cfg = CavityConfig::new(0.95, 8e4, FRAC_PI_4, false).unwrap();
        let pos = Position::from_components(4.0, 0.0, 11.0).unwrap();
        let o = DipoleOrientation::Perpendicular;
        let a = monte_carlo_reference(&pos, &o, &cfg, 0.02, 100_000, 11).unwrap();
        let b = monte_carlo_reference(&pos, &o, &cfg, 0.02, 200_000, 12).unwrap();
        let ratio = b.gamma_stderr / a.gamma_stderr;
        assert!((ratio - 0.5f64.sqrt()).abs() < 0.2 * 0.5f64.sqrt(), "{ratio}");
        let ratio = b.shift_stderr / a.shift_stderr;
        assert!((ratio - 0.5f64.sqrt()).abs() < 0.2 * 0.5f64.sqrt(), "{ratio}");
    }

    #[test]
    fn agrees_with_quadrature() {
        let cfg = CavityConfig::new(0.9, 8e4, FRAC_PI_4, true).unwrap();
        let pos = Position::from_components(6.0, -3.0, 15.0).unwrap();
        let o = DipoleOrientation::Perpendicular;
        let grid = AngularGrid::for_position(&pos, &cfg);
        let quad = integrate_sphere(&pos, &o, &cfg, -0.03, &grid, false).unwrap();
        let est = monte_carlo_reference(&pos, &o, &cfg, -0.03, 200_000, 2024).unwrap();
        let (zg, zs) = est.sigmas(&quad);
        assert!(zg < 3.0 && zs < 3.0, "{zg} {zs}");
    }
}
