use std::f64::consts::PI;

use crate::cavity::{effective_theta, CavityConfig, Position};
use crate::error::{Error, Result};

/// Minimum Gauss-Legendre order per polar subdomain.
pub const MIN_POLAR_NODES: usize = 32;
/// Minimum number of azimuth samples.
pub const MIN_AZIMUTH_NODES: usize = 16;
/// Nodes per unit of `|kr|`. `cos^2(k n.r)` completes `|kr|/pi` periods over
/// the sphere, so this is a little over 4 nodes per period.
pub const NODES_PER_KR: f64 = 4.0;

/// Tensor grid on the sphere: Gauss-Legendre in `cos(theta)` on each smooth
/// polar subdomain, uniform periodic rule in azimuth.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularGrid {
    n_polar: usize,
    n_azimuth: usize,
    /// Polar angles from `0` to `pi` where the integrand may have kinks.
    subdomain_boundaries: Vec<f64>,
}

impl AngularGrid {
    pub fn new(n_polar: usize, n_azimuth: usize, subdomain_boundaries: Vec<f64>) -> Result<Self> {
        if n_polar == 0 || n_azimuth == 0 {
            return Err(Error::Domain("angular grid needs at least one node per direction".into()));
        }
        let b = &subdomain_boundaries;
        let partitions = b.len() >= 2
            && b[0] == 0.0
            && b[b.len() - 1] == PI
            && b.windows(2).all(|w| w[0] < w[1]);
        if !partitions {
            return Err(Error::Domain(format!("subdomain boundaries {b:?} do not partition [0, pi]")));
        }
        Ok(AngularGrid { n_polar, n_azimuth, subdomain_boundaries })
    }

    /// Polar panels split at the two mirror edges.
    pub fn cavity_boundaries(config: &CavityConfig) -> Vec<f64> {
        let theta = effective_theta(config).expect("validated config has a positive aperture");
        vec![0.0, theta, PI - theta, PI]
    }

    /// Smallest node counts that resolve the standing-wave oscillation at `position`.
    pub fn minimum_counts(position: &Position) -> (usize, usize) {
        let r = position.kr().norm();
        let n_polar = MIN_POLAR_NODES.max((NODES_PER_KR * (r + 1.0)).ceil() as usize);
        let n_azimuth = MIN_AZIMUTH_NODES.max((NODES_PER_KR * (position.transverse() + 1.0)).ceil() as usize);
        (n_polar, n_azimuth)
    }

    pub fn for_position(position: &Position, config: &CavityConfig) -> Self {
        let (n_polar, n_azimuth) = Self::minimum_counts(position);
        AngularGrid { n_polar, n_azimuth, subdomain_boundaries: Self::cavity_boundaries(config) }
    }

    pub fn with_counts(config: &CavityConfig, n_polar: usize, n_azimuth: usize) -> Result<Self> {
        Self::new(n_polar, n_azimuth, Self::cavity_boundaries(config))
    }

    pub fn doubled(&self) -> Self {
        AngularGrid {
            n_polar: 2 * self.n_polar,
            n_azimuth: 2 * self.n_azimuth,
            subdomain_boundaries: self.subdomain_boundaries.clone(),
        }
    }

    pub fn n_polar(&self) -> usize {
        self.n_polar
    }

    pub fn n_azimuth(&self) -> usize {
        self.n_azimuth
    }

    pub fn subdomain_boundaries(&self) -> &[f64] {
        &self.subdomain_boundaries
    }

    /// Whether the node counts meet the resolution floor at `position`.
    pub fn resolves(&self, position: &Position) -> bool {
        let (p, a) = Self::minimum_counts(position);
        self.n_polar >= p && self.n_azimuth >= a
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn counts_scale_with_distance() {
        let cfg = CavityConfig::new(0.9, 8e4, FRAC_PI_4, false).unwrap();
        let g = AngularGrid::for_position(&Position::center(), &cfg);
        assert_eq!((g.n_polar(), g.n_azimuth()), (32, 16));
        let g = AngularGrid::for_position(&Position::from_components(30.0, 0.0, 40.0).unwrap(), &cfg);
        assert_eq!((g.n_polar(), g.n_azimuth()), (204, 124));
        assert!(g.resolves(&Position::on_axis(50.0).unwrap()));
        assert!(!g.resolves(&Position::on_axis(51.0).unwrap()));
        assert_eq!(g.doubled().n_polar(), 408);
    }

    #[test]
    fn boundaries_partition() {
        assert!(AngularGrid::new(8, 8, vec![0.0, 1.0, PI]).is_ok());
        assert!(AngularGrid::new(8, 8, vec![0.0, 2.0, 1.0, PI]).is_err());
        assert!(AngularGrid::new(8, 8, vec![0.1, PI]).is_err());
        assert!(AngularGrid::new(8, 8, vec![0.0, 3.0]).is_err());
        assert!(AngularGrid::new(0, 8, vec![0.0, PI]).is_err());
    }
}
