//! Sphere quadrature for the direction integrals, and an independent
//! Monte-Carlo estimate of the same integrals.

mod gauss_legendre;
mod grid;
mod integrand;
mod monte_carlo;
mod sphere;

pub use gauss_legendre::GaussLegendre;
pub use grid::{AngularGrid, MIN_AZIMUTH_NODES, MIN_POLAR_NODES, NODES_PER_KR};
pub use integrand::{integrand_at, IntegrandSample};
pub use monte_carlo::{monte_carlo_reference, MonteCarloEstimate, MIN_SAMPLES};
pub use sphere::{integrate_sphere, integrate_sphere_checked, response_change};
