use nalgebra::Vector3;

use crate::cavity::{CavityConfig, Detuning, DipoleOrientation, Position, Response};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_sphere_checked, AngularGrid};

/// Default convergence tolerance for the grid-doubling check.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
/// How many times the starting grid may be doubled before giving up.
pub const MAX_REFINEMENTS: usize = 4;

/// Damping and shift at `position`, with the angular grid sized
/// automatically and refined until doubling it moves the result by less
/// than `tolerance` (relative to `max(1, Gamma)`).
pub fn response_at(
    position: &Position,
    orientation: &DipoleOrientation,
    config: &CavityConfig,
    detuning: &Detuning,
    tolerance: f64,
    with_gradient: bool,
) -> Result<Response> {
    let mut grid = AngularGrid::for_position(position, config);
    let mut attempt = 0;
    loop {
        match integrate_sphere_checked(position, orientation, config, detuning.phi0(), &grid, tolerance, with_gradient) {
            Err(Error::NonConvergence { .. }) if attempt < MAX_REFINEMENTS => {
                grid = grid.doubled();
                attempt += 1;
            }
            other => return other,
        }
    }
}

/// Gradient of `Delta'/Gamma_vac` with respect to `kr`, from the analytic
/// derivative of the integrand.
pub fn shift_gradient(
    position: &Position,
    orientation: &DipoleOrientation,
    config: &CavityConfig,
    detuning: &Detuning,
    tolerance: f64,
) -> Result<Vector3<f64>> {
    let response = response_at(position, orientation, config, detuning, tolerance, true)?;
    Ok(response.shift_gradient.expect("gradient was requested"))
}
