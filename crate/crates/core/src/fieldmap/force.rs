//! Force from the position dependence of the vacuum level shift.
//!
//! With the excited population `pi_e`, the shift acts on the atom as the
//! potential `U = pi_e hbar Delta'(r)` and the force is `-pi_e hbar grad Delta'`.

use nalgebra::Vector3;
use serde::Serialize;

use super::response::response_at;
use crate::cavity::{CavityConfig, Detuning, DipoleOrientation, Position, Response};
use crate::error::{Error, Result};

/// Largest excited population for which the weak-excitation treatment is used.
pub const WEAK_EXCITATION_LIMIT: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceResult {
    /// In units of `hbar k Gamma_vac`.
    pub force: Vector3<f64>,
    /// In units of `hbar Gamma_vac`, zero far from the cavity center.
    pub potential: f64,
    pub excited_population: f64,
}

/// How the excited population is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Drive {
    /// Fixed population everywhere.
    Population(f64),
    /// Weak coherent drive; the population follows the local damping and
    /// shift. `rabi` and `laser_detuning` are in units of `Gamma_vac`.
    WeakDrive { rabi: f64, laser_detuning: f64 },
}

impl Drive {
    pub fn population(&self, response: &Response) -> Result<f64> {
        match *self {
            Drive::Population(p) => check_population(p).map(|_| p),
            Drive::WeakDrive { rabi, laser_detuning } => excited_population(rabi, laser_detuning, response),
        }
    }
}

fn check_population(pi_e: f64) -> Result<()> {
    if !(0.0..=0.5).contains(&pi_e) {
        return Err(Error::Domain(format!("excited population {pi_e} must lie in [0, 1/2]")));
    }
    Ok(())
}

/// Steady-state excited population of a weakly driven two-level atom with the
/// cavity-modified damping and shift.
pub fn excited_population(rabi: f64, laser_detuning: f64, response: &Response) -> Result<f64> {
    let p = weak_drive_population(rabi, laser_detuning, response);
    if p > WEAK_EXCITATION_LIMIT {
        return Err(Error::WeakExcitation(p));
    }
    Ok(p)
}

/// `(rabi/2)^2 / ((laser_detuning - shift)^2 + (gamma/2)^2)` without the validity check.
pub fn weak_drive_population(rabi: f64, laser_detuning: f64, response: &Response) -> f64 {
    let detuning = laser_detuning - response.shift_ratio;
    let half_width = 0.5 * response.gamma_ratio;
    (0.5 * rabi).powi(2) / (detuning * detuning + half_width * half_width)
}

/// Force and potential for a response that carries its shift gradient.
pub fn force_from_response(response: &Response, pi_e: f64) -> Result<ForceResult> {
    check_population(pi_e)?;
    let gradient = response
        .shift_gradient
        .ok_or_else(|| Error::Domain("force needs the shift gradient".into()))?;
    Ok(ForceResult { force: -gradient * pi_e, potential: pi_e * response.shift_ratio, excited_population: pi_e })
}

pub fn force_at(
    position: &Position,
    orientation: &DipoleOrientation,
    config: &CavityConfig,
    detuning: &Detuning,
    pi_e: f64,
    tolerance: f64,
) -> Result<ForceResult> {
    check_population(pi_e)?;
    let response = response_at(position, orientation, config, detuning, tolerance, true)?;
    force_from_response(&response, pi_e)
}
