//! Detuning and spatial scans of the damping, shift and force.

use nalgebra::Vector3;
use rayon::prelude::*;
use serde::Serialize;

use super::force::{force_from_response, weak_drive_population, Drive, ForceResult, WEAK_EXCITATION_LIMIT};
use super::response::response_at;
use crate::cavity::{center_gamma, center_shift, CavityConfig, Detuning, DipoleOrientation, Position, Response};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "type")]
pub enum ScanAxis {
    /// Detuning in cavity linewidths, at the fixed position.
    Detuning,
    /// `k z` along the cavity axis, offset by the fixed position.
    Axial,
    /// `k x` across the axis, offset by the fixed position.
    Transverse,
    /// `(k z, k x)`; `start..stop` spans `k z`, the fields here span `k x`.
    Plane { x_start: f64, x_stop: f64, x_points: usize },
}

/// How responses are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Closed forms at the cavity center when they exist, quadrature otherwise.
    Auto,
    /// Always integrate over the sphere.
    Quadrature,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanSpec {
    pub axis: ScanAxis,
    pub start: f64,
    pub stop: f64,
    pub n_points: usize,
    pub config: CavityConfig,
    pub orientation: DipoleOrientation,
    /// Held fixed in spatial scans.
    pub detuning: Detuning,
    /// Held fixed in detuning scans; offset for spatial scans.
    pub position: Position,
    pub method: Method,
}

impl ScanSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.start < self.stop) {
            return Err(Error::Domain(format!("scan start {} must be below stop {}", self.start, self.stop)));
        }
        if self.n_points < 2 {
            return Err(Error::Domain(format!("scan needs at least 2 points, got {}", self.n_points)));
        }
        if let ScanAxis::Plane { x_start, x_stop, x_points } = self.axis {
            if !(x_start < x_stop) || x_points < 2 {
                return Err(Error::Domain(format!(
                    "transverse range [{x_start}, {x_stop}] with {x_points} points is not a valid scan"
                )));
            }
        }
        Ok(())
    }

    /// Scan coordinates in row order.
    pub fn coordinates(&self) -> Vec<Vec<f64>> {
        let main = linspace(self.start, self.stop, self.n_points);
        match self.axis {
            ScanAxis::Plane { x_start, x_stop, x_points } => {
                let xs = linspace(x_start, x_stop, x_points);
                main.iter().flat_map(|&z| xs.iter().map(move |&x| vec![z, x])).collect()
            }
            _ => main.into_iter().map(|c| vec![c]).collect(),
        }
    }

    fn point(&self, coords: &[f64]) -> Result<(Position, Detuning)> {
        let base = self.position.kr();
        let rho = self.config.rho();
        match self.axis {
            ScanAxis::Detuning => Ok((self.position, Detuning::from_linewidths(coords[0], rho)?)),
            ScanAxis::Axial => Ok((Position::new(base + Vector3::new(0.0, 0.0, coords[0]))?, self.detuning)),
            ScanAxis::Transverse => Ok((Position::new(base + Vector3::new(coords[0], 0.0, 0.0))?, self.detuning)),
            ScanAxis::Plane { .. } => {
                Ok((Position::new(base + Vector3::new(coords[1], 0.0, coords[0]))?, self.detuning))
            }
        }
    }
}

/// What each row carries besides damping and shift.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ScanOutputs {
    pub gradient: bool,
    pub drive: Option<Drive>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Ok,
    NonConverged,
    WeakExcitationViolated,
}

impl RowStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            RowStatus::Ok => "ok",
            RowStatus::NonConverged => "non_converged",
            RowStatus::WeakExcitationViolated => "weak_excitation_violated",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub coords: Vec<f64>,
    pub response: Response,
    pub force: Option<ForceResult>,
    pub status: RowStatus,
}

/// Evaluates every point of `spec`. Rows come back in coordinate order
/// whatever the thread count; a point that fails to converge keeps its
/// finest estimate and is flagged instead of aborting the scan.
pub fn run_scan(spec: &ScanSpec, tolerance: f64, outputs: ScanOutputs) -> Result<Vec<ScanRow>> {
    spec.validate()?;
    let points = spec
        .coordinates()
        .into_iter()
        .map(|c| spec.point(&c).map(|p| (c, p)))
        .collect::<Result<Vec<_>>>()?;
    let with_gradient = outputs.gradient || outputs.drive.is_some();
    points
        .into_par_iter()
        .map(|(coords, (position, detuning))| {
            let (response, mut status) = match evaluate(spec, &position, &detuning, tolerance, with_gradient) {
                Ok(r) => (r, RowStatus::Ok),
                Err(Error::NonConvergence { estimate, .. }) => (estimate, RowStatus::NonConverged),
                Err(e) => return Err(e),
            };
            let force = match outputs.drive {
                None => None,
                Some(drive) => {
                    let pi_e = match drive {
                        Drive::Population(p) => p,
                        Drive::WeakDrive { rabi, laser_detuning } => {
                            let p = weak_drive_population(rabi, laser_detuning, &response);
                            if p > WEAK_EXCITATION_LIMIT && status == RowStatus::Ok {
                                status = RowStatus::WeakExcitationViolated;
                            }
                            p.min(0.5)
                        }
                    };
                    Some(force_from_response(&response, pi_e)?)
                }
            };
            Ok(ScanRow { coords, response, force, status })
        })
        .collect()
}

fn evaluate(
    spec: &ScanSpec,
    position: &Position,
    detuning: &Detuning,
    tolerance: f64,
    with_gradient: bool,
) -> Result<Response> {
    let closed_form = spec.method == Method::Auto
        && *position == Position::center()
        && !matches!(spec.orientation, DipoleOrientation::Fixed(_));
    if closed_form {
        let phi0 = detuning.phi0();
        return Ok(Response {
            gamma_ratio: center_gamma(&spec.orientation, &spec.config, phi0)?,
            shift_ratio: center_shift(&spec.orientation, &spec.config, phi0)?,
            // the center is a symmetry point of the shift
            shift_gradient: with_gradient.then(Vector3::zeros),
        });
    }
    response_at(position, &spec.orientation, &spec.config, detuning, tolerance, with_gradient)
}

/// Deepest point of a force/potential scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrapSummary {
    /// `U_min` in `hbar Gamma_vac`; the potential is zero far from the center.
    pub depth: f64,
    pub location: Vec<f64>,
}

pub fn trap_summary(rows: &[ScanRow]) -> Option<TrapSummary> {
    rows.iter()
        .filter_map(|r| r.force.map(|f| (f.potential, &r.coords)))
        .fold(None, |best: Option<(f64, &Vec<f64>)>, (u, c)| match best {
            Some((b, _)) if b <= u => best,
            _ => Some((u, c)),
        })
        .map(|(depth, c)| TrapSummary { depth, location: c.clone() })
}

pub fn linspace(start: f64, stop: f64, n: usize) -> Vec<f64> {
    let last = (n - 1) as f64;
    (0..n)
        .map(|i| if i + 1 == n { stop } else { start + (stop - start) * (i as f64) / last })
        .collect()
}
