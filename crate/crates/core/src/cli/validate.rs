//! Self-check suite run by `validate`.
//!
//! Every check compares the production path against something computed a
//! different way: closed forms, Monte-Carlo sampling, finite differences,
//! exact sum rules and symmetries.

use nalgebra::{Rotation3, Vector3};
use serde::Serialize;
use serde_json::json;

use super::config::RunConfig;
use super::CliError;
use crate::cavity::{center_gamma, center_shift, CavityConfig, DipoleOrientation, Position, Response};
use crate::fieldmap::response_at;
use crate::quadrature::{integrate_sphere, monte_carlo_reference, AngularGrid};

pub const DEFAULT_SEED: u64 = 1;
pub const MC_SAMPLES: usize = 200_000;
/// Standard errors allowed between quadrature and the Monte-Carlo mean.
pub const MC_SIGMAS: f64 = 4.0;
pub const FD_STEP: f64 = 0.05;
pub const FSR_POINTS: usize = 4096;

/// Off-center probe points in units of `1/k`.
pub const PROBES: [[f64; 3]; 3] = [[3.0, -2.0, 5.0], [0.0, 0.0, 12.5], [-7.0, 4.0, -1.5]];

const SYMMETRIC: [DipoleOrientation; 3] =
    [DipoleOrientation::Parallel, DipoleOrientation::Perpendicular, DipoleOrientation::Isotropic];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub max_error: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &'static str, max_error: f64, tolerance: f64, detail: String) -> Self {
        CheckResult { name, passed: max_error <= tolerance, max_error, tolerance, detail }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed_names(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({ "passed": self.passed(), "checks": self.checks })
    }
}

/// Largest of `errors`, with the index that produced it.
fn worst(errors: impl IntoIterator<Item = f64>) -> (f64, usize) {
    errors.into_iter().enumerate().fold((0.0, 0), |(m, i), (j, e)| if e > m || e.is_nan() { (e, j) } else { (m, i) })
}

fn probes() -> Vec<Position> {
    PROBES.iter().map(|p| Position::new(Vector3::from(*p)).expect("probe points are in range")).collect()
}

pub fn run_validation(cfg: &RunConfig, tolerance: f64, seed: u64) -> Result<ValidationReport, CliError> {
    let c = &cfg.cavity;
    let phi0 = cfg.detuning.phi0();
    let checks = vec![
        closed_form_vs_quadrature(c, phi0, tolerance)?,
        orientation_decomposition(c, phi0)?,
        monte_carlo(cfg, tolerance, seed)?,
        gradient(cfg)?,
        fsr_sum_rules(c)?,
        parity(cfg, tolerance)?,
        rotation(cfg, tolerance)?,
        free_space(c, phi0, tolerance)?,
    ];
    Ok(ValidationReport { checks })
}

fn closed_form_vs_quadrature(c: &CavityConfig, phi0: f64, tol: f64) -> Result<CheckResult, CliError> {
    let detuning = crate::cavity::Detuning::from_phase(phi0, c.rho())?;
    let mut errors = Vec::new();
    for o in &SYMMETRIC {
        let q = response_at(&Position::center(), o, c, &detuning, tol, false)?;
        let g = center_gamma(o, c, phi0)?;
        let s = center_shift(o, c, phi0)?;
        errors.push((q.gamma_ratio - g).abs() / g.abs());
        errors.push((q.shift_ratio - s).abs() / g.abs());
    }
    let (e, i) = worst(errors);
    Ok(CheckResult::new(
        "closed_form_vs_quadrature",
        e,
        1e-6,
        format!("relative to the damping; worst: {} {}", SYMMETRIC[i / 2].label(), ["gamma", "shift"][i % 2]),
    ))
}

fn orientation_decomposition(c: &CavityConfig, phi0: f64) -> Result<CheckResult, CliError> {
    let [par, perp, iso] = SYMMETRIC;
    let g = |o| center_gamma(&o, c, phi0);
    let s = |o| center_shift(&o, c, phi0);
    let eg = ((g(par)? + 2.0 * g(perp)?) / 3.0 - g(iso)?).abs();
    let es = ((s(par)? + 2.0 * s(perp)?) / 3.0 - s(iso)?).abs();
    Ok(CheckResult::new("orientation_decomposition", eg.max(es), 1e-12, "(parallel + 2 perpendicular)/3 - isotropic".into()))
}

fn monte_carlo(cfg: &RunConfig, tol: f64, seed: u64) -> Result<CheckResult, CliError> {
    let mut sigmas = Vec::new();
    for (i, p) in probes().iter().enumerate() {
        let q = response_at(p, &cfg.orientation, &cfg.cavity, &cfg.detuning, tol, false)?;
        let mc =
            monte_carlo_reference(p, &cfg.orientation, &cfg.cavity, cfg.detuning.phi0(), MC_SAMPLES, seed + i as u64)?;
        let (zg, zs) = mc.sigmas(&q);
        sigmas.extend([zg, zs]);
    }
    let (e, i) = worst(sigmas);
    Ok(CheckResult::new(
        "monte_carlo",
        e,
        MC_SIGMAS,
        format!("standard errors, {MC_SAMPLES} samples, seed {seed}; worst at probe {}", i / 2),
    ))
}

/// Fixed grid fine enough for every point within `FD_STEP` of `p`.
fn fd_grid(p: &Position, c: &CavityConfig) -> Result<AngularGrid, CliError> {
    let bound = p.kr().abs().add_scalar(2.0 * FD_STEP);
    let (np, na) = AngularGrid::minimum_counts(&Position::new(bound)?);
    Ok(AngularGrid::with_counts(c, 2 * np, 2 * na)?)
}

/// Richardson-extrapolated central differences of the shift on a fixed grid.
pub fn richardson_shift_gradient(
    p: &Position,
    orientation: &DipoleOrientation,
    c: &CavityConfig,
    phi0: f64,
    grid: &AngularGrid,
    h: f64,
) -> Result<Vector3<f64>, CliError> {
    let shift = |v: Vector3<f64>| -> Result<f64, CliError> {
        Ok(integrate_sphere(&Position::new(v)?, orientation, c, phi0, grid, false)?.shift_ratio)
    };
    let mut g = Vector3::zeros();
    for k in 0..3 {
        let e = Vector3::ith(k, 1.0);
        let central = |step: f64| -> Result<f64, CliError> {
            Ok((shift(p.kr() + e * step)? - shift(p.kr() - e * step)?) / (2.0 * step))
        };
        g[k] = (4.0 * central(h / 2.0)? - central(h)?) / 3.0;
    }
    Ok(g)
}

fn gradient(cfg: &RunConfig) -> Result<CheckResult, CliError> {
    let phi0 = cfg.detuning.phi0();
    let mut errors = Vec::new();
    for p in probes() {
        let grid = fd_grid(&p, &cfg.cavity)?;
        let analytic = integrate_sphere(&p, &cfg.orientation, &cfg.cavity, phi0, &grid, true)?
            .shift_gradient
            .expect("gradient was requested");
        let fd = richardson_shift_gradient(&p, &cfg.orientation, &cfg.cavity, phi0, &grid, FD_STEP)?;
        let scale = analytic.norm().max(1e-12);
        errors.push((analytic - fd).norm() / scale);
    }
    let (e, i) = worst(errors);
    Ok(CheckResult::new("gradient_finite_difference", e, 1e-4, format!("step {FD_STEP}; worst at probe {i}")))
}

fn fsr_sum_rules(c: &CavityConfig) -> Result<CheckResult, CliError> {
    use std::f64::consts::PI;
    let mut errors = Vec::new();
    for o in &SYMMETRIC {
        let (mut g, mut s) = (0.0, 0.0);
        for j in 0..FSR_POINTS {
            let phi = -PI / 2.0 + PI * j as f64 / FSR_POINTS as f64;
            g += center_gamma(o, c, phi)?;
            s += center_shift(o, c, phi)?;
        }
        errors.push((g / FSR_POINTS as f64 - 1.0).abs());
        errors.push((s / FSR_POINTS as f64).abs());
    }
    let (e, i) = worst(errors);
    Ok(CheckResult::new(
        "fsr_sum_rules",
        e,
        1e-6,
        format!("period means of damping - 1 and shift; worst: {} {}", SYMMETRIC[i / 2].label(), ["gamma", "shift"][i % 2]),
    ))
}

fn gap(a: &Response, b: &Response) -> f64 {
    let scale = a.gamma_ratio.abs().max(1.0);
    (a.gamma_ratio - b.gamma_ratio).abs().max((a.shift_ratio - b.shift_ratio).abs()) / scale
}

fn parity(cfg: &RunConfig, tol: f64) -> Result<CheckResult, CliError> {
    let mut errors = Vec::new();
    for p in probes() {
        let a = response_at(&p, &cfg.orientation, &cfg.cavity, &cfg.detuning, tol, false)?;
        let b = response_at(&Position::new(-p.kr())?, &cfg.orientation, &cfg.cavity, &cfg.detuning, tol, false)?;
        errors.push(gap(&a, &b));
    }
    let (e, i) = worst(errors);
    Ok(CheckResult::new("parity", e, 1e-8, format!("r against -r; worst at probe {i}")))
}

fn rotated(o: &DipoleOrientation, r: &Rotation3<f64>) -> Result<DipoleOrientation, CliError> {
    Ok(match o {
        DipoleOrientation::Parallel | DipoleOrientation::Isotropic => *o,
        other => DipoleOrientation::fixed(r * other.direction().expect("directional dipole"))?,
    })
}

fn rotation(cfg: &RunConfig, tol: f64) -> Result<CheckResult, CliError> {
    let r = Rotation3::from_axis_angle(&Vector3::z_axis(), 0.7);
    let turned = rotated(&cfg.orientation, &r)?;
    let mut errors = Vec::new();
    for p in probes() {
        let a = response_at(&p, &cfg.orientation, &cfg.cavity, &cfg.detuning, tol, false)?;
        let b = response_at(&Position::new(r * p.kr())?, &turned, &cfg.cavity, &cfg.detuning, tol, false)?;
        errors.push(gap(&a, &b));
    }
    let (e, i) = worst(errors);
    Ok(CheckResult::new("axial_rotation", e, 1e-8, format!("dipole and position turned 0.7 rad about z; worst at probe {i}")))
}

fn free_space(c: &CavityConfig, phi0: f64, tol: f64) -> Result<CheckResult, CliError> {
    let open = c.with_rho(0.0)?;
    let detuning = crate::cavity::Detuning::from_phase(phi0, 0.0)?;
    let mut errors = Vec::new();
    for o in &SYMMETRIC {
        for p in probes().iter().chain([&Position::center()]) {
            let q = response_at(p, o, &open, &detuning, tol, false)?;
            errors.push((q.gamma_ratio - 1.0).abs().max(q.shift_ratio.abs()));
        }
    }
    let (e, _) = worst(errors);
    Ok(CheckResult::new("free_space", e, 1e-10, "rho = 0: damping 1, shift 0".into()))
}
