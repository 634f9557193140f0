//! Table builders behind the scan subcommands.

use super::config::{RunConfig, ScanKind, ScanSettings};
use super::output::Table;
use super::CliError;
use crate::cavity::DipoleOrientation;
use crate::fieldmap::{run_scan, trap_summary, Method, RowStatus, ScanAxis, ScanOutputs, ScanRow, ScanSpec, TrapSummary};

/// Default ranges when the config gives none.
pub const CENTER_RANGE: (f64, f64, usize) = (-3.0, 3.0, 121);
pub const AXIAL_RANGE: (f64, f64, usize) = (-100.0, 100.0, 401);
pub const PLANE_RANGE: (f64, f64, usize) = (-20.0, 20.0, 41);
pub const FORCE_RANGE: (f64, f64, usize) = (-60.0, 60.0, 241);

#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub table: Table,
    /// Deepest potential, for force and potential scans.
    pub trap: Option<TrapSummary>,
}

fn range(s: &ScanSettings, default: (f64, f64, usize)) -> (f64, f64, usize) {
    (s.start.unwrap_or(default.0), s.stop.unwrap_or(default.1), s.n_points.unwrap_or(default.2))
}

fn spec(cfg: &RunConfig, axis: ScanAxis, r: (f64, f64, usize), orientation: DipoleOrientation, method: Method) -> ScanSpec {
    ScanSpec {
        axis,
        start: r.0,
        stop: r.1,
        n_points: r.2,
        config: cfg.cavity,
        orientation,
        detuning: cfg.detuning,
        position: cfg.scan.offset,
        method,
    }
}

fn plane_axis(s: &ScanSettings) -> ScanAxis {
    ScanAxis::Plane {
        x_start: s.x_start.unwrap_or(PLANE_RANGE.0),
        x_stop: s.x_stop.unwrap_or(PLANE_RANGE.1),
        x_points: s.x_points.unwrap_or(PLANE_RANGE.2),
    }
}

fn coordinate_columns(axis: &ScanAxis) -> Vec<&'static str> {
    match axis {
        ScanAxis::Detuning => vec!["detuning_linewidths"],
        ScanAxis::Axial => vec!["kz"],
        ScanAxis::Transverse => vec!["kx"],
        ScanAxis::Plane { .. } => vec!["kz", "kx"],
    }
}

fn worse(a: RowStatus, b: RowStatus) -> RowStatus {
    let rank = |s: RowStatus| match s {
        RowStatus::Ok => 0,
        RowStatus::WeakExcitationViolated => 1,
        RowStatus::NonConverged => 2,
    };
    if rank(b) > rank(a) {
        b
    } else {
        a
    }
}

/// Damping and shift at the center against detuning, for the parallel and
/// perpendicular dipoles.
pub fn center_table(cfg: &RunConfig, method: Method, tolerance: f64) -> Result<CommandOutput, CliError> {
    cfg.scan.require_kind(&[ScanKind::Detuning], "center")?;
    let r = range(&cfg.scan, CENTER_RANGE);
    let par = run_scan(&spec(cfg, ScanAxis::Detuning, r, DipoleOrientation::Parallel, method), tolerance, ScanOutputs::default())?;
    let perp =
        run_scan(&spec(cfg, ScanAxis::Detuning, r, DipoleOrientation::Perpendicular, method), tolerance, ScanOutputs::default())?;
    let mut table = Table::new(vec![
        "detuning_linewidths",
        "gamma_parallel",
        "gamma_perpendicular",
        "shift_parallel",
        "shift_perpendicular",
    ]);
    for (a, b) in par.iter().zip(&perp) {
        table.push(
            vec![
                a.coords[0],
                a.response.gamma_ratio,
                b.response.gamma_ratio,
                a.response.shift_ratio,
                b.response.shift_ratio,
            ],
            worse(a.status, b.status),
        );
    }
    Ok(CommandOutput { table, trap: None })
}

fn response_table(axis: ScanAxis, rows: &[ScanRow]) -> Table {
    let mut columns = coordinate_columns(&axis);
    columns.extend(["gamma", "shift"]);
    let mut table = Table::new(columns);
    for row in rows {
        let mut values = row.coords.clone();
        values.extend([row.response.gamma_ratio, row.response.shift_ratio]);
        table.push(values, row.status);
    }
    table
}

/// Damping and shift along the cavity axis.
pub fn axial_table(cfg: &RunConfig, method: Method, tolerance: f64) -> Result<CommandOutput, CliError> {
    cfg.scan.require_kind(&[ScanKind::Axial], "axial")?;
    let s = spec(cfg, ScanAxis::Axial, range(&cfg.scan, AXIAL_RANGE), cfg.orientation, method);
    let rows = run_scan(&s, tolerance, ScanOutputs::default())?;
    Ok(CommandOutput { table: response_table(s.axis, &rows), trap: None })
}

/// Damping and shift over the `(kz, kx)` plane.
pub fn plane_table(cfg: &RunConfig, method: Method, tolerance: f64) -> Result<CommandOutput, CliError> {
    cfg.scan.require_kind(&[ScanKind::Plane], "plane")?;
    let s = spec(cfg, plane_axis(&cfg.scan), range(&cfg.scan, PLANE_RANGE), cfg.orientation, method);
    let rows = run_scan(&s, tolerance, ScanOutputs::default())?;
    Ok(CommandOutput { table: response_table(s.axis, &rows), trap: None })
}

fn driven_scan(cfg: &RunConfig, method: Method, tolerance: f64, command: &str) -> Result<(ScanAxis, Vec<ScanRow>), CliError> {
    let kind = cfg.scan.require_kind(&[ScanKind::Axial, ScanKind::Transverse, ScanKind::Plane], command)?;
    let drive = cfg
        .drive
        .ok_or_else(|| CliError::Config(format!("`{command}` needs a [drive] section with pi_e or rabi")))?;
    let (axis, default) = match kind.unwrap_or(ScanKind::Axial) {
        ScanKind::Transverse => (ScanAxis::Transverse, FORCE_RANGE),
        ScanKind::Plane => (plane_axis(&cfg.scan), PLANE_RANGE),
        _ => (ScanAxis::Axial, FORCE_RANGE),
    };
    let s = spec(cfg, axis, range(&cfg.scan, default), cfg.orientation, method);
    let rows = run_scan(&s, tolerance, ScanOutputs { gradient: true, drive: Some(drive) })?;
    Ok((axis, rows))
}

/// Force and potential along a scan; needs a drive.
pub fn force_table(cfg: &RunConfig, method: Method, tolerance: f64) -> Result<CommandOutput, CliError> {
    let (axis, rows) = driven_scan(cfg, method, tolerance, "force")?;
    let mut columns = coordinate_columns(&axis);
    columns.extend(["gamma", "shift", "force_x", "force_y", "force_z", "potential"]);
    let mut table = Table::new(columns);
    for row in &rows {
        let f = row.force.expect("driven scans carry forces");
        let mut values = row.coords.clone();
        values.extend([
            row.response.gamma_ratio,
            row.response.shift_ratio,
            f.force.x,
            f.force.y,
            f.force.z,
            f.potential,
        ]);
        table.push(values, row.status);
    }
    Ok(CommandOutput { table, trap: trap_summary(&rows) })
}

/// Excited population and potential along a scan; needs a drive.
pub fn potential_table(cfg: &RunConfig, method: Method, tolerance: f64) -> Result<CommandOutput, CliError> {
    let (axis, rows) = driven_scan(cfg, method, tolerance, "potential")?;
    let mut columns = coordinate_columns(&axis);
    columns.extend(["gamma", "shift", "excited_population", "potential"]);
    let mut table = Table::new(columns);
    for row in &rows {
        let f = row.force.expect("driven scans carry forces");
        let mut values = row.coords.clone();
        values.extend([row.response.gamma_ratio, row.response.shift_ratio, f.excited_population, f.potential]);
        table.push(values, row.status);
    }
    Ok(CommandOutput { table, trap: trap_summary(&rows) })
}
