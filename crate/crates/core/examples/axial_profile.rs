//! Damping along the cavity axis, resonant cavity, random dipole.
//!
//! Prints a coarse text plot; the value at kz = 0 is the closed form.

use vacuum_trap::fieldmap::{run_scan, Method, ScanAxis, ScanOutputs, ScanSpec, DEFAULT_TOLERANCE};
use vacuum_trap::{CavityConfig, Detuning, DipoleOrientation, Position};

fn main() -> vacuum_trap::Result<()> {
    let spec = ScanSpec {
        axis: ScanAxis::Axial,
        start: -12.0,
        stop: 12.0,
        n_points: 49,
        config: CavityConfig::from_degrees(0.98, 8e4, 45.0, false)?,
        orientation: DipoleOrientation::Isotropic,
        detuning: Detuning::resonant(),
        position: Position::center(),
        method: Method::Auto,
    };
    let rows = run_scan(&spec, DEFAULT_TOLERANCE, ScanOutputs::default())?;
    let peak = rows.iter().map(|r| r.response.gamma_ratio).fold(0.0, f64::max);
    for r in &rows {
        let g = r.response.gamma_ratio;
        let bar = "#".repeat((60.0 * g / peak).round() as usize);
        println!("{:>7.2} {:>9.4} {bar}", r.coords[0], g);
    }
    Ok(())
}
