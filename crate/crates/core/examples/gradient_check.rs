//! Analytic shift gradient against Richardson central differences.

use vacuum_trap::cli::validate::richardson_shift_gradient;
use vacuum_trap::quadrature::{integrate_sphere, AngularGrid};
use vacuum_trap::{CavityConfig, Detuning, DipoleOrientation, Position};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cavity = CavityConfig::from_degrees(0.98, 8e4, 45.0, false)?;
    let o = DipoleOrientation::Perpendicular;
    for linewidths in [-0.5, 0.5] {
        let phi0 = Detuning::from_linewidths(linewidths, cavity.rho())?.phi0();
        for (x, y, z) in [(0.5, 0.0, 1.0), (4.0, -3.0, 7.5)] {
            let p = Position::from_components(x, y, z)?;
            // one grid for every point of the stencil
            let grid = AngularGrid::with_counts(&cavity, 128, 96)?;
            let analytic = integrate_sphere(&p, &o, &cavity, phi0, &grid, true)?.shift_gradient.unwrap();
            let fd = richardson_shift_gradient(&p, &o, &cavity, phi0, &grid, 0.05)?;
            println!(
                "detuning {linewidths:+} at ({x}, {y}, {z}): grad = [{:+.6}, {:+.6}, {:+.6}]  rel. diff {:.1e}",
                analytic.x,
                analytic.y,
                analytic.z,
                (analytic - fd).norm() / analytic.norm()
            );
        }
    }
    Ok(())
}
