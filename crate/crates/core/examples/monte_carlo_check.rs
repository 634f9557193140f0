//! Compares the sphere quadrature with a plain Monte-Carlo average at a few
//! off-center points.

use vacuum_trap::fieldmap::{response_at, DEFAULT_TOLERANCE};
use vacuum_trap::quadrature::monte_carlo_reference;
use vacuum_trap::{CavityConfig, Detuning, DipoleOrientation, Position};

fn main() -> vacuum_trap::Result<()> {
    let cavity = CavityConfig::from_degrees(0.95, 8e4, 40.0, false)?;
    let detuning = Detuning::from_linewidths(0.3, cavity.rho())?;
    let points = [(0.0, 0.0, 4.0), (2.5, -1.0, 6.0), (10.0, 3.0, -8.0)];
    let orientations = [DipoleOrientation::Parallel, DipoleOrientation::Perpendicular];

    for (i, &(x, y, z)) in points.iter().enumerate() {
        let p = Position::from_components(x, y, z)?;
        for o in &orientations {
            let q = response_at(&p, o, &cavity, &detuning, DEFAULT_TOLERANCE, false)?;
            let mc = monte_carlo_reference(&p, o, &cavity, detuning.phi0(), 400_000, 100 + i as u64)?;
            let (zg, zs) = mc.sigmas(&q);
            println!(
                "({x:5.1},{y:5.1},{z:5.1}) {:<13} gamma {:.6} vs {:.6} ({zg:.2} se)  shift {:+.6} vs {:+.6} ({zs:.2} se)",
                o.label(),
                q.gamma_ratio,
                mc.response.gamma_ratio,
                q.shift_ratio,
                mc.response.shift_ratio,
            );
        }
    }
    Ok(())
}
