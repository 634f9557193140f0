//! A dipole tilted away from the axis has no closed form at the center, so
//! everything goes through the sphere quadrature. Tilting moves it between
//! the parallel and perpendicular values.

use nalgebra::Vector3;
use vacuum_trap::cavity::center_gamma;
use vacuum_trap::fieldmap::{response_at, DEFAULT_TOLERANCE};
use vacuum_trap::{CavityConfig, Detuning, DipoleOrientation, Position};

fn main() -> vacuum_trap::Result<()> {
    let cavity = CavityConfig::from_degrees(0.98, 8e4, 45.0, false)?;
    let res = Detuning::resonant();
    let par = center_gamma(&DipoleOrientation::Parallel, &cavity, 0.0)?;
    let perp = center_gamma(&DipoleOrientation::Perpendicular, &cavity, 0.0)?;
    println!("parallel {par:.6}  perpendicular {perp:.6}");

    for deg in [0.0, 15.0, 30.0, 45.0, 60.0, 75.0, 90.0] {
        let t = f64::to_radians(deg);
        let d = DipoleOrientation::fixed(Vector3::new(t.sin(), 0.0, t.cos()))?;
        let g = response_at(&Position::center(), &d, &cavity, &res, DEFAULT_TOLERANCE, false)?.gamma_ratio;
        // the pattern is quadratic in d, so only cos^2 of the tilt matters
        let mix = par * t.cos().powi(2) + perp * t.sin().powi(2);
        println!("tilt {deg:>4}  gamma {g:.6}  mixture {mix:.6}");
    }
    Ok(())
}
