//! Damping enhancement at the center of a 98 % reflecting, 45 degree cavity.
//!
//! Prints the closed form, the same number with the solid-angle fraction
//! rounded to 0.3, and the full sphere quadrature.

use std::f64::consts::FRAC_PI_4;

use vacuum_trap::cavity::{center_gamma, isotropic_center_gamma, SolidAngle};
use vacuum_trap::fieldmap::{response_at, DEFAULT_TOLERANCE};
use vacuum_trap::{CavityConfig, Detuning, DipoleOrientation, Position};

fn main() -> vacuum_trap::Result<()> {
    let cavity = CavityConfig::new(0.98, 8e4, FRAC_PI_4, false)?;
    let iso = DipoleOrientation::Isotropic;

    let exact = center_gamma(&iso, &cavity, 0.0)?;
    let rounded = isotropic_center_gamma(0.3, cavity.rho(), 0.0);
    let quad = response_at(&Position::center(), &iso, &cavity, &Detuning::resonant(), DEFAULT_TOLERANCE, false)?;

    println!("cavity solid-angle fraction  {:.6}", SolidAngle::of(&cavity)?.cavity_fraction());
    println!("Gamma/Gamma_vac closed form  {exact:.6}");
    println!("  with fraction 0.3          {rounded:.6}");
    println!("  by quadrature              {:.6}", quad.gamma_ratio);
    println!("relative difference          {:.1e}", (quad.gamma_ratio - exact).abs() / exact);
    Ok(())
}
