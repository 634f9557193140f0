//! Potential on the axis for a cavity tuned half a linewidth to the blue of
//! the atom, at fixed excited population 0.05, and the same with the
//! detuning reversed.

use vacuum_trap::cli::{potential_table, RunConfig};
use vacuum_trap::fieldmap::{Method, DEFAULT_TOLERANCE};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for linewidths in [-0.5, 0.5] {
        let cfg = RunConfig::from_toml_str(&format!(
            "[detuning]\nlinewidths = {linewidths}\n[drive]\npi_e = 0.05\n[scan]\nstart = -50.0\nstop = 50.0\nn_points = 201\n"
        ))?;
        let out = potential_table(&cfg, Method::Auto, DEFAULT_TOLERANCE)?;
        let u = out.table.column("potential").expect("potential column");
        let trap = out.trap.expect("driven scan");
        println!("detuning {linewidths:+} linewidths");
        println!("  U(0)  = {:+.5} hbar Gamma_vac", u[100]);
        println!("  U(50) = {:+.5}", u[200]);
        println!("  min U = {:+.5} at kz = {}", trap.depth, trap.location[0]);
    }
    Ok(())
}
