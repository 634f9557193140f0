//! Damping and level shift at the center against atom-cavity detuning,
//! for a dipole along and across the cavity axis.

use vacuum_trap::cli::{center_table, RunConfig};
use vacuum_trap::fieldmap::{Method, DEFAULT_TOLERANCE};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = RunConfig::from_toml_str("[scan]\nstart = -2.0\nstop = 2.0\nn_points = 17\n")?;
    let out = center_table(&cfg, Method::Auto, DEFAULT_TOLERANCE)?;

    println!("{:>8} {:>10} {:>10} {:>10} {:>10}", "detune", "G_par", "G_perp", "D_par", "D_perp");
    for row in &out.table.rows {
        let v = &row.values;
        println!("{:>8.3} {:>10.4} {:>10.4} {:>10.4} {:>10.4}", v[0], v[1], v[2], v[3], v[4]);
    }
    Ok(())
}
