//! Saves a ground state, reads it back in both formats, and uses it to warm
//! start a nearby coupling.
//!
//! `cargo run --release --example field_io`

use std::fs::File;
use std::io::{BufReader, BufWriter};

use gpcollapse::functional::GpParams;
use gpcollapse::grid::io::{read_field_binary, read_field_csv, write_field_binary, write_field_csv};
use gpcollapse::minimizer::{Minimizer, SolveConfig};
use gpcollapse::profile::{solve_profile, DEFAULT_R_MAX, DEFAULT_TOL};

fn main() -> gpcollapse::Result<()> {
    let profile = solve_profile(DEFAULT_R_MAX, DEFAULT_TOL)?;
    let a_star = profile.mass();
    let m = Minimizer::new(&profile, SolveConfig { n: 128, extent: 10.0, ..SolveConfig::default() })?;
    let first = m.solve(&GpParams::new(0.5, a_star - 0.05, a_star)?)?;

    let dir = std::env::temp_dir().join("gpcollapse-field-io");
    std::fs::create_dir_all(&dir)?;
    write_field_binary(&first.field, BufWriter::new(File::create(dir.join("field.bin"))?))?;
    write_field_csv(&first.field, BufWriter::new(File::create(dir.join("field.csv"))?))?;
    let from_bin = read_field_binary(BufReader::new(File::open(dir.join("field.bin"))?))?;
    let from_csv = read_field_csv(BufReader::new(File::open(dir.join("field.csv"))?))?;
    println!("binary round trip distance {:.1e}", from_bin.distance(&first.field)?);
    println!("csv round trip distance    {:.1e}", from_csv.distance(&first.field)?);

    let next = GpParams::new(0.5, a_star - 0.03, a_star)?;
    let warm = m.solve_from(&next, from_bin)?;
    let cold = m.solve(&next)?;
    println!("a* − a = 0.03: {} iterations warm, {} cold", warm.iters, cold.iters);
    Ok(())
}
