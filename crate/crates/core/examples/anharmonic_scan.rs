//! Collapse in the quartic trap `|x|⁴`, where the energy law has exponent
//! `2/3`. Writes the scan tables to a temporary directory.
//!
//! `cargo run --release --example anharmonic_scan`

use std::fs::File;

use gpcollapse::asymptotics::{collapse_scan, default_gaps, ladder_from_gaps};
use gpcollapse::functional::{GpParams, Scale};
use gpcollapse::minimizer::{Minimizer, SolveConfig};
use gpcollapse::profile::{solve_profile, DEFAULT_R_MAX, DEFAULT_TOL};

fn main() -> gpcollapse::Result<()> {
    let profile = solve_profile(DEFAULT_R_MAX, DEFAULT_TOL)?;
    let a_star = profile.mass();
    let ladder = ladder_from_gaps(a_star, &default_gaps());
    let m = Minimizer::new(&profile, SolveConfig { n: 128, extent: 10.0, ..SolveConfig::default() })?;
    let base = GpParams::with_potential(0.0, ladder[0], a_star, 4.0, 1.0, Scale::Blowup)?;
    let scan = collapse_scan(&m, &base, &ladder)?;
    if let Some(fit) = scan.fit {
        println!(
            "exponent {:.5} (expected {:.5}), constant {:.6} (expected {:.6})",
            fit.exponent, scan.target_exponent, fit.constant, scan.target_constant
        );
    }
    let dir = std::env::temp_dir().join("gpcollapse-anharmonic");
    std::fs::create_dir_all(&dir)?;
    scan.write_csv(File::create(dir.join("scan.csv"))?)?;
    scan.write_plot_data(File::create(dir.join("plot.csv"))?)?;
    println!("tables in {}", dir.display());
    Ok(())
}
