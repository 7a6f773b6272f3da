//! Collapse scan for the harmonic trap at several rotation speeds, with the
//! fitted energy law and the profile diagnostics.
//!
//! `cargo run --release --example collapse_scan`

use gpcollapse::asymptotics::{
    default_gaps, ladder_from_gaps, mu_limit, omega_sweep, profile_convergence, rotation_independence, width_scaling,
};
use gpcollapse::functional::GpParams;
use gpcollapse::minimizer::{Minimizer, SolveConfig};
use gpcollapse::profile::{solve_profile, DEFAULT_R_MAX, DEFAULT_TOL};

fn main() -> gpcollapse::Result<()> {
    let profile = solve_profile(DEFAULT_R_MAX, DEFAULT_TOL)?;
    let a_star = profile.mass();
    let gaps = default_gaps();
    let ladder = ladder_from_gaps(a_star, &gaps);
    let m = Minimizer::new(&profile, SolveConfig { n: 128, extent: 10.0, ..SolveConfig::default() })?;
    let base = GpParams::new(0.0, ladder[0], a_star)?;
    let scans = omega_sweep(&m, &base, &[0.0, 0.5, 0.9], &ladder)?;

    for scan in &scans {
        println!("Ω = {}", scan.params.omega);
        for row in &scan.rows {
            println!(
                "  a* − a = {:.4}  F/ε² = {:.8}  μ = {:.6}  distance {:.2e}",
                row.gap, row.f_over_eps2, row.mu, row.distance_to_qn
            );
        }
        if let Some(fit) = scan.fit {
            println!(
                "  fit F ≈ {:.6}·(a* − a)^{:.5}  (expected {:.6}, {:.5})",
                fit.constant, fit.exponent, scan.target_constant, scan.target_exponent
            );
        }
        let c = profile_convergence(scan, 0.1, 0.15)?;
        println!("  distance decreasing: {}", c.monotone);
        let w = width_scaling(scan, gaps[0], gaps[gaps.len() - 1])?;
        println!("  width ratio {:.5}, expected {:.5}", w.ratio, w.expected);
    }
    let ri = rotation_independence(&scans, gaps[gaps.len() - 1])?;
    println!("F/ε² spread across Ω at the last rung: {:.2e}", ri.energy_spread);
    let mu = mu_limit(&m, &scans[0])?;
    println!("μ = {:.6} against λ*² = {:.6}", mu.mu, mu.target);
    Ok(())
}
