//! One rotating ground state near the critical coupling, with its energy
//! breakdown and distance to the blow-up profile.
//!
//! `cargo run --release --example minimize_ground_state -- [omega] [gap]`

use gpcollapse::functional::GpParams;
use gpcollapse::minimizer::{phase_align, Init, Minimizer, SolveConfig};
use gpcollapse::profile::{solve_profile, DEFAULT_R_MAX, DEFAULT_TOL};

fn main() -> gpcollapse::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<f64>().expect("numeric argument"));
    let omega = args.next().unwrap_or(0.5);
    let gap = args.next().unwrap_or(0.05);

    let profile = solve_profile(DEFAULT_R_MAX, DEFAULT_TOL)?;
    let a_star = profile.mass();
    let p = GpParams::new(omega, a_star - gap, a_star)?;
    let m = Minimizer::new(
        &profile,
        SolveConfig {
            init: Init::Profile,
            ..SolveConfig::default()
        },
    )?;
    let r = m.solve(&p)?;
    let b = &r.breakdown;
    println!("Ω = {omega}, a* − a = {gap}");
    println!("  converged {} after {} iterations, residual {:.2e}", r.converged, r.iters, r.residual);
    println!("  kinetic {:.8}  trap {:.8}  rotation {:.8}  interaction {:.8}", b.kinetic, b.trap, b.rotation, b.interaction);
    println!("  blow-up energy {:.10}, μ = {:.8}", b.total, b.mu);
    println!("  physical energy {:.10}, F/(a* − a) = {:.8}", r.physical_energy, r.energy_over_gap());

    let q = m.reference(r.field.grid(), &p)?;
    let aligned = phase_align(&r.field, &q)?;
    println!("  distance to Q_N {:.3e} at phase {:.4}", aligned.distance, aligned.theta);
    Ok(())
}
