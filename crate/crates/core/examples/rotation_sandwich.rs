//! The rotating energy lies between `√(1 − Ω²)·F₀` and `F₀`.
//!
//! `cargo run --release --example rotation_sandwich`

use gpcollapse::functional::GpParams;
use gpcollapse::minimizer::{Minimizer, SolveConfig};
use gpcollapse::profile::{solve_profile, DEFAULT_R_MAX, DEFAULT_TOL};

fn main() -> gpcollapse::Result<()> {
    let profile = solve_profile(DEFAULT_R_MAX, DEFAULT_TOL)?;
    let a_star = profile.mass();
    let m = Minimizer::new(&profile, SolveConfig { n: 128, extent: 10.0, ..SolveConfig::default() })?;
    let still = m.solve(&GpParams::new(0.0, a_star - 0.1, a_star)?)?;
    println!("F₀ = {:.10}", still.breakdown.total);
    for omega in [0.3, 0.6, 0.9, 0.99] {
        let p = GpParams::new(omega, a_star - 0.1, a_star)?;
        let r = m.solve(&p)?;
        let s = m.sandwich_check(&p, &r)?;
        println!(
            "Ω = {omega:<4}: {:.10} ≤ {:.10} ≤ {:.10}  {}",
            s.lower,
            r.breakdown.total,
            s.upper,
            if s.holds { "holds" } else { "VIOLATED" }
        );
    }
    Ok(())
}
