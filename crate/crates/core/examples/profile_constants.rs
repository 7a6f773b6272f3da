//! Shoots the radial ground state and prints the critical constants for a
//! few trap exponents.
//!
//! `cargo run --release --example profile_constants`

use gpcollapse::profile::{compute_constants, solve_profile, DEFAULT_R_MAX, DEFAULT_TOL};

fn main() -> gpcollapse::Result<()> {
    let q = solve_profile(DEFAULT_R_MAX, DEFAULT_TOL)?;
    println!("Q(0)      = {:.12}", q.q0());
    println!("a*        = {:.12}", q.mass());
    let p = q.pohozaev();
    println!("Pohozaev  : max relative error {:.2e}", p.max_relative_error());
    println!("ODE check : max residual {:.2e}", q.residual_max());
    for s in [1.0, 2.0, 4.0] {
        let c = compute_constants(&q, s, 1.0)?;
        println!(
            "s = {s}: λ̃ = {:.8}, E ≈ {:.8}·(a* − a)^{:.4}",
            c.lambda_tilde,
            c.energy_constant(),
            c.energy_exponent()
        );
    }
    Ok(())
}
