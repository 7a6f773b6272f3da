//! How much a smeared two-body kernel lowers the interaction energy of the
//! blow-up profile, against the `N^{−β}` bound.
//!
//! `cargo run --release --example hartree_bound`

use gpcollapse::asymptotics::hartree_upper_bound_check;
use gpcollapse::functional::{GpParams, InteractionSpec, KernelShape};
use gpcollapse::minimizer::{Minimizer, SolveConfig};
use gpcollapse::profile::{solve_profile, DEFAULT_R_MAX, DEFAULT_TOL};

fn main() -> gpcollapse::Result<()> {
    let profile = solve_profile(DEFAULT_R_MAX, DEFAULT_TOL)?;
    let a_star = profile.mass();
    let m = Minimizer::new(&profile, SolveConfig::default())?;
    let base = GpParams::new(0.0, a_star - 0.05, a_star)?;
    println!("{:>11} {:>5} {:>6} {:>12} {:>12} {:>12}", "kernel", "N", "β", "gap", "E^H − E^GP", "bound");
    for shape in [KernelShape::Gaussian, KernelShape::Exponential] {
        for big_n in [1e4, 1e6, 1e8] {
            for beta in [0.2, 0.4] {
                let w = InteractionSpec::smeared(shape, beta, big_n)?;
                for gap in [0.05, 0.02] {
                    let b = hartree_upper_bound_check(&m, &base, &w, gap)?;
                    println!(
                        "{:>11} {big_n:>5.0e} {beta:>6} {gap:>12} {:>12.4e} {:>12.4e}",
                        format!("{shape:?}"),
                        b.difference,
                        b.bound
                    );
                }
            }
        }
    }
    Ok(())
}
