//! Estimates `a*` by minimizing the Gagliardo–Nirenberg quotient directly on
//! the grid and compares it with the radial shooting value.
//!
//! `cargo run --release --example gn_inequality`

use gpcollapse::grid::random::random_band_limited_field;
use gpcollapse::profile::gn::{cross_check, gn_quotient, QuotientSearch};
use gpcollapse::profile::{solve_profile, DEFAULT_R_MAX, DEFAULT_TOL};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> gpcollapse::Result<()> {
    let a_star = solve_profile(DEFAULT_R_MAX, DEFAULT_TOL)?.mass();
    let search = QuotientSearch::default();

    let grid = search.grid()?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let lowest = (0..50)
        .map(|_| gn_quotient(&random_band_limited_field(&grid, &mut rng, 2.0)))
        .fold(f64::INFINITY, f64::min);
    println!("lowest quotient of 50 random fields: {lowest:.6} (a* = {a_star:.6})");

    let cc = cross_check(&search, 7, 12)?;
    println!(
        "descent from 12 starts: best {:.8}, relative gap {:.2e}",
        cc.best,
        cc.best / a_star - 1.0
    );
    Ok(())
}
