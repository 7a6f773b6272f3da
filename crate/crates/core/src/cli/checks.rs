//! Seeded invariant suites behind `gpcollapse check`.

use std::io::Write;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::functional::{
    diamagnetic_sides, evaluate, gp_energy, gradient, hartree_energy, GpParams, InteractionSpec, KernelShape, Scale,
};
use crate::grid::random::{random_band_limited_field, random_smooth_field, RandomFieldSpec};
use crate::grid::SpectralGrid;
use crate::profile::gn::gn_margin;
use crate::profile::{materialize_q, RadialProfile};

pub const GN_INEQUALITY_TOL: f64 = 1e-6;
pub const GN_EQUALITY_TOL: f64 = 1e-5;
pub const DIAMAGNETIC_TOL: f64 = 1e-10;
pub const FD_TOL: f64 = 1e-4;
pub const POHOZAEV_TOL: f64 = 1e-6;
pub const PARSEVAL_TOL: f64 = 1e-12;
pub const PHASE_TOL: f64 = 1e-12;
pub const HARTREE_TOL: f64 = 1e-10;

/// `(λ, X)` pairs on which `J(Q_{λ,X}) = a*` is tested.
pub const GN_EQUALITY_PAIRS: [(f64, [f64; 2]); 6] = [
    (0.5, [0.0, 0.0]),
    (1.0, [0.0, 0.0]),
    (2.0, [0.0, 0.0]),
    (0.5, [1.5, -2.0]),
    (1.0, [-3.0, 0.7]),
    (2.0, [2.2, 4.1]),
];

#[derive(Clone, Debug)]
pub struct CheckConfig {
    pub seed: u64,
    pub trials: usize,
    /// Replaces the computed `a*` in every suite that uses it.
    pub a_star_override: Option<f64>,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            seed: 20_240_917,
            trials: 200,
            a_star_override: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub trials: usize,
    pub failures: usize,
    /// Worst value of the suite's error measure.
    pub worst: f64,
    pub tolerance: f64,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckTable {
    pub seed: u64,
    pub trials: usize,
    pub a_star: f64,
    pub suites: Vec<SuiteOutcome>,
}

impl CheckTable {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed())
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# gpcollapse check-csv v1 seed={} trials={}", self.seed, self.trials)?;
        writeln!(out, "suite,trials,failures,worst,tolerance,status")?;
        for s in &self.suites {
            writeln!(
                out,
                "{},{},{},{:.16e},{:.16e},{}",
                s.name,
                s.trials,
                s.failures,
                s.worst,
                s.tolerance,
                if s.passed() { "pass" } else { "fail" }
            )?;
        }
        Ok(())
    }
}

/// Runs every suite in a fixed order.
pub fn run_checks(profile: &RadialProfile, cfg: &CheckConfig) -> Result<CheckTable> {
    let a_star = cfg.a_star_override.unwrap_or_else(|| profile.mass());
    let rng = |k: u64| ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(k));
    let suites = vec![
        gn_inequality(a_star, cfg.trials, &mut rng(1))?,
        gn_equality(profile, a_star)?,
        diamagnetic(cfg.trials, &mut rng(2))?,
        gradient_consistency(a_star, cfg.trials, &mut rng(3))?,
        pohozaev(profile, a_star),
        parseval(cfg.trials, &mut rng(4))?,
        phase_invariance(a_star, cfg.trials, &mut rng(5))?,
        hartree_dominates(a_star, cfg.trials, &mut rng(6))?,
    ];
    Ok(CheckTable {
        seed: cfg.seed,
        trials: cfg.trials,
        a_star,
        suites,
    })
}

struct Tally {
    name: &'static str,
    tolerance: f64,
    trials: usize,
    failures: usize,
    worst: f64,
}

impl Tally {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self {
            name,
            tolerance,
            trials: 0,
            failures: 0,
            worst: 0.0,
        }
    }

    /// Records an error measure that must not exceed the tolerance.
    fn record(&mut self, error: f64) {
        self.trials += 1;
        if !(error <= self.tolerance) {
            self.failures += 1;
        }
        if error > self.worst || error.is_nan() {
            self.worst = error;
        }
    }

    fn finish(self) -> SuiteOutcome {
        SuiteOutcome {
            name: self.name,
            trials: self.trials,
            failures: self.failures,
            worst: self.worst,
            tolerance: self.tolerance,
        }
    }
}

fn random_params<R: Rng>(rng: &mut R, a_star: f64) -> Result<GpParams> {
    let omega = rng.random_range(0.0..0.99);
    let gap = a_star * rng.random_range(0.01..0.9);
    GpParams::new(omega, a_star - gap, a_star)
}

/// `J(u)/a* − 1 ≥ −tol` on windowed band-limited fields.
pub fn gn_inequality<R: Rng>(a_star: f64, trials: usize, rng: &mut R) -> Result<SuiteOutcome> {
    let grid = SpectralGrid::shared(128, 8.0)?;
    let mut t = Tally::new("gn-inequality", GN_INEQUALITY_TOL);
    for _ in 0..trials {
        let k_max = rng.random_range(1.0..4.0);
        let u = random_band_limited_field(&grid, rng, k_max);
        t.record(-gn_margin(&u, a_star));
    }
    Ok(t.finish())
}

/// `|J(Q_{λ,X})/a* − 1| ≤ tol` for [`GN_EQUALITY_PAIRS`].
pub fn gn_equality(profile: &RadialProfile, a_star: f64) -> Result<SuiteOutcome> {
    let grid = SpectralGrid::shared(512, 24.0)?;
    let mut t = Tally::new("gn-equality", GN_EQUALITY_TOL);
    for (lambda, center) in GN_EQUALITY_PAIRS {
        let q = materialize_q(&grid, profile, lambda, center)?;
        t.record(gn_margin(&q, a_star).abs());
    }
    Ok(t.finish())
}

/// `∫|∇v − iσx^⊥v|² ≥ ∫|∇|v||² − tol`.
pub fn diamagnetic<R: Rng>(trials: usize, rng: &mut R) -> Result<SuiteOutcome> {
    let grid = SpectralGrid::shared(64, 8.0)?;
    let mut t = Tally::new("diamagnetic", DIAMAGNETIC_TOL);
    for _ in 0..trials {
        let v = random_smooth_field(&grid, rng, &RandomFieldSpec::default());
        let sigma = rng.random_range(0.0..1.0);
        let (lhs, rhs) = diamagnetic_sides(&v, sigma);
        t.record((rhs - lhs).max(0.0));
    }
    Ok(t.finish())
}

/// Central difference of the energy against `2·Re⟨Hu, δ⟩`, relative to
/// `1 + |2·Re⟨Hu, δ⟩|`.
pub fn gradient_consistency<R: Rng>(a_star: f64, trials: usize, rng: &mut R) -> Result<SuiteOutcome> {
    let grid = SpectralGrid::shared(64, 8.0)?;
    let mut t = Tally::new("gradient-fd", FD_TOL);
    let h = 1e-5;
    for _ in 0..trials {
        let c = random_params(rng, a_star)?.coefficients();
        let u = random_smooth_field(&grid, rng, &RandomFieldSpec::default());
        let d = random_smooth_field(&grid, rng, &RandomFieldSpec::default());
        let analytic = 2.0 * gradient(&u, &c)?.inner(&d)?.re;
        let plus = evaluate(&u.offset(&d, h)?, &c, &InteractionSpec::Delta).total;
        let minus = evaluate(&u.offset(&d, -h)?, &c, &InteractionSpec::Delta).total;
        let fd = (plus - minus) / (2.0 * h);
        t.record((fd - analytic).abs() / (1.0 + analytic.abs()));
    }
    Ok(t.finish())
}

/// `∫|∇Q|² = ∫Q² = a*`, `∫Q⁴ = 2a*`, relative errors.
pub fn pohozaev(profile: &RadialProfile, a_star: f64) -> SuiteOutcome {
    let p = profile.pohozaev();
    let mut t = Tally::new("pohozaev", POHOZAEV_TOL);
    t.record((p.kinetic / a_star - 1.0).abs());
    t.record((p.mass / a_star - 1.0).abs());
    t.record((p.quartic / (2.0 * a_star) - 1.0).abs());
    t.finish()
}

/// `‖u‖²` on the grid against its Fourier-side value.
pub fn parseval<R: Rng>(trials: usize, rng: &mut R) -> Result<SuiteOutcome> {
    let grid = SpectralGrid::shared(64, 8.0)?;
    let mut t = Tally::new("parseval", PARSEVAL_TOL);
    for _ in 0..trials {
        let u = random_smooth_field(&grid, rng, &RandomFieldSpec::default());
        t.record((grid.fourier_norm_sq(u.values()) - u.norm_sq()).abs());
    }
    Ok(t.finish())
}

/// `𝓔(e^{iθ}u) = 𝓔(u)`, relative.
pub fn phase_invariance<R: Rng>(a_star: f64, trials: usize, rng: &mut R) -> Result<SuiteOutcome> {
    let grid = SpectralGrid::shared(64, 8.0)?;
    let mut t = Tally::new("phase-invariance", PHASE_TOL);
    for _ in 0..trials {
        let p = random_params(rng, a_star)?;
        let u = random_smooth_field(&grid, rng, &RandomFieldSpec::default());
        let theta = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
        let base = gp_energy(&u, &p)?.total;
        let turned = gp_energy(&u.scaled(Complex64::from_polar(1.0, theta)), &p)?.total;
        t.record((turned - base).abs() / (1.0 + base.abs()));
    }
    Ok(t.finish())
}

/// `𝓔^H(u) ≥ 𝓔^{GP}(u) − tol` for smeared kernels of random width.
pub fn hartree_dominates<R: Rng>(a_star: f64, trials: usize, rng: &mut R) -> Result<SuiteOutcome> {
    let grid = SpectralGrid::shared(64, 8.0)?;
    let mut t = Tally::new("hartree-dominates", HARTREE_TOL);
    for k in 0..trials {
        let p = random_params(rng, a_star)?.with_scale(Scale::Physical);
        let shape = if k % 2 == 0 {
            KernelShape::Gaussian
        } else {
            KernelShape::Exponential
        };
        let beta = rng.random_range(0.05..0.49);
        let big_n = 10f64.powf(rng.random_range(0.0..8.0));
        let w = InteractionSpec::smeared(shape, beta, big_n)?;
        let u = random_smooth_field(&grid, rng, &RandomFieldSpec::default());
        let gp = gp_energy(&u, &p)?.total;
        let hartree = hartree_energy(&u, &p, &w)?.total;
        t.record((gp - hartree).max(0.0));
    }
    Ok(t.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::profile;

    #[test]
    fn default_suite_passes_and_is_reproducible() {
        let cfg = CheckConfig {
            trials: 20,
            ..CheckConfig::default()
        };
        let a = run_checks(profile(), &cfg).unwrap();
        assert!(a.all_passed(), "{a:?}");
        assert_eq!(a, run_checks(profile(), &cfg).unwrap());
    }

    #[test]
    fn understated_critical_constant_fails_gn() {
        let cfg = CheckConfig {
            trials: 5,
            a_star_override: Some(10.0),
            ..CheckConfig::default()
        };
        let table = run_checks(profile(), &cfg).unwrap();
        assert!(!table.all_passed());
        let eq = table.suites.iter().find(|s| s.name == "gn-equality").unwrap();
        assert_eq!(eq.failures, GN_EQUALITY_PAIRS.len());
    }
}
