//! Acceptance suite: one line per criterion, nonzero exit on any failure.
//!
//! Run with `cargo test --release --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use gpcollapse::asymptotics::{
    collapse_scan, hartree_upper_bound_check, ladder_from_gaps, mu_limit, omega_sweep, profile_convergence,
    rotation_independence, sandwich_rows, width_scaling, ScanResult,
};
use gpcollapse::cli::checks::{
    diamagnetic, gn_equality, gn_inequality, gradient_consistency, hartree_dominates, pohozaev, SuiteOutcome,
};
use gpcollapse::functional::{GpParams, InteractionSpec, KernelShape, Scale};
use gpcollapse::minimizer::{Minimizer, SolveConfig};
use gpcollapse::profile::gn::{cross_check, QuotientSearch};
use gpcollapse::profile::{compute_constants, solve_profile, RadialProfile, DEFAULT_R_MAX, DEFAULT_TOL};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_917;

const CROSS_CHECK_STARTS: usize = 50;
const CROSS_CHECK_TOL: f64 = 1e-3;
const CROSS_CHECK_BUDGET: Duration = Duration::from_secs(120);

const GN_TRIALS: usize = 200;

const LADDER: [f64; 6] = [0.2, 0.1, 0.05, 0.04, 0.02, 0.01];
const OMEGAS: [f64; 3] = [0.0, 0.5, 0.9];
const EXPONENT_TOL: f64 = 0.03;
const CONSTANT_TOL: f64 = 0.10;
const SCAN_BUDGET: Duration = Duration::from_secs(600);

const ROTATION_GAP: f64 = 0.01;
const ROTATION_TOL: f64 = 0.05;
const SANDWICH_TOL: f64 = 1e-5;

const DISTANCE_SLACK: f64 = 0.10;
const DISTANCE_THRESHOLD: f64 = 0.15;
const WIDTH_GAPS: (f64, f64) = (0.04, 0.01);
const WIDTH_TOL: f64 = 0.05;

const HARTREE_NS: [f64; 2] = [1e6, 1e8];
const HARTREE_BETAS: [f64; 2] = [0.3, 0.4];
const HARTREE_GAPS: [f64; 2] = [0.05, 0.02];
const HARTREE_TRIALS: usize = 100;

const FIELD_TRIALS: usize = 100;

const OSCILLATOR_A: f64 = 1e-6;
const OSCILLATOR_OMEGAS: [f64; 5] = [0.0, 0.3, 0.5, 0.7, 0.9];
const OSCILLATOR_ENERGY: f64 = 2.0;
const OSCILLATOR_TOL: f64 = 1e-4;

struct Report {
    failed: usize,
}

impl Report {
    fn line(&mut self, id: usize, name: &str, pass: bool, detail: String) {
        if !pass {
            self.failed += 1;
        }
        println!("[{}] {id:>2} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    }

    fn error(&mut self, id: usize, name: &str, e: impl std::fmt::Display) {
        self.line(id, name, false, format!("error: {e}"));
    }
}

fn rng(k: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED.wrapping_mul(0x9e37_79b9).wrapping_add(k))
}

fn suite_detail(s: &SuiteOutcome) -> String {
    format!("{} {}/{} failures, worst {:.3e} (tol {:.0e})", s.name, s.failures, s.trials, s.worst, s.tolerance)
}

fn scan_fit(scan: &ScanResult, report: &mut Report, id: usize, name: &str, elapsed: Option<Duration>) {
    let Some(fit) = scan.fit else {
        report.line(id, name, false, format!("Ω = {}: no fit, unconverged rungs", scan.params.omega));
        return;
    };
    let exp_ok = (fit.exponent - scan.target_exponent).abs() <= EXPONENT_TOL;
    let const_err = (fit.constant - scan.target_constant).abs() / scan.target_constant;
    let time_ok = elapsed.is_none_or(|t| t < SCAN_BUDGET);
    report.line(
        id,
        name,
        exp_ok && const_err <= CONSTANT_TOL && time_ok && scan.all_converged(),
        format!(
            "Ω = {}: exponent {:.5} (target {:.5} ± {EXPONENT_TOL}), constant {:.5} (target {:.5}, err {:.2}% ≤ {}%){}",
            scan.params.omega,
            fit.exponent,
            scan.target_exponent,
            fit.constant,
            scan.target_constant,
            100.0 * const_err,
            100.0 * CONSTANT_TOL,
            elapsed.map(|t| format!(", {:.1} s", t.as_secs_f64())).unwrap_or_default()
        ),
    );
}

fn critical_constant(report: &mut Report) -> Option<RadialProfile> {
    let start = Instant::now();
    let profile = match solve_profile(DEFAULT_R_MAX, DEFAULT_TOL) {
        Ok(p) => p,
        Err(e) => {
            report.error(1, "critical constant", e);
            return None;
        }
    };
    match cross_check(&QuotientSearch::default(), SEED, CROSS_CHECK_STARTS) {
        Ok(cc) => {
            let elapsed = start.elapsed();
            let rel = (cc.best - profile.mass()).abs() / profile.mass();
            report.line(
                1,
                "critical constant",
                rel <= CROSS_CHECK_TOL && elapsed < CROSS_CHECK_BUDGET,
                format!(
                    "shooting {:.8}, GN minimization {:.8} over {CROSS_CHECK_STARTS} starts, rel {rel:.2e} ≤ {CROSS_CHECK_TOL:.0e}, {:.1} s < {} s",
                    profile.mass(),
                    cc.best,
                    elapsed.as_secs_f64(),
                    CROSS_CHECK_BUDGET.as_secs()
                ),
            );
        }
        Err(e) => report.error(1, "critical constant", e),
    }
    Some(profile)
}

fn gn_suites(report: &mut Report, profile: &RadialProfile) {
    let a_star = profile.mass();
    match (gn_inequality(a_star, GN_TRIALS, &mut rng(1)), gn_equality(profile, a_star)) {
        (Ok(ineq), Ok(eq)) => report.line(
            2,
            "GN inequality and equality",
            ineq.passed() && eq.passed(),
            format!("{}; {}", suite_detail(&ineq), suite_detail(&eq)),
        ),
        (Err(e), _) | (_, Err(e)) => report.error(2, "GN inequality and equality", e),
    }
    let p = pohozaev(profile, a_star);
    report.line(3, "Pohozaev identities", p.passed(), suite_detail(&p));
}

fn energy_laws(report: &mut Report, profile: &RadialProfile) {
    let a_star = profile.mass();
    let ladder = ladder_from_gaps(a_star, &LADDER);
    let m = match Minimizer::new(profile, SolveConfig::default()) {
        Ok(m) => m,
        Err(e) => return report.error(4, "energy law", e),
    };
    let base = match GpParams::new(0.0, ladder[0], a_star) {
        Ok(p) => p,
        Err(e) => return report.error(4, "energy law", e),
    };
    let start = Instant::now();
    let scans = match omega_sweep(&m, &base, &OMEGAS, &ladder) {
        Ok(s) => s,
        Err(e) => return report.error(4, "energy law", e),
    };
    // the sweep runs the scans side by side, so each took at most this long
    let elapsed = start.elapsed();
    for scan in &scans {
        scan_fit(scan, report, 4, "energy law", Some(elapsed));
    }

    match rotation_independence(&scans, ROTATION_GAP) {
        Ok(ri) => {
            let still = &scans[0];
            let mut sandwich_ok = true;
            for scan in &scans[1..] {
                match sandwich_rows(scan, still, SANDWICH_TOL) {
                    Ok(rows) => sandwich_ok &= rows.iter().all(|r| r.holds),
                    Err(_) => sandwich_ok = false,
                }
            }
            report.line(
                5,
                "rotation independence",
                ri.holds(ROTATION_TOL) && sandwich_ok,
                format!(
                    "F/ε² spread {:.2e} ≤ {ROTATION_TOL} at gap {ROTATION_GAP}, pairwise distance {:.2e} ≤ 2·{:.2e}, sandwich on every rung: {sandwich_ok}",
                    ri.energy_spread, ri.max_pairwise_distance, ri.max_distance_to_qn
                ),
            );
        }
        Err(e) => report.error(5, "rotation independence", e),
    }

    for scan in &scans {
        match (
            profile_convergence(scan, DISTANCE_SLACK, DISTANCE_THRESHOLD),
            width_scaling(scan, WIDTH_GAPS.0, WIDTH_GAPS.1),
        ) {
            (Ok(c), Ok(w)) => report.line(
                6,
                "profile convergence",
                c.passes && w.relative_error <= WIDTH_TOL,
                format!(
                    "Ω = {}: distance {:.2e} → {:.2e} (monotone within {}%: {}, < {DISTANCE_THRESHOLD}), width ratio {:.5} vs {:.5} (err {:.2}% ≤ {}%)",
                    scan.params.omega,
                    c.distances[0],
                    c.final_distance,
                    100.0 * DISTANCE_SLACK,
                    c.monotone,
                    w.ratio,
                    w.expected,
                    100.0 * w.relative_error,
                    100.0 * WIDTH_TOL
                ),
            ),
            (Err(e), _) | (_, Err(e)) => report.error(6, "profile convergence", e),
        }
    }
    if let Ok(mu) = mu_limit(&m, &scans[0]) {
        println!("     μ at gap {}: {:.6} vs λ*² = {:.6}", ROTATION_GAP, mu.mu, mu.target);
    }
}

fn anharmonic(report: &mut Report, profile: &RadialProfile) {
    let a_star = profile.mass();
    let ladder = ladder_from_gaps(a_star, &LADDER);
    let run = || -> gpcollapse::Result<ScanResult> {
        let m = Minimizer::new(profile, SolveConfig::default())?;
        let base = GpParams::with_potential(0.0, ladder[0], a_star, 4.0, 1.0, Scale::Blowup)?;
        collapse_scan(&m, &base, &ladder)
    };
    match run() {
        Ok(scan) => scan_fit(&scan, report, 7, "quartic trap law", None),
        Err(e) => report.error(7, "quartic trap law", e),
    }
}

fn hartree(report: &mut Report, profile: &RadialProfile) {
    let a_star = profile.mass();
    let run = || -> gpcollapse::Result<(bool, f64)> {
        let m = Minimizer::new(profile, SolveConfig::default())?;
        let base = GpParams::new(0.0, a_star - HARTREE_GAPS[0], a_star)?;
        let mut holds = true;
        let mut worst: f64 = 0.0;
        for &n in &HARTREE_NS {
            for &beta in &HARTREE_BETAS {
                for &gap in &HARTREE_GAPS {
                    let w = InteractionSpec::smeared(KernelShape::Gaussian, beta, n)?;
                    let b = hartree_upper_bound_check(&m, &base, &w, gap)?;
                    holds &= b.holds;
                    worst = worst.max(b.difference / b.bound);
                }
            }
        }
        Ok((holds, worst))
    };
    match (run(), hartree_dominates(a_star, HARTREE_TRIALS, &mut rng(8))) {
        (Ok((holds, worst)), Ok(dom)) => report.line(
            8,
            "Hartree bound",
            holds && dom.passed(),
            format!(
                "difference/bound at most {worst:.3e} over {} cases; {}",
                HARTREE_NS.len() * HARTREE_BETAS.len() * HARTREE_GAPS.len(),
                suite_detail(&dom)
            ),
        ),
        (Err(e), _) | (_, Err(e)) => report.error(8, "Hartree bound", e),
    }
}

fn field_suites(report: &mut Report, profile: &RadialProfile) {
    match (
        diamagnetic(FIELD_TRIALS, &mut rng(9)),
        gradient_consistency(profile.mass(), FIELD_TRIALS, &mut rng(10)),
    ) {
        (Ok(d), Ok(g)) => report.line(
            9,
            "diamagnetic and gradient suites",
            d.passed() && g.passed(),
            format!("{}; {}", suite_detail(&d), suite_detail(&g)),
        ),
        (Err(e), _) | (_, Err(e)) => report.error(9, "diamagnetic and gradient suites", e),
    }
}

fn oscillator(report: &mut Report, profile: &RadialProfile) {
    let a_star = profile.mass();
    let run = || -> gpcollapse::Result<(bool, f64)> {
        let m = Minimizer::new(profile, SolveConfig::default())?;
        let mut ok = true;
        let mut worst: f64 = 0.0;
        for &omega in &OSCILLATOR_OMEGAS {
            let p = GpParams::with_potential(omega, OSCILLATOR_A, a_star, 2.0, 1.0, Scale::Physical)?;
            let r = m.solve(&p)?;
            let err = (r.physical_energy - OSCILLATOR_ENERGY).abs();
            ok &= r.converged && err <= OSCILLATOR_TOL;
            worst = worst.max(err);
        }
        Ok((ok, worst))
    };
    match run() {
        Ok((ok, worst)) => report.line(
            10,
            "harmonic oscillator",
            ok,
            format!(
                "a = {OSCILLATOR_A:.0e}, Ω ∈ {OSCILLATOR_OMEGAS:?}: max |E − {OSCILLATOR_ENERGY}| = {worst:.2e} ≤ {OSCILLATOR_TOL:.0e}"
            ),
        ),
        Err(e) => report.error(10, "harmonic oscillator", e),
    }
}

fn main() -> ExitCode {
    let mut report = Report { failed: 0 };
    let Some(profile) = critical_constant(&mut report) else {
        return ExitCode::FAILURE;
    };
    if let Ok(c) = compute_constants(&profile, 2.0, 1.0) {
        println!("     a* = {:.12}, λ* = {:.12}", c.a_star, c.lambda_star);
    }
    gn_suites(&mut report, &profile);
    energy_laws(&mut report, &profile);
    anharmonic(&mut report, &profile);
    hartree(&mut report, &profile);
    field_suites(&mut report, &profile);
    oscillator(&mut report, &profile);
    if report.failed == 0 {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} failing line(s)", report.failed);
        ExitCode::FAILURE
    }
}
