//! Command-line front end.
//!
//! Options can also come from a `key=value` file given with `--config`;
//! keys are long flag names (`residual_tol` and `residual-tol` both work)
//! and flags on the command line take precedence. The output directory is
//! `--out`, overridden by the `GPCOLLAPSE_OUT` environment variable.
//!
//! Exit codes: 0 success, 1 invalid input or failed check, 2 numerical
//! non-convergence.

pub mod checks;

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::asymptotics::{default_gaps, ladder_from_gaps, omega_sweep, sandwich_rows, ScanResult};
use crate::error::{Error, Result};
use crate::functional::{GpParams, InteractionSpec, KernelShape, Scale};
use crate::grid::io::{read_field_binary, write_field_binary};
use crate::minimizer::{Init, Minimizer, SolveConfig};
use crate::profile::{compute_constants, solve_profile, RadialProfile, DEFAULT_R_MAX, DEFAULT_TOL};
use checks::{run_checks, CheckConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_NOT_CONVERGED: i32 = 2;

const OUT_ENV: &str = "GPCOLLAPSE_OUT";
const DEFAULT_OUT: &str = "gpcollapse-out";

#[derive(Parser, Debug)]
#[command(name = "gpcollapse", version, about = "Collapse of rotating attractive 2D Bose gases")]
pub struct Cli {
    /// Output directory (GPCOLLAPSE_OUT wins if set).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// key=value file with defaults for any long flag.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads for parallel sweeps (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Shoot the radial ground state and write its constants.
    Profile(ProfileArgs),
    /// One ground-state solve.
    Minimize(MinimizeArgs),
    /// Collapse scan over a ladder of couplings.
    Scan(ScanArgs),
    /// Seeded invariant suites.
    Check(CheckArgs),
}

#[derive(Args, Debug)]
pub struct ProfileArgs {
    #[arg(long, default_value_t = DEFAULT_R_MAX)]
    pub rmax: f64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = 2.0)]
    pub s: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c0: f64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum InitKind {
    Gaussian,
    Profile,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum KernelKind {
    Delta,
    Gaussian,
    Exponential,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ScaleKind {
    Blowup,
    Physical,
}

#[derive(Args, Debug)]
pub struct SolverArgs {
    #[arg(long, default_value_t = 2.0)]
    pub s: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c0: f64,
    #[arg(long, value_enum, default_value_t = ScaleKind::Blowup)]
    pub scale: ScaleKind,
    #[arg(long, default_value_t = 256)]
    pub n: usize,
    /// Box half-width in the blow-up scale.
    #[arg(long, default_value_t = 12.0)]
    pub extent: f64,
    #[arg(long, default_value_t = 20_000)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 0.5)]
    pub step0: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub residual_tol: f64,
    #[arg(long, value_enum, default_value_t = InitKind::Gaussian)]
    pub init: InitKind,
    #[arg(long, value_enum, default_value_t = KernelKind::Delta)]
    pub kernel: KernelKind,
    #[arg(long, default_value_t = 0.3)]
    pub beta: f64,
    #[arg(long, default_value_t = 1e6)]
    pub big_n: f64,
    /// Radial shooting horizon for the reference profile.
    #[arg(long, default_value_t = DEFAULT_R_MAX)]
    pub rmax: f64,
}

#[derive(Args, Debug)]
pub struct MinimizeArgs {
    #[arg(long, default_value_t = 0.0)]
    pub omega: f64,
    /// `a* − a` (default 0.05 when `--a` is absent).
    #[arg(long, visible_alias = "a-gap", conflicts_with = "a")]
    pub gap: Option<f64>,
    #[arg(long)]
    pub a: Option<f64>,
    /// Gaps solved first, each warm-starting the next.
    #[arg(long, value_delimiter = ',')]
    pub continuation: Vec<f64>,
    /// Start from a field in the binary format instead of `--init`.
    #[arg(long)]
    pub init_field: Option<PathBuf>,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    /// One scan per rotation, run in parallel.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub omega: Vec<f64>,
    /// Gaps `a* − a`, decreasing (default: 0.2 to 0.01, six rungs).
    #[arg(long, value_delimiter = ',')]
    pub ladder: Vec<f64>,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[arg(long, default_value_t = CheckConfig::default().seed)]
    pub seed: u64,
    #[arg(long, default_value_t = CheckConfig::default().trials)]
    pub trials: usize,
    /// Replace the computed a* (for testing the suite itself).
    #[arg(long)]
    pub a_star: Option<f64>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match merge_config(args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INVALID;
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INVALID;
        }
    };
    match pool.install(|| dispatch(&cli)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Numerical(_) => EXIT_NOT_CONVERGED,
        _ => EXIT_INVALID,
    }
}

fn output_dir(cli: &Cli) -> Result<PathBuf> {
    let dir = std::env::var_os(OUT_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
        .or_else(|| cli.out.clone())
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
    fs::create_dir_all(&dir)?;
    Ok(dir)
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

fn dispatch(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Profile(a) => cmd_profile(cli, a),
        Command::Minimize(a) => cmd_minimize(cli, a),
        Command::Scan(a) => cmd_scan(cli, a),
        Command::Check(a) => cmd_check(cli, a),
    }
}

fn cmd_profile(cli: &Cli, args: &ProfileArgs) -> Result<i32> {
    let profile = solve_profile(args.rmax, args.tol)?;
    let constants = compute_constants(&profile, args.s, args.c0)?;
    let dir = output_dir(cli)?;
    profile.write_csv(create(&dir, "profile.csv")?)?;
    constants.write_json(create(&dir, "constants.json")?)?;
    println!("q0           = {:.16e}", profile.q0());
    println!("a_star       = {:.16e}", constants.a_star);
    println!("lambda_star  = {:.16e}", constants.lambda_star);
    println!("lambda_tilde = {:.16e}", constants.lambda_tilde);
    Ok(EXIT_OK)
}

fn interaction(s: &SolverArgs) -> Result<InteractionSpec> {
    match s.kernel {
        KernelKind::Delta => Ok(InteractionSpec::Delta),
        KernelKind::Gaussian => InteractionSpec::smeared(KernelShape::Gaussian, s.beta, s.big_n),
        KernelKind::Exponential => InteractionSpec::smeared(KernelShape::Exponential, s.beta, s.big_n),
    }
}

fn solve_config(s: &SolverArgs, init: Init, continuation: Vec<f64>) -> Result<SolveConfig> {
    let cfg = SolveConfig {
        n: s.n,
        extent: s.extent,
        max_iters: s.max_iters,
        step0: s.step0,
        residual_tol: s.residual_tol,
        continuation,
        init,
        interaction: interaction(s)?,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn scale(s: &SolverArgs) -> Scale {
    match s.scale {
        ScaleKind::Blowup => Scale::Blowup,
        ScaleKind::Physical => Scale::Physical,
    }
}

fn reference_profile(s: &SolverArgs) -> Result<RadialProfile> {
    solve_profile(s.rmax, DEFAULT_TOL)
}

fn cmd_minimize(cli: &Cli, args: &MinimizeArgs) -> Result<i32> {
    let profile = reference_profile(&args.solver)?;
    let a_star = profile.mass();
    let a = match (args.a, args.gap) {
        (Some(a), _) => a,
        (None, gap) => a_star - gap.unwrap_or(0.05),
    };
    let p = GpParams::with_potential(args.omega, a, a_star, args.solver.s, args.solver.c0, scale(&args.solver))?;
    let continuation = ladder_from_gaps(a_star, &args.continuation);
    let init = match args.solver.init {
        InitKind::Gaussian => Init::Gaussian,
        InitKind::Profile => Init::Profile,
    };
    let mut cfg = solve_config(&args.solver, init, continuation)?;
    if let Some(path) = &args.init_field {
        cfg.init = Init::Field(read_field_binary(BufReader::new(File::open(path)?))?);
    }
    let m = Minimizer::new(&profile, cfg)?;
    let report = m.solve(&p)?;
    let dir = output_dir(cli)?;
    report.write_json(create(&dir, "report.json")?)?;
    report.write_history_csv(create(&dir, "history.csv")?)?;
    write_field_binary(&report.field, create(&dir, "field.bin")?)?;
    println!(
        "energy = {:.16e}  F/eps^2 = {:.16e}  mu = {:.16e}  residual = {:.3e}  iters = {}  converged = {}",
        report.physical_energy,
        report.energy_over_gap(),
        report.breakdown.mu,
        report.residual,
        report.iters,
        report.converged
    );
    Ok(if report.converged { EXIT_OK } else { EXIT_NOT_CONVERGED })
}

fn cmd_scan(cli: &Cli, args: &ScanArgs) -> Result<i32> {
    let gaps = if args.ladder.is_empty() {
        default_gaps()
    } else {
        args.ladder.clone()
    };
    let profile = reference_profile(&args.solver)?;
    let a_star = profile.mass();
    let ladder = ladder_from_gaps(a_star, &gaps);
    let first = *ladder.first().ok_or(Error::TooFewRungs(0))?;
    let base = GpParams::with_potential(0.0, first, a_star, args.solver.s, args.solver.c0, scale(&args.solver))?;
    for &omega in &args.omega {
        base.with_omega(omega)?;
    }
    let cfg = solve_config(&args.solver, initial(&args.solver), Vec::new())?;
    let m = Minimizer::new(&profile, cfg)?;
    let scans = omega_sweep(&m, &base, &args.omega, &ladder)?;
    let dir = output_dir(cli)?;
    let still = scans.iter().find(|s| s.params.omega == 0.0);
    let mut converged = true;
    for scan in &scans {
        let stem = if scans.len() == 1 {
            "scan".to_string()
        } else {
            format!("scan_omega{}", scan.params.omega)
        };
        scan.write_csv(create(&dir, &format!("{stem}.csv"))?)?;
        scan.write_json(create(&dir, &format!("{stem}.json"))?)?;
        scan.write_plot_data(create(&dir, &format!("{stem}_plot.csv"))?)?;
        report_scan(scan);
        if let Some(still) = still.filter(|s| scan.params.omega != 0.0 && s.rows.len() == scan.rows.len()) {
            let rows = sandwich_rows(scan, still, 10.0 * args.solver.residual_tol)?;
            println!("  sandwich holds on {}/{} rungs", rows.iter().filter(|r| r.holds).count(), rows.len());
        }
        converged &= scan.all_converged();
    }
    Ok(if converged { EXIT_OK } else { EXIT_NOT_CONVERGED })
}

fn initial(s: &SolverArgs) -> Init {
    match s.init {
        InitKind::Gaussian => Init::Gaussian,
        InitKind::Profile => Init::Profile,
    }
}

fn report_scan(scan: &ScanResult) {
    match scan.fit {
        Some(fit) => println!(
            "omega = {}: exponent = {:.16e} (target {:.16e}), constant = {:.16e} (target {:.16e})",
            scan.params.omega, fit.exponent, scan.target_exponent, fit.constant, scan.target_constant
        ),
        None => println!("omega = {}: fewer than 4 converged rungs, no fit", scan.params.omega),
    }
}

fn cmd_check(cli: &Cli, args: &CheckArgs) -> Result<i32> {
    let profile = solve_profile(DEFAULT_R_MAX, DEFAULT_TOL)?;
    let cfg = CheckConfig {
        seed: args.seed,
        trials: args.trials,
        a_star_override: args.a_star,
    };
    let table = run_checks(&profile, &cfg)?;
    let dir = output_dir(cli)?;
    table.write_csv(create(&dir, "check.csv")?)?;
    println!("{:<20} {:>7} {:>9} {:>24} {:>10}  status", "suite", "trials", "failures", "worst", "tolerance");
    for s in &table.suites {
        println!(
            "{:<20} {:>7} {:>9} {:>24.16e} {:>10.1e}  {}",
            s.name,
            s.trials,
            s.failures,
            s.worst,
            s.tolerance,
            if s.passed() { "pass" } else { "FAIL" }
        );
    }
    Ok(if table.all_passed() { EXIT_OK } else { EXIT_INVALID })
}

const SUBCOMMANDS: [&str; 4] = ["profile", "minimize", "scan", "check"];
const VALUE_FLAGS: [&str; 3] = ["--out", "--config", "--jobs"];

/// Splices `--key=value` pairs from the `--config` file in after the
/// subcommand, skipping keys already present on the command line.
fn merge_config(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let strings: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let mut config_path = None;
    let mut sub_index = None;
    let mut i = 1;
    while i < strings.len() {
        let a = &strings[i];
        if let Some(path) = a.strip_prefix("--config=") {
            config_path = Some(path.to_string());
        } else if a == "--config" {
            config_path = strings.get(i + 1).cloned();
        }
        if sub_index.is_none() && SUBCOMMANDS.contains(&a.as_str()) && !VALUE_FLAGS.contains(&strings[i - 1].as_str()) {
            sub_index = Some(i);
        }
        i += 1;
    }
    let (Some(path), Some(sub)) = (config_path, sub_index) else {
        return Ok(args);
    };
    let text = fs::read_to_string(&path)?;
    let given: Vec<String> = strings
        .iter()
        .filter_map(|a| a.strip_prefix("--"))
        .map(|a| canonical_key(a.split('=').next().unwrap_or(a)))
        .collect();
    let mut injected = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("{path}:{}: expected key=value", lineno + 1)))?;
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        if key == "config" || given.contains(&canonical_key(&key)) {
            continue;
        }
        injected.push(OsString::from(format!("--{key}={value}")));
    }
    let mut out = args;
    out.splice(sub + 1..sub + 1, injected);
    Ok(out)
}

fn canonical_key(key: &str) -> String {
    let key = key.replace('_', "-");
    if key == "a-gap" {
        "gap".to_string()
    } else {
        key
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strings(v: &[OsString]) -> Vec<String> {
        v.iter().map(|s| s.to_string_lossy().into_owned()).collect()
    }

    #[test]
    fn config_values_yield_to_flags() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        fs::write(&path, "# fixture\nomega = 0.5\nresidual_tol=1e-7\na_gap = 0.1\n").unwrap();
        let args: Vec<OsString> = ["gpcollapse", "minimize", "--gap", "0.02", "--config"]
            .iter()
            .map(OsString::from)
            .chain([path.clone().into_os_string()])
            .collect();
        let merged = strings(&merge_config(args).unwrap());
        assert!(merged.contains(&"--omega=0.5".to_string()));
        assert!(merged.contains(&"--residual-tol=1e-7".to_string()));
        assert!(!merged.iter().any(|a| a.starts_with("--a-gap")));
        let cli = Cli::try_parse_from(merged).unwrap();
        let Command::Minimize(m) = cli.command else { panic!() };
        assert_eq!(m.gap, Some(0.02));
        assert_eq!(m.omega, 0.5);
        assert_eq!(m.solver.residual_tol, 1e-7);
    }

    #[test]
    fn malformed_config_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.cfg");
        fs::write(&path, "omega 0.5\n").unwrap();
        let args = vec![
            OsString::from("gpcollapse"),
            OsString::from("check"),
            OsString::from("--config"),
            path.into_os_string(),
        ];
        assert!(matches!(merge_config(args), Err(Error::Parse(_))));
    }

    #[test]
    fn unknown_flag_is_a_usage_error() {
        assert_eq!(run(["gpcollapse", "check", "--no-such-flag"]), EXIT_INVALID);
    }
}
