//! Collapse scans `a → a*` and the blow-up laws they should reproduce.
//!
//! A scan solves the ladder in order, each rung warm-started from the
//! previous one, and fits `log E = log C + b·log(a* − a)` by unweighted
//! least squares over the converged rows. For the trap `c₀|x|^s` the
//! expected values are `b = s/(s+2)` and `C = (λ̃²/a*)(s+2)/s`.

use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::functional::{hartree_energy, gp_energy, GpParams, InteractionSpec, Scale};
use crate::grid::ComplexField;
use crate::minimizer::{least_squares, phase_align, Minimizer, Sandwich, SolveReport};

pub const MIN_FIT_ROWS: usize = 4;

/// `n` gaps geometrically spaced from `first` down to `last`.
pub fn geometric_gaps(first: f64, last: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![first];
    }
    let ratio = (last / first).powf(1.0 / (n - 1) as f64);
    (0..n).map(|k| first * ratio.powi(k as i32)).collect()
}

/// Default ladder `a* − a` from 0.2 to 0.01, six rungs.
pub fn default_gaps() -> Vec<f64> {
    geometric_gaps(0.2, 0.01, 6)
}

/// Couplings `a* − gap` for decreasing gaps.
pub fn ladder_from_gaps(a_star: f64, gaps: &[f64]) -> Vec<f64> {
    gaps.iter().map(|g| a_star - g).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PowerLaw {
    pub exponent: f64,
    pub constant: f64,
}

impl PowerLaw {
    pub fn eval(&self, x: f64) -> f64 {
        self.constant * x.powf(self.exponent)
    }
}

/// Least-squares fit of `y = C·x^b` in log-log space.
pub fn fit_power_law(x: &[f64], y: &[f64]) -> Result<PowerLaw> {
    if x.len() != y.len() {
        return Err(Error::InvalidParameter("abscissae and ordinates differ in length".into()));
    }
    if x.len() < MIN_FIT_ROWS {
        return Err(Error::TooFewRungs(x.len()));
    }
    if x.iter().chain(y).any(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(Error::Numerical("power-law fit needs positive finite data".into()));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let (slope, intercept) = least_squares(&lx, &ly);
    Ok(PowerLaw {
        exponent: slope,
        constant: intercept.exp(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub a: f64,
    /// `a* − a`.
    pub gap: f64,
    pub epsilon: f64,
    pub energy_physical: f64,
    /// `𝓕/ε²`, bounded and tending to the energy constant.
    pub f_over_eps2: f64,
    /// Blow-up scale `𝓕`, compared across rotations by the sandwich.
    pub f_blowup: f64,
    pub mu: f64,
    /// Physical radius holding half the mass.
    pub width50: f64,
    pub distance_to_qn: f64,
    pub residual: f64,
    pub iters: usize,
    pub converged: bool,
}

impl ScanRow {
    pub fn from_report(r: &SolveReport) -> Self {
        let p = &r.params;
        let (f_blowup, width_scale) = match p.scale {
            Scale::Blowup => (r.breakdown.total, p.length()),
            Scale::Physical => (r.breakdown.total * p.length().powi(2), 1.0),
        };
        Self {
            a: p.a,
            gap: p.gap(),
            epsilon: p.epsilon(),
            energy_physical: r.physical_energy,
            f_over_eps2: f_blowup / p.gap(),
            f_blowup,
            mu: r.breakdown.mu,
            width50: r.field.mass_radius(0.5) * width_scale,
            distance_to_qn: r.phase_aligned_distance,
            residual: r.residual,
            iters: r.iters,
            converged: r.converged,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanResult {
    pub params: GpParams,
    pub rows: Vec<ScanRow>,
    pub fit: Option<PowerLaw>,
    pub target_exponent: f64,
    pub target_constant: f64,
    /// Final field of each row, in the solve scale.
    #[serde(skip)]
    pub fields: Vec<ComplexField>,
}

impl ScanResult {
    /// Assembles a result and fits the converged rows when there are
    /// at least [`MIN_FIT_ROWS`] of them.
    pub fn from_rows(
        params: GpParams,
        rows: Vec<ScanRow>,
        fields: Vec<ComplexField>,
        target: PowerLaw,
    ) -> Result<Self> {
        if rows.windows(2).any(|w| w[1].gap >= w[0].gap) {
            return Err(Error::InvalidParameter("scan rows must have decreasing a* − a".into()));
        }
        let (x, y): (Vec<f64>, Vec<f64>) = rows
            .iter()
            .filter(|r| r.converged)
            .map(|r| (r.gap, r.energy_physical))
            .unzip();
        let fit = if x.len() >= MIN_FIT_ROWS {
            Some(fit_power_law(&x, &y)?)
        } else {
            None
        };
        Ok(Self {
            params,
            rows,
            fit,
            target_exponent: target.exponent,
            target_constant: target.constant,
            fields,
        })
    }

    pub fn all_converged(&self) -> bool {
        self.rows.iter().all(|r| r.converged)
    }

    pub fn row_at_gap(&self, gap: f64) -> Option<(usize, &ScanRow)> {
        self.rows
            .iter()
            .enumerate()
            .find(|(_, r)| (r.gap - gap).abs() <= 1e-9 * gap.max(1.0))
    }

    pub fn last(&self) -> Option<&ScanRow> {
        self.rows.last()
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# gpcollapse scan-csv v1")?;
        writeln!(
            out,
            "a,gap,epsilon,energy_physical,f_over_eps2,mu,width50,distance_to_qn,residual,iters,converged"
        )?;
        for r in &self.rows {
            writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{},{}",
                r.a,
                r.gap,
                r.epsilon,
                r.energy_physical,
                r.f_over_eps2,
                r.mu,
                r.width50,
                r.distance_to_qn,
                r.residual,
                r.iters,
                r.converged
            )?;
        }
        Ok(())
    }

    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        #[derive(Serialize)]
        struct Doc<'a> {
            schema: &'static str,
            #[serde(flatten)]
            scan: &'a ScanResult,
        }
        serde_json::to_writer_pretty(
            out,
            &Doc {
                schema: "gpcollapse/scan/1",
                scan: self,
            },
        )?;
        Ok(())
    }

    /// `log(a* − a)` against `log E`, one converged row per line.
    pub fn write_plot_data<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# gpcollapse plot-data v1")?;
        writeln!(out, "log_gap,log_energy")?;
        for r in self.rows.iter().filter(|r| r.converged) {
            writeln!(out, "{:.16e},{:.16e}", r.gap.ln(), r.energy_physical.ln())?;
        }
        Ok(())
    }
}

fn validate_ladder(p: &GpParams, ladder: &[f64]) -> Result<()> {
    if ladder.len() < MIN_FIT_ROWS {
        return Err(Error::TooFewRungs(ladder.len()));
    }
    if ladder.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("ladder must increase strictly toward a*".into()));
    }
    if ladder.iter().any(|&a| !(a > 0.0 && a < p.a_star)) {
        return Err(Error::InvalidParameter(format!(
            "ladder couplings must lie in (0, a* = {})",
            p.a_star
        )));
    }
    Ok(())
}

/// Solves every coupling of `ladder` (increasing toward `a*`) with the
/// other parameters of `base`.
pub fn collapse_scan(m: &Minimizer, base: &GpParams, ladder: &[f64]) -> Result<ScanResult> {
    validate_ladder(base, ladder)?;
    let constants = m.constants(base)?;
    let mut rows = Vec::with_capacity(ladder.len());
    let mut fields = Vec::with_capacity(ladder.len());
    let mut previous: Option<ComplexField> = None;
    for &a in ladder {
        let p = GpParams { a, ..*base };
        p.validate()?;
        let report = match previous.take() {
            Some(field) => m.solve_from(&p, field)?,
            None => m.solve(&p)?,
        };
        rows.push(ScanRow::from_report(&report));
        previous = Some(report.field.clone());
        fields.push(report.field);
    }
    ScanResult::from_rows(
        *base,
        rows,
        fields,
        PowerLaw {
            exponent: constants.energy_exponent(),
            constant: constants.energy_constant(),
        },
    )
}

/// Independent scans for each rotation, run in parallel.
pub fn omega_sweep(m: &Minimizer, base: &GpParams, omegas: &[f64], ladder: &[f64]) -> Result<Vec<ScanResult>> {
    omegas
        .par_iter()
        .map(|&omega| collapse_scan(m, &base.with_omega(omega)?, ladder))
        .collect()
}

/// Row-wise `√(1−Ω²)F₀ ≤ F_Ω ≤ F₀` between a rotating scan and the
/// non-rotating scan over the same ladder.
pub fn sandwich_rows(rotating: &ScanResult, still: &ScanResult, tol: f64) -> Result<Vec<Sandwich>> {
    if rotating.rows.len() != still.rows.len() {
        return Err(Error::InvalidParameter("scans have different ladders".into()));
    }
    rotating
        .rows
        .iter()
        .zip(&still.rows)
        .map(|(r, z)| {
            if (r.a - z.a).abs() > 1e-12 * r.a.abs().max(1.0) {
                return Err(Error::InvalidParameter("scans have different ladders".into()));
            }
            Ok(Sandwich::new(rotating.params.omega, r.f_blowup, z.f_blowup, tol))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRecord {
    pub gaps: Vec<f64>,
    pub distances: Vec<f64>,
    /// Relative slack allowed per step of the ladder.
    pub slack: f64,
    pub monotone: bool,
    pub final_distance: f64,
    pub threshold: f64,
    pub passes: bool,
}

/// Distance to `Q_N` along the ladder: nonincreasing up to `slack` per step
/// and below `threshold` at the last rung.
pub fn profile_convergence(scan: &ScanResult, slack: f64, threshold: f64) -> Result<ConvergenceRecord> {
    let last = scan
        .last()
        .ok_or_else(|| Error::InvalidParameter("empty scan".into()))?;
    let distances: Vec<f64> = scan.rows.iter().map(|r| r.distance_to_qn).collect();
    let monotone = distances.windows(2).all(|w| w[1] <= w[0] * (1.0 + slack));
    let passes = monotone && last.distance_to_qn < threshold && scan.all_converged();
    Ok(ConvergenceRecord {
        gaps: scan.rows.iter().map(|r| r.gap).collect(),
        distances,
        slack,
        monotone,
        final_distance: last.distance_to_qn,
        threshold,
        passes,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WidthScaling {
    pub gap_wide: f64,
    pub gap_narrow: f64,
    pub ratio: f64,
    /// `(gap_wide/gap_narrow)^{1/(s+2)}`.
    pub expected: f64,
    pub relative_error: f64,
}

pub fn width_scaling(scan: &ScanResult, gap_wide: f64, gap_narrow: f64) -> Result<WidthScaling> {
    let find = |g: f64| {
        scan.row_at_gap(g)
            .map(|(_, r)| r.width50)
            .ok_or_else(|| Error::InvalidParameter(format!("scan has no rung at a* − a = {g}")))
    };
    let ratio = find(gap_wide)? / find(gap_narrow)?;
    let expected = (gap_wide / gap_narrow).powf(1.0 / (scan.params.s + 2.0));
    Ok(WidthScaling {
        gap_wide,
        gap_narrow,
        ratio,
        expected,
        relative_error: (ratio - expected).abs() / expected,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RotationIndependence {
    pub omegas: Vec<f64>,
    pub energies: Vec<f64>,
    /// `(max − min)/min` of `𝓕/ε²`.
    pub energy_spread: f64,
    pub max_pairwise_distance: f64,
    pub max_distance_to_qn: f64,
}

impl RotationIndependence {
    pub fn holds(&self, energy_tol: f64) -> bool {
        self.energy_spread <= energy_tol && self.max_pairwise_distance <= 2.0 * self.max_distance_to_qn
    }
}

/// Compares the rows at `gap` across scans with different rotations.
pub fn rotation_independence(scans: &[ScanResult], gap: f64) -> Result<RotationIndependence> {
    let mut omegas = Vec::new();
    let mut energies = Vec::new();
    let mut fields = Vec::new();
    let mut max_distance_to_qn: f64 = 0.0;
    for scan in scans {
        let (idx, row) = scan
            .row_at_gap(gap)
            .ok_or_else(|| Error::InvalidParameter(format!("scan has no rung at a* − a = {gap}")))?;
        omegas.push(scan.params.omega);
        energies.push(row.f_over_eps2);
        max_distance_to_qn = max_distance_to_qn.max(row.distance_to_qn);
        fields.push(&scan.fields[idx]);
    }
    let max = energies.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = energies.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut max_pairwise_distance: f64 = 0.0;
    for i in 0..fields.len() {
        for j in i + 1..fields.len() {
            max_pairwise_distance = max_pairwise_distance.max(phase_align(fields[i], fields[j])?.distance);
        }
    }
    Ok(RotationIndependence {
        omegas,
        energies,
        energy_spread: (max - min) / min,
        max_pairwise_distance,
        max_distance_to_qn,
    })
}

/// `μ` at the last rung against `λ̃²` (`= λ*²` for the harmonic trap).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MuLimit {
    pub mu: f64,
    pub target: f64,
    pub relative_error: f64,
}

pub fn mu_limit(m: &Minimizer, scan: &ScanResult) -> Result<MuLimit> {
    let last = scan
        .last()
        .ok_or_else(|| Error::InvalidParameter("empty scan".into()))?;
    let target = m.constants(&scan.params)?.lambda_tilde.powi(2);
    Ok(MuLimit {
        mu: last.mu,
        target,
        relative_error: (last.mu - target).abs() / target,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HartreeBound {
    pub big_n: f64,
    pub beta: f64,
    pub gap: f64,
    pub hartree: f64,
    pub gp: f64,
    /// `𝓔^H(Q_N) − 𝓔^{GP}(Q_N)`, evaluated directly on the Fourier side.
    pub difference: f64,
    /// `2a*·∫|z|w·N^{−β}(a* − a)^{−5/4}`.
    pub bound: f64,
    pub holds: bool,
}

/// Compares the Hartree and GP energies of the physical blow-up profile
/// `Q_N` for the harmonic trap.
pub fn hartree_upper_bound_check(m: &Minimizer, base: &GpParams, w: &InteractionSpec, gap: f64) -> Result<HartreeBound> {
    let InteractionSpec::Smeared { shape, beta, big_n } = *w else {
        return Err(Error::InvalidParameter("the Hartree bound needs a smeared kernel".into()));
    };
    let p = base.at_gap(gap)?.with_scale(Scale::Physical);
    let grid = m.grid_for(&p)?;
    let q = m.reference(&grid, &p)?;
    let hartree = hartree_energy(&q, &p, w)?.total;
    let gp = gp_energy(&q, &p)?.total;
    let difference = interaction_deficit(&q, p.a, w);
    let bound = 2.0 * p.a_star * shape.first_moment() * big_n.powf(-beta) * gap.powf(-1.25);
    Ok(HartreeBound {
        big_n,
        beta,
        gap,
        hartree,
        gp,
        difference,
        bound,
        holds: difference <= bound,
    })
}

/// `(g/2)∫ρ(ρ − w_N ⋆ ρ)` via Parseval, free of the cancellation in
/// `𝓔^H − 𝓔^{GP}`.
pub fn interaction_deficit(u: &ComplexField, g: f64, w: &InteractionSpec) -> f64 {
    let grid = u.grid();
    let rho: Vec<Complex64> = u.values().iter().map(|z| Complex64::new(z.norm_sqr(), 0.0)).collect();
    let spec = grid.spectrum(&rho);
    let n = grid.n();
    let k = grid.wavenumbers();
    let mut total = 0.0;
    for j in 0..n {
        for i in 0..n {
            let k_sq = k[i] * k[i] + k[j] * k[j];
            total += (1.0 - w.fourier(k_sq)) * spec[j * n + i].norm_sqr();
        }
    }
    0.5 * g * total * grid.cell_area() / grid.len() as f64
}

/// `‖∇Q_N‖·‖Q_N‖³_{L⁶}` for the physical blow-up profile at `gap`.
pub fn trial_state_norm(m: &Minimizer, base: &GpParams, gap: f64) -> Result<f64> {
    let p = base.at_gap(gap)?.with_scale(Scale::Physical);
    let grid = m.grid_for(&p)?;
    let q = m.reference(&grid, &p)?;
    Ok(crate::grid::gradient_norm_sq(&q).sqrt() * q.lp_norm(6.0).powi(3))
}
