//! Radial Gagliardo–Nirenberg ground state `Q` of `−ΔQ + Q − Q³ = 0` and the
//! constants derived from it.
//!
//! `Q` is found by shooting on `Q'' + Q'/r − Q + Q³ = 0`, `Q'(0) = 0`, with
//! bisection on `Q(0)`. Too low a start turns back up before reaching zero,
//! too high a start crosses zero. Bisection runs to machine precision; beyond
//! the radius where `Q` drops below [`TAIL_SWITCH`] the shot is no longer
//! trustworthy (the unstable mode grows like `eʳ`) and the profile is
//! continued by the decaying solution `A·K₀(r)` of the linearized equation.

mod bessel;
pub mod gn;
pub mod ode;

use std::f64::consts::PI;
use std::io::Write;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{ComplexField, SpectralGrid};
use ode::{DormandPrince, State};

/// Profile value below which the shot is replaced by the Bessel tail.
pub const TAIL_SWITCH: f64 = 1e-4;

/// Largest admissible `Q(r_max)`.
pub const DECAY_LIMIT: f64 = 1e-8;

/// Largest outer-annulus mass accepted when materializing `Q_{λ,X}`.
pub const SUPPORT_LIMIT: f64 = 1e-8;

pub const DEFAULT_R_MAX: f64 = 20.0;
pub const DEFAULT_TOL: f64 = 1e-12;
const NODE_SPACING: f64 = 0.005;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Shot {
    /// Turned back up while still positive.
    Low,
    /// Crossed zero.
    High,
}

/// Shooting configuration.
#[derive(Clone, Debug)]
pub struct ProfileSolver {
    pub r_max: f64,
    pub tol: f64,
    pub bracket: (f64, f64),
}

impl Default for ProfileSolver {
    fn default() -> Self {
        Self {
            r_max: DEFAULT_R_MAX,
            tol: DEFAULT_TOL,
            bracket: (1.0, 4.0),
        }
    }
}

/// Taylor start `Q(r) = q₀ + c₂r² + c₄r⁴ + c₆r⁶` of the regular solution.
fn series_start(q0: f64, r: f64) -> State {
    let c2 = (q0 - q0.powi(3)) / 4.0;
    let c4 = c2 * (1.0 - 3.0 * q0 * q0) / 16.0;
    let c6 = (c4 * (1.0 - 3.0 * q0 * q0) - 3.0 * q0 * c2 * c2) / 36.0;
    let r2 = r * r;
    [
        q0 + r2 * (c2 + r2 * (c4 + r2 * c6)),
        r * (2.0 * c2 + r2 * (4.0 * c4 + r2 * 6.0 * c6)),
    ]
}

fn rhs(r: f64, y: &State) -> State {
    [y[1], -y[1] / r + y[0] - y[0].powi(3)]
}

impl ProfileSolver {
    pub fn new(r_max: f64, tol: f64) -> Self {
        Self {
            r_max,
            tol,
            ..Self::default()
        }
    }

    pub fn with_bracket(mut self, lo: f64, hi: f64) -> Self {
        self.bracket = (lo, hi);
        self
    }

    fn integrator(&self) -> DormandPrince<fn(f64, &State) -> State> {
        let rtol = (self.tol * 1e-2).max(1e-14);
        DormandPrince::new(rhs, rtol, rtol * 1e-3, NODE_SPACING)
    }

    /// Integrates on the uniform node grid until the shot can be classified
    /// or `r_stop` is reached. Returns the classification and the states at
    /// the visited nodes.
    fn shoot(&self, q0: f64, dr: f64, r_stop: f64, keep: bool) -> Result<(Shot, Vec<State>)> {
        let mut states = Vec::new();
        let mut y = [q0, 0.0];
        if keep {
            states.push(y);
        }
        y = series_start(q0, dr);
        if keep {
            states.push(y);
        }
        let mut dp = self.integrator();
        let mut i = 1usize;
        loop {
            if y[0] < 0.0 {
                return Ok((Shot::High, states));
            }
            if y[1] > 0.0 || !y[0].is_finite() {
                return Ok((Shot::Low, states));
            }
            let r = i as f64 * dr;
            if r >= r_stop {
                // never left the neighbourhood of a fixed point; y stays
                // positive so it is on the low side
                return Ok((Shot::Low, states));
            }
            dp.advance(r, r + dr, &mut y).map_err(Error::Numerical)?;
            i += 1;
            if keep {
                states.push(y);
            }
        }
    }

    pub fn solve(&self) -> Result<RadialProfile> {
        if !(self.r_max >= 15.0) {
            return Err(Error::InvalidParameter(format!(
                "r_max must be ≥ 15, got {}",
                self.r_max
            )));
        }
        if !(self.tol > 0.0 && self.tol <= 1e-10) {
            return Err(Error::InvalidParameter(format!(
                "tol must lie in (0, 1e-10], got {}",
                self.tol
            )));
        }
        let intervals = {
            let m = (self.r_max / NODE_SPACING).ceil() as usize;
            m + m % 2
        };
        let dr = self.r_max / intervals as f64;
        let horizon = self.r_max.max(80.0);

        let (mut lo, mut hi) = self.bracket;
        let lo_shot = self.shoot(lo, dr, horizon, false)?.0;
        let hi_shot = self.shoot(hi, dr, horizon, false)?.0;
        if lo_shot != Shot::Low || hi_shot != Shot::High {
            return Err(Error::Bracket {
                lo,
                hi,
                detail: format!(
                    "Q(0) = {lo} {} and Q(0) = {hi} {}",
                    describe(lo_shot),
                    describe(hi_shot)
                ),
            });
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            match self.shoot(mid, dr, horizon, false)?.0 {
                Shot::Low => lo = mid,
                Shot::High => hi = mid,
            }
        }

        let (_, low_states) = self.shoot(lo, dr, horizon, true)?;
        let (_, high_states) = self.shoot(hi, dr, horizon, true)?;
        let switch = low_states
            .iter()
            .position(|s| s[0] < TAIL_SWITCH)
            .ok_or_else(|| Error::Numerical("shot never decayed below the tail threshold".into()))?;
        if switch >= high_states.len() {
            return Err(Error::Numerical("bracketing shots stopped before the tail".into()));
        }
        let spread = (low_states[switch][0] - high_states[switch][0]).abs() / TAIL_SWITCH;
        if spread > 1e-6 {
            return Err(Error::Numerical(format!(
                "bracketing shots disagree by {spread:.2e} (relative) at the tail switch"
            )));
        }
        let r_switch = switch as f64 * dr;
        if r_switch < 6.0 {
            return Err(Error::Numerical(format!(
                "profile decayed suspiciously early (r = {r_switch})"
            )));
        }
        let amplitude = low_states[switch][0] / bessel::k0(r_switch);

        let mut r = Vec::with_capacity(intervals + 1);
        let mut q = Vec::with_capacity(intervals + 1);
        let mut dq = Vec::with_capacity(intervals + 1);
        for i in 0..=intervals {
            let ri = i as f64 * dr;
            r.push(ri);
            if i <= switch {
                q.push(low_states[i][0]);
                dq.push(low_states[i][1]);
            } else {
                q.push(amplitude * bessel::k0(ri));
                dq.push(-amplitude * bessel::k1(ri));
            }
        }
        let profile = RadialProfile {
            q0: lo,
            r_max: self.r_max,
            dr,
            r,
            q,
            dq,
            mass: 0.0,
        };
        let mass = profile.radial_integral(|_, q, _| q * q);
        let profile = RadialProfile { mass, ..profile };

        let tail = *profile.q.last().expect("nodes");
        if tail >= DECAY_LIMIT {
            return Err(Error::InvalidParameter(format!(
                "Q(r_max) = {tail:.2e} is not below {DECAY_LIMIT:.0e}; increase r_max"
            )));
        }
        Ok(profile)
    }
}

fn describe(shot: Shot) -> &'static str {
    match shot {
        Shot::Low => "turns back before reaching zero",
        Shot::High => "crosses zero",
    }
}

/// Shoots `Q` with the default bracket `[1, 4]`.
pub fn solve_profile(r_max: f64, tol: f64) -> Result<RadialProfile> {
    ProfileSolver::new(r_max, tol).solve()
}

/// `Q` sampled on uniform radial nodes `0, dr, …, r_max`.
#[derive(Clone, Debug)]
pub struct RadialProfile {
    q0: f64,
    r_max: f64,
    dr: f64,
    r: Vec<f64>,
    q: Vec<f64>,
    dq: Vec<f64>,
    mass: f64,
}

impl RadialProfile {
    pub fn q0(&self) -> f64 {
        self.q0
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn nodes(&self) -> &[f64] {
        &self.r
    }

    pub fn values(&self) -> &[f64] {
        &self.q
    }

    pub fn derivatives(&self) -> &[f64] {
        &self.dq
    }

    /// `‖Q‖²_{L²} = a*`.
    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// `2π ∫₀^{r_max} f(r, Q, Q') r dr` by composite Simpson on the nodes.
    pub fn radial_integral<F>(&self, f: F) -> f64
    where
        F: Fn(f64, f64, f64) -> f64,
    {
        let last = self.r.len() - 1;
        let mut sum = 0.0;
        for i in 0..=last {
            let w = if i == 0 || i == last {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            sum += w * f(self.r[i], self.q[i], self.dq[i]) * self.r[i];
        }
        2.0 * PI * sum * self.dr / 3.0
    }

    /// Cubic Hermite interpolation of `Q`; zero beyond `r_max`.
    pub fn eval(&self, r: f64) -> f64 {
        let r = r.abs();
        if r >= self.r_max {
            return 0.0;
        }
        let pos = r / self.dr;
        let i = (pos.floor() as usize).min(self.r.len() - 2);
        let t = pos - i as f64;
        let (q0, q1) = (self.q[i], self.q[i + 1]);
        let (m0, m1) = (self.dq[i] * self.dr, self.dq[i + 1] * self.dr);
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * q0
            + (t3 - 2.0 * t2 + t) * m0
            + (-2.0 * t3 + 3.0 * t2) * q1
            + (t3 - t2) * m1
    }

    /// Max over interior nodes of `|Q'' + Q'/r − Q + Q³|`, with `Q''` from a
    /// sixth-order central difference of the stored values.
    pub fn residual_max(&self) -> f64 {
        let h2 = self.dr * self.dr;
        let q = &self.q;
        (3..q.len() - 3)
            .map(|i| {
                let d2 = (2.0 * (q[i - 3] + q[i + 3]) - 27.0 * (q[i - 2] + q[i + 2])
                    + 270.0 * (q[i - 1] + q[i + 1])
                    - 490.0 * q[i])
                    / (180.0 * h2);
                (d2 + self.dq[i] / self.r[i] - q[i] + q[i].powi(3)).abs()
            })
            .fold(0.0, f64::max)
    }

    pub fn is_strictly_decreasing(&self) -> bool {
        self.q.windows(2).all(|w| w[1] < w[0]) && self.q.iter().all(|&v| v > 0.0)
    }

    /// Smallest radius outside which `Q²` carries less than `fraction` of the mass.
    pub fn tail_radius(&self, fraction: f64) -> f64 {
        let mut outside = 0.0;
        for i in (1..self.r.len()).rev() {
            let (r0, r1) = (self.r[i - 1], self.r[i]);
            outside += PI * (self.q[i - 1].powi(2) * r0 + self.q[i].powi(2) * r1) * (r1 - r0);
            if outside > fraction * self.mass {
                return r1;
            }
        }
        0.0
    }

    /// The Pohozaev integrals `∫|∇Q|²`, `∫Q²`, `∫Q⁴`.
    pub fn pohozaev(&self) -> Pohozaev {
        Pohozaev {
            kinetic: self.radial_integral(|_, _, dq| dq * dq),
            mass: self.mass,
            quartic: self.radial_integral(|_, q, _| q.powi(4)),
        }
    }

    /// Writes `r,Q` rows after a schema line.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# gpcollapse profile-csv v1 q0={:.16e}", self.q0)?;
        writeln!(out, "r,q")?;
        for (r, q) in self.r.iter().zip(&self.q) {
            writeln!(out, "{r:.16e},{q:.16e}")?;
        }
        out.flush()?;
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Pohozaev {
    pub kinetic: f64,
    pub mass: f64,
    pub quartic: f64,
}

impl Pohozaev {
    /// Worst relative deviation from `∫|∇Q|² = ∫Q² = a*`, `∫Q⁴ = 2a*`.
    pub fn max_relative_error(&self) -> f64 {
        let kin = (self.kinetic - self.mass).abs() / self.mass;
        let quart = (self.quartic - 2.0 * self.mass).abs() / (2.0 * self.mass);
        kin.max(quart)
    }
}

/// Critical constants for the potential `c₀|x|^s`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GnConstants {
    pub a_star: f64,
    pub lambda_star: f64,
    pub s: f64,
    pub c0: f64,
    pub lambda_tilde: f64,
}

impl GnConstants {
    /// Leading coefficient of the energy law `E ≈ C·(a* − a)^{s/(s+2)}`.
    pub fn energy_constant(&self) -> f64 {
        self.lambda_tilde.powi(2) / self.a_star * (self.s + 2.0) / self.s
    }

    pub fn energy_exponent(&self) -> f64 {
        self.s / (self.s + 2.0)
    }

    /// Concentration scale `λ̃·(a* − a)^{−1/(2+s)}` of the blow-up profile.
    pub fn blowup_lambda(&self, a: f64) -> Result<f64> {
        if !(a > 0.0 && a < self.a_star) {
            return Err(Error::InvalidParameter(format!(
                "coupling must satisfy 0 < a < a* = {}, got {a}",
                self.a_star
            )));
        }
        Ok(self.lambda_tilde * (self.a_star - a).powf(-1.0 / (2.0 + self.s)))
    }

    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        #[derive(Serialize)]
        struct Doc<'a> {
            schema: &'static str,
            #[serde(flatten)]
            constants: &'a GnConstants,
        }
        serde_json::to_writer_pretty(
            out,
            &Doc {
                schema: "gpcollapse/constants/1",
                constants: self,
            },
        )?;
        Ok(())
    }
}

pub fn compute_constants(p: &RadialProfile, s: f64, c0: f64) -> Result<GnConstants> {
    if !(s > 0.0 && c0 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need s > 0 and c0 > 0, got s = {s}, c0 = {c0}"
        )));
    }
    let second = p.radial_integral(|r, q, _| r * r * q * q);
    let moment_s = p.radial_integral(|r, q, _| r.powf(s) * q * q);
    Ok(GnConstants {
        a_star: p.mass(),
        lambda_star: second.powf(0.25),
        s,
        c0,
        lambda_tilde: (0.5 * s * c0 * moment_s).powf(1.0 / (2.0 + s)),
    })
}

/// `Q_{λ,X}(x) = λ·Q*(λ(x − X))` with `Q* = Q/√a*`.
pub fn materialize_q(
    grid: &Arc<SpectralGrid>,
    p: &RadialProfile,
    lambda: f64,
    center: [f64; 2],
) -> Result<ComplexField> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::InvalidParameter(format!("λ must be positive, got {lambda}")));
    }
    let l = grid.extent();
    if center[0].abs() >= l || center[1].abs() >= l {
        return Err(Error::InvalidParameter(format!(
            "centre ({}, {}) lies outside the box",
            center[0], center[1]
        )));
    }
    let amp = lambda / p.mass().sqrt();
    let field = ComplexField::from_fn(grid, |x1, x2| {
        let (d1, d2) = (x1 - center[0], x2 - center[1]);
        Complex64::new(amp * p.eval(lambda * (d1 * d1 + d2 * d2).sqrt()), 0.0)
    });
    let outer = grid.outer_annulus_mass(field.values());
    if outer > SUPPORT_LIMIT {
        let reach = p.tail_radius(1e-10) / lambda + center[0].abs().max(center[1].abs());
        return Err(Error::SupportOverflow {
            mass: outer,
            limit: SUPPORT_LIMIT,
            suggested_extent: reach / crate::grid::OUTER_ANNULUS_FRACTION,
        });
    }
    Ok(field)
}

/// Physical-scale blow-up profile `Q_{λ,0}`, `λ = λ̃(a* − a)^{−1/(2+s)}`.
pub fn blowup_profile(
    grid: &Arc<SpectralGrid>,
    p: &RadialProfile,
    constants: &GnConstants,
    a: f64,
) -> Result<ComplexField> {
    let lambda = constants.blowup_lambda(a)?;
    materialize_q(grid, p, lambda, [0.0, 0.0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::gradient_norm_sq;
    use crate::testutil::profile;

    #[test]
    fn shooting_height() {
        assert!((profile().q0() - 2.2062).abs() < 1e-3);
    }

    #[test]
    fn profile_invariants() {
        let p = profile();
        assert!(p.is_strictly_decreasing());
        assert!(*p.values().last().unwrap() < DECAY_LIMIT);
        assert!(p.residual_max() < 1e-8, "residual {}", p.residual_max());
    }

    #[test]
    fn pohozaev_identities() {
        let poh = profile().pohozaev();
        assert!(poh.max_relative_error() < 1e-6, "{poh:?}");
    }

    #[test]
    fn constants_reduce_at_harmonic_trap() {
        let c = compute_constants(profile(), 2.0, 1.0).unwrap();
        assert!((c.a_star - 11.70).abs() < 0.01);
        assert!((c.lambda_tilde - c.lambda_star).abs() < 1e-10);
        assert!((c.energy_constant() - 2.0 * c.lambda_star.powi(2) / c.a_star).abs() < 1e-12);
        assert!(compute_constants(profile(), 0.0, 1.0).is_err());
        assert!(compute_constants(profile(), 2.0, -1.0).is_err());
    }

    #[test]
    fn bad_bracket_is_diagnosed() {
        let err = ProfileSolver::default().with_bracket(2.5, 4.0).solve().unwrap_err();
        assert!(matches!(err, Error::Bracket { .. }));
        let err = ProfileSolver::default().with_bracket(1.0, 1.5).solve().unwrap_err();
        assert!(matches!(err, Error::Bracket { .. }));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(solve_profile(10.0, 1e-12).is_err());
        assert!(solve_profile(20.0, 1e-6).is_err());
    }

    #[test]
    fn hermite_matches_nodes() {
        let p = profile();
        for i in [0, 7, 400, 2100] {
            assert!((p.eval(p.nodes()[i]) - p.values()[i]).abs() < 1e-15);
        }
        assert_eq!(p.eval(25.0), 0.0);
    }

    #[test]
    fn materialized_q_is_normalized_and_optimal() {
        let p = profile();
        let g = SpectralGrid::shared(256, 16.0).unwrap();
        let u = materialize_q(&g, p, 1.0, [0.0, 0.0]).unwrap();
        assert!((u.norm_sq() - 1.0).abs() < 1e-6);
        let ratio = gradient_norm_sq(&u) * u.norm_sq() / (0.5 * p.mass() * u.quartic());
        assert!((ratio - 1.0).abs() < 1e-5, "{ratio}");
    }

    #[test]
    fn support_overflow_suggests_extent() {
        let p = profile();
        let g = SpectralGrid::shared(64, 6.0).unwrap();
        match materialize_q(&g, p, 0.5, [0.0, 0.0]) {
            Err(Error::SupportOverflow { suggested_extent, .. }) => assert!(suggested_extent > 6.0),
            other => panic!("expected overflow, got {other:?}"),
        }
    }

    #[test]
    fn blowup_profile_consistency() {
        let p = profile();
        let c = compute_constants(p, 2.0, 1.0).unwrap();
        let g = SpectralGrid::shared(128, 12.0).unwrap();
        // λ*⁴ > a*, so unit concentration would need a negative coupling
        let a_unit = c.a_star - c.lambda_star.powi(4);
        assert!(a_unit < 0.0);
        assert!(blowup_profile(&g, p, &c, a_unit).is_err());
        let a_hi = c.a_star - 0.1;
        let lam = c.blowup_lambda(a_hi).unwrap();
        let direct = materialize_q(&g, p, lam, [0.0, 0.0]).unwrap();
        let via = blowup_profile(&g, p, &c, a_hi).unwrap();
        assert!(direct.distance(&via).unwrap() < 1e-10);
        assert!(blowup_profile(&g, p, &c, c.a_star).is_err());
        assert!(blowup_profile(&g, p, &c, c.a_star + 1.0).is_err());
    }
}
