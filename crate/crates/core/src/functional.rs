//! Gross–Pitaevskii and Hartree energies, their `L²` gradient and the
//! Lagrange multiplier.
//!
//! Every functional here has the shape
//!
//! ```text
//! ∫|∇u|² + κ∫|x|^s|u|² − ρ⟨u, Lu⟩ − (g/2)·I(u)
//! ```
//!
//! with `I(u) = ∫|u|⁴` (contact interaction) or `∬w_N(x−y)|u(x)|²|u(y)|²`
//! (smeared). [`Coefficients`] holds `(κ, s, ρ, g)`.
//!
//! In the blow-up scale `v(x) = ℓ·u(ℓx)` with `δ = a* − a` and
//! `ℓ = δ^{1/(s+2)}`, substituting into the physical functional gives
//! `𝓔(u) = 𝓕(v)/ℓ²` where
//!
//! ```text
//! 𝓕(v) = ∫|∇v|² − (a/2)∫|v|⁴ + c₀δ∫|x|^s|v|² − 2Ωℓ²⟨v, Lv⟩.
//! ```
//!
//! For `s = 2` this is `ε = √δ = ℓ²` with trap `ε²`, rotation `2Ωε`, and
//! `a = a* − ε²`, the familiar rescaled functional whose minimizer has
//! width of order one.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::radial_power;
use crate::grid::{gradient_norm_sq, ComplexField};

/// Tolerance on `|‖u‖² − 1|` for energy evaluation.
pub const NORMALIZATION_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Physical,
    Blowup,
}

/// Physical configuration of a trapped, rotating condensate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GpParams {
    pub omega: f64,
    pub a: f64,
    pub a_star: f64,
    pub s: f64,
    pub c0: f64,
    pub scale: Scale,
}

impl GpParams {
    /// Harmonic trap (`s = 2`, `c₀ = 1`) in the blow-up scale.
    pub fn new(omega: f64, a: f64, a_star: f64) -> Result<Self> {
        Self::with_potential(omega, a, a_star, 2.0, 1.0, Scale::Blowup)
    }

    pub fn with_potential(
        omega: f64,
        a: f64,
        a_star: f64,
        s: f64,
        c0: f64,
        scale: Scale,
    ) -> Result<Self> {
        let p = Self {
            omega,
            a,
            a_star,
            s,
            c0,
            scale,
        };
        p.validate()?;
        Ok(p)
    }

    /// Same parameters at a coupling `a* − gap`.
    pub fn at_gap(&self, gap: f64) -> Result<Self> {
        Self::with_potential(self.omega, self.a_star - gap, self.a_star, self.s, self.c0, self.scale)
    }

    pub fn with_omega(&self, omega: f64) -> Result<Self> {
        Self::with_potential(omega, self.a, self.a_star, self.s, self.c0, self.scale)
    }

    pub fn with_scale(&self, scale: Scale) -> Self {
        Self { scale, ..*self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.omega) {
            return Err(Error::InvalidParameter(format!(
                "rotation must satisfy 0 ≤ Ω < 1, got {}",
                self.omega
            )));
        }
        if !(self.a_star > 0.0) {
            return Err(Error::InvalidParameter(format!("a* must be positive, got {}", self.a_star)));
        }
        if !(self.a > 0.0 && self.a < self.a_star) {
            return Err(Error::InvalidParameter(format!(
                "coupling must satisfy 0 < a < a* = {}, got {}",
                self.a_star, self.a
            )));
        }
        if !(self.s > 0.0 && self.c0 > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "need s > 0 and c0 > 0, got s = {}, c0 = {}",
                self.s, self.c0
            )));
        }
        if self.omega != 0.0 && self.s != 2.0 {
            return Err(Error::InvalidParameter(
                "rotation is only supported for the harmonic trap s = 2".into(),
            ));
        }
        Ok(())
    }

    /// `δ = a* − a`.
    pub fn gap(&self) -> f64 {
        self.a_star - self.a
    }

    /// `ε = √(a* − a)`.
    pub fn epsilon(&self) -> f64 {
        self.gap().sqrt()
    }

    /// Blow-up length `ℓ = δ^{1/(s+2)}`; `ℓ² = ε` when `s = 2`.
    pub fn length(&self) -> f64 {
        self.gap().powf(1.0 / (self.s + 2.0))
    }

    pub fn coefficients(&self) -> Coefficients {
        match self.scale {
            Scale::Physical => Coefficients {
                trap: self.c0,
                exponent: self.s,
                rotation: 2.0 * self.omega,
                coupling: self.a,
            },
            Scale::Blowup => Coefficients {
                trap: self.c0 * self.gap(),
                exponent: self.s,
                rotation: 2.0 * self.omega * self.length().powi(2),
                coupling: self.a,
            },
        }
    }

    /// Factor turning an energy in this scale into the physical energy.
    pub fn to_physical(&self) -> f64 {
        match self.scale {
            Scale::Physical => 1.0,
            Scale::Blowup => self.length().powi(-2),
        }
    }
}

/// `(κ, s, ρ, g)` in `∫|∇u|² + κ∫|x|^s|u|² − ρ⟨u,Lu⟩ − (g/2)I(u)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Coefficients {
    pub trap: f64,
    pub exponent: f64,
    pub rotation: f64,
    pub coupling: f64,
}

impl Coefficients {
    /// Trap-free critical functional `∫|∇v|² − (a*/2)∫|v|⁴`, the `ε → 0`
    /// limit of the blow-up functional.
    pub fn critical(a_star: f64) -> Self {
        Self {
            trap: 0.0,
            exponent: 2.0,
            rotation: 0.0,
            coupling: a_star,
        }
    }
}

/// Radial interaction kernel `w` with `∫w = 1`; `w_N(x) = N^{2β}w(N^β x)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelShape {
    /// `w(x) = (2π)⁻¹e^{−|x|²/2}`.
    Gaussian,
    /// `w(x) = (2π)⁻¹e^{−|x|}`.
    Exponential,
}

impl KernelShape {
    /// `ŵ(k) = ∫w(x)e^{−ik·x}dx` as a function of `|k|²`.
    pub fn fourier(&self, k_sq: f64) -> f64 {
        match self {
            KernelShape::Gaussian => (-0.5 * k_sq).exp(),
            KernelShape::Exponential => (1.0 + k_sq).powf(-1.5),
        }
    }

    pub fn value(&self, r: f64) -> f64 {
        match self {
            KernelShape::Gaussian => (-0.5 * r * r).exp() / (2.0 * PI),
            KernelShape::Exponential => (-r).exp() / (2.0 * PI),
        }
    }

    /// `∫|z|w(z)dz`.
    pub fn first_moment(&self) -> f64 {
        match self {
            KernelShape::Gaussian => (PI / 2.0).sqrt(),
            KernelShape::Exponential => 2.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum InteractionSpec {
    Delta,
    Smeared {
        shape: KernelShape,
        beta: f64,
        big_n: f64,
    },
}

impl InteractionSpec {
    pub fn smeared(shape: KernelShape, beta: f64, big_n: f64) -> Result<Self> {
        if !(beta > 0.0 && beta < 0.5) {
            return Err(Error::InvalidParameter(format!("β must lie in (0, 1/2), got {beta}")));
        }
        if !(big_n >= 1.0) {
            return Err(Error::InvalidParameter(format!("N must be ≥ 1, got {big_n}")));
        }
        Ok(InteractionSpec::Smeared { shape, beta, big_n })
    }

    /// Kernel width `N^{−β}` (zero for the contact interaction).
    pub fn width(&self) -> f64 {
        match self {
            InteractionSpec::Delta => 0.0,
            InteractionSpec::Smeared { beta, big_n, .. } => big_n.powf(-beta),
        }
    }

    /// `ŵ_N(k) = ŵ(k·N^{−β})`.
    pub fn fourier(&self, k_sq: f64) -> f64 {
        match self {
            InteractionSpec::Delta => 1.0,
            InteractionSpec::Smeared { shape, .. } => {
                let w = self.width();
                shape.fourier(k_sq * w * w)
            }
        }
    }

    /// `w_N(x)` (not defined for the contact interaction).
    pub fn value(&self, r: f64) -> Option<f64> {
        match self {
            InteractionSpec::Delta => None,
            InteractionSpec::Smeared { shape, .. } => {
                let w = self.width();
                Some(shape.value(r / w) / (w * w))
            }
        }
    }
}

/// Energy components; `total = kinetic + trap − rotation − interaction`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    pub kinetic: f64,
    pub trap: f64,
    /// `ρ⟨u, Lu⟩`, subtracted from the total.
    pub rotation: f64,
    /// `(g/2)·I(u)`, subtracted from the total.
    pub interaction: f64,
    pub total: f64,
    /// Lagrange multiplier `μ = −⟨u, Hu⟩`, so that `Hu + μu = 0` at a
    /// critical point.
    pub mu: f64,
}

impl EnergyBreakdown {
    fn assemble(kinetic: f64, trap: f64, rotation: f64, interaction: f64) -> Self {
        let total = kinetic + trap - rotation - interaction;
        Self {
            kinetic,
            trap,
            rotation,
            interaction,
            total,
            mu: -(total - interaction),
        }
    }

    /// Every component multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            kinetic: self.kinetic * factor,
            trap: self.trap * factor,
            rotation: self.rotation * factor,
            interaction: self.interaction * factor,
            total: self.total * factor,
            mu: self.mu * factor,
        }
    }
}

fn check_normalized(u: &ComplexField) -> Result<()> {
    let deviation = (u.norm_sq() - 1.0).abs();
    if deviation > NORMALIZATION_TOL || !deviation.is_finite() {
        return Err(Error::NotNormalized { deviation });
    }
    Ok(())
}

fn trap_energy(u: &ComplexField, c: &Coefficients) -> f64 {
    if c.trap == 0.0 {
        0.0
    } else {
        c.trap * u.radial_moment(c.exponent)
    }
}

fn rotation_energy(u: &ComplexField, c: &Coefficients) -> f64 {
    if c.rotation == 0.0 {
        0.0
    } else {
        c.rotation * crate::grid::angular_momentum(u)
    }
}

/// `w_N ⋆ |u|²` by Fourier multiplication.
fn smeared_density(u: &ComplexField, w: &InteractionSpec) -> Vec<f64> {
    let grid = u.grid();
    let rho: Vec<Complex64> = u.values().iter().map(|z| Complex64::new(z.norm_sqr(), 0.0)).collect();
    grid.apply_multiplier(&rho, |k1, k2| Complex64::new(w.fourier(k1 * k1 + k2 * k2), 0.0))
        .into_iter()
        .map(|z| z.re)
        .collect()
}

/// Interaction integral `I(u)`.
fn interaction_integral(u: &ComplexField, w: &InteractionSpec) -> f64 {
    match w {
        InteractionSpec::Delta => u.quartic(),
        InteractionSpec::Smeared { .. } => {
            let conv = smeared_density(u, w);
            let samples: Vec<f64> = u.values().iter().zip(&conv).map(|(z, c)| z.norm_sqr() * c).collect();
            u.grid().integrate(&samples)
        }
    }
}

/// Energy without the normalization check; the functional is well defined
/// on any field.
pub fn evaluate(u: &ComplexField, c: &Coefficients, w: &InteractionSpec) -> EnergyBreakdown {
    EnergyBreakdown::assemble(
        gradient_norm_sq(u),
        trap_energy(u, c),
        rotation_energy(u, c),
        0.5 * c.coupling * interaction_integral(u, w),
    )
}

/// `𝓔` with explicit coefficients and contact interaction.
pub fn energy(u: &ComplexField, c: &Coefficients) -> Result<EnergyBreakdown> {
    check_normalized(u)?;
    Ok(evaluate(u, c, &InteractionSpec::Delta))
}

/// Gross–Pitaevskii energy in the scale selected by `p`.
pub fn gp_energy(u: &ComplexField, p: &GpParams) -> Result<EnergyBreakdown> {
    p.validate()?;
    energy(u, &p.coefficients())
}

/// Hartree energy with smeared interaction `w_N`.
pub fn hartree_energy(u: &ComplexField, p: &GpParams, w: &InteractionSpec) -> Result<EnergyBreakdown> {
    p.validate()?;
    check_normalized(u)?;
    Ok(evaluate(u, &p.coefficients(), w))
}

/// `Hu = (−Δ + κ|x|^s − ρL)u − g(w ⋆ |u|²)u` without normalization check.
pub fn apply_hamiltonian(u: &ComplexField, c: &Coefficients, w: &InteractionSpec) -> ComplexField {
    hamiltonian_with_potential(u, c, w).0
}

/// `Hu` together with the mean-field potential `V = w ⋆ |u|²`, so that
/// `I(u) = ∫V|u|²`.
pub(crate) fn hamiltonian_with_potential(
    u: &ComplexField,
    c: &Coefficients,
    w: &InteractionSpec,
) -> (ComplexField, Vec<f64>) {
    let grid = u.grid();
    let values = u.values();
    let mut out = grid.laplacian(values);
    out.iter_mut().for_each(|z| *z = -*z);
    if c.trap != 0.0 {
        for (idx, z) in out.iter_mut().enumerate() {
            let (x1, x2) = grid.point(idx);
            *z += c.trap * radial_power(x1 * x1 + x2 * x2, c.exponent) * values[idx];
        }
    }
    if c.rotation != 0.0 {
        let lu = grid.apply_angular_momentum(values);
        for (z, l) in out.iter_mut().zip(&lu) {
            *z -= c.rotation * l;
        }
    }
    let potential: Vec<f64> = match w {
        InteractionSpec::Delta => values.iter().map(|v| v.norm_sqr()).collect(),
        InteractionSpec::Smeared { .. } => smeared_density(u, w),
    };
    for ((z, v), r) in out.iter_mut().zip(values).zip(&potential) {
        *z -= c.coupling * r * v;
    }
    (ComplexField::new(grid.clone(), out).expect("same grid"), potential)
}

/// Unprojected `L²` gradient `Hu` for the contact interaction. The energy's
/// real derivative in direction `δ` is `2·Re⟨Hu, δ⟩`.
pub fn gradient(u: &ComplexField, c: &Coefficients) -> Result<ComplexField> {
    check_normalized(u)?;
    Ok(apply_hamiltonian(u, c, &InteractionSpec::Delta))
}

pub fn gp_gradient(u: &ComplexField, p: &GpParams) -> Result<ComplexField> {
    p.validate()?;
    gradient(u, &p.coefficients())
}

/// Energy in the form `∫|∇u − iσx^⊥u|² + (κ − σ²)∫|x|²|u|² − (g/2)∫|u|⁴`
/// with `σ = ρ/2`, for the harmonic trap. Independent route to the total.
pub fn energy_magnetic_form(u: &ComplexField, c: &Coefficients) -> f64 {
    let grid = u.grid();
    let sigma = 0.5 * c.rotation;
    let (d1, d2) = grid.partial_derivatives(u.values());
    let samples: Vec<f64> = u
        .values()
        .iter()
        .enumerate()
        .map(|(idx, v)| {
            let (x1, x2) = grid.point(idx);
            // x^⊥ = (−x₂, x₁)
            let c1 = d1[idx] - Complex64::i() * sigma * (-x2) * v;
            let c2 = d2[idx] - Complex64::i() * sigma * x1 * v;
            c1.norm_sqr() + c2.norm_sqr()
        })
        .collect();
    let magnetic = grid.integrate(&samples);
    magnetic + (c.trap - sigma * sigma) * u.radial_moment(2.0) - 0.5 * c.coupling * u.quartic()
}

/// Both sides of the diamagnetic inequality
/// `∫|∇v − iσx^⊥v|² ≥ ∫|∇|v||²`, with `|∇|v|| = |Re(v̄∇v)|/|v|` pointwise.
pub fn diamagnetic_sides(v: &ComplexField, sigma: f64) -> (f64, f64) {
    let grid = v.grid();
    let (d1, d2) = grid.partial_derivatives(v.values());
    let mut lhs = Vec::with_capacity(grid.len());
    let mut rhs = Vec::with_capacity(grid.len());
    for (idx, z) in v.values().iter().enumerate() {
        let (x1, x2) = grid.point(idx);
        let c1 = d1[idx] + Complex64::i() * sigma * x2 * z;
        let c2 = d2[idx] - Complex64::i() * sigma * x1 * z;
        lhs.push(c1.norm_sqr() + c2.norm_sqr());
        let m = z.norm_sqr();
        if m > 0.0 {
            let g1 = (z.conj() * d1[idx]).re;
            let g2 = (z.conj() * d2[idx]).re;
            rhs.push((g1 * g1 + g2 * g2) / m);
        } else {
            rhs.push(0.0);
        }
    }
    (grid.integrate(&lhs), grid.integrate(&rhs))
}

/// Energy of the mixed state `Σ nⱼ|uⱼ⟩⟨uⱼ|`: one-body part is linear in
/// the weights, the interaction uses the mixed density.
pub fn mixed_state_energy(states: &[(f64, &ComplexField)], c: &Coefficients) -> Result<f64> {
    let first = states
        .first()
        .ok_or_else(|| Error::InvalidParameter("need at least one state".into()))?
        .1;
    let grid = first.grid();
    let mut rho = vec![0.0; grid.len()];
    let mut one_body = 0.0;
    for (weight, u) in states {
        if !u.same_grid(first) {
            return Err(Error::GridMismatch);
        }
        let e = evaluate(u, &Coefficients { coupling: 0.0, ..*c }, &InteractionSpec::Delta);
        one_body += weight * e.total;
        for (r, z) in rho.iter_mut().zip(u.values()) {
            *r += weight * z.norm_sqr();
        }
    }
    let rho_sq: Vec<f64> = rho.iter().map(|r| r * r).collect();
    Ok(one_body - 0.5 * c.coupling * grid.integrate(&rho_sq))
}
