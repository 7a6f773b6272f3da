//! The Gagliardo–Nirenberg quotient on the grid and its direct
//! minimization, an estimate of `a*` that never touches the radial ODE.
//!
//! `J(u) = 2‖∇u‖²‖u‖²/‖u‖⁴_{L⁴}` satisfies `J ≥ a*` with equality exactly on
//! `Q_{λ,X}` up to phase.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::grid::random::{random_smooth_field, RandomFieldSpec};
use crate::grid::{gradient_norm_sq, ComplexField, SpectralGrid};

pub fn gn_quotient(u: &ComplexField) -> f64 {
    2.0 * gradient_norm_sq(u) * u.norm_sq() / u.quartic()
}

/// `J(u)/a* − 1`, nonnegative when the inequality holds.
pub fn gn_margin(u: &ComplexField, a_star: f64) -> f64 {
    gn_quotient(u) / a_star - 1.0
}

#[derive(Clone, Debug)]
pub struct QuotientSearch {
    pub n: usize,
    pub extent: f64,
    pub max_iters: usize,
    /// Stop once `‖r‖/‖∇u‖²` falls below this, `r` the Euler–Lagrange residual.
    pub tol: f64,
}

impl Default for QuotientSearch {
    fn default() -> Self {
        Self {
            n: 128,
            extent: 12.0,
            max_iters: 500,
            tol: 1e-5,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuotientMinimum {
    pub quotient: f64,
    pub residual: f64,
    pub iters: usize,
}

struct Point {
    u: ComplexField,
    quotient: f64,
    kinetic: f64,
    residual: ComplexField,
}

impl QuotientSearch {
    pub fn grid(&self) -> Result<Arc<SpectralGrid>> {
        SpectralGrid::shared(self.n, self.extent)
    }

    fn point(&self, u: ComplexField) -> Point {
        let grid = u.grid().clone();
        let kinetic = gradient_norm_sq(&u);
        let quartic = u.quartic();
        let lap = grid.laplacian(u.values());
        // for ‖u‖ = 1: r = −Δu + Ku − (2K/P)|u|²u, the gradient of ln J times K/2
        let values = lap
            .iter()
            .zip(u.values())
            .map(|(l, z)| -l + kinetic * z - 2.0 * kinetic / quartic * z.norm_sqr() * z)
            .collect();
        Point {
            quotient: 2.0 * kinetic / quartic,
            kinetic,
            residual: ComplexField::new(grid, values).expect("same grid"),
            u,
        }
    }

    /// Preconditioned descent on the unit sphere, where `J` reduces to
    /// `2‖∇u‖²/‖u‖⁴_{L⁴}`.
    pub fn minimize(&self, start: ComplexField) -> Result<QuotientMinimum> {
        let grid = start.grid().clone();
        let mut x = self.point(start.normalized()?);
        let mut step = 1.0;
        let mut previous: Option<(ComplexField, ComplexField)> = None;
        let mut iters = 0;
        let direction = |p: &Point| {
            let shift = p.kinetic;
            let values = grid.apply_multiplier(p.residual.values(), |k1, k2| {
                Complex64::new(1.0 / (k1 * k1 + k2 * k2 + shift), 0.0)
            });
            let d = ComplexField::new(grid.clone(), values).expect("same grid");
            let along = p.u.inner(&d).expect("same grid").re;
            d.offset(&p.u, -along).expect("same grid")
        };
        let mut d = direction(&x);
        while iters < self.max_iters && x.residual.norm() / x.kinetic > self.tol {
            if let Some((u_prev, d_prev)) = &previous {
                let s = x.u.offset(u_prev, -1.0)?;
                let y = d.offset(d_prev, -1.0)?;
                let sy = s.inner(&y)?.re;
                if sy > 0.0 {
                    step = (s.norm_sq() / sy).clamp(1e-6, 1e4);
                }
            }
            // d ln J along −d is −(4/K)Re⟨r, d⟩
            let slope = 4.0 / x.kinetic * x.residual.inner(&d)?.re;
            let mut tau = step;
            let mut next = None;
            for _ in 0..40 {
                let trial = self.point(x.u.offset(&d, -tau)?.normalized()?);
                if trial.quotient.ln() <= x.quotient.ln() - 1e-4 * tau * slope {
                    next = Some(trial);
                    break;
                }
                tau *= 0.5;
            }
            let Some(next) = next else { break };
            previous = Some((x.u.clone(), d.clone()));
            x = next;
            d = direction(&x);
            step = tau;
            iters += 1;
        }
        Ok(QuotientMinimum {
            quotient: x.quotient,
            residual: x.residual.norm() / x.kinetic,
            iters,
        })
    }

    /// Random start: a centred Gaussian of width in `[0.7, 1.5]` plus a
    /// smaller random packet field.
    pub fn random_start<R: Rng>(&self, grid: &Arc<SpectralGrid>, rng: &mut R) -> ComplexField {
        let width: f64 = rng.random_range(0.7..=1.5);
        let weight: f64 = rng.random_range(0.05..=0.3);
        let noise = random_smooth_field(grid, rng, &RandomFieldSpec::default().scaled(width));
        let values = grid
            .points()
            .zip(noise.values())
            .map(|((x1, x2), z)| {
                let g = (-(x1 * x1 + x2 * x2) / (2.0 * width * width)).exp() / (std::f64::consts::PI.sqrt() * width);
                Complex64::new(g, 0.0) + weight * z
            })
            .collect();
        ComplexField::new(grid.clone(), values).expect("same grid")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossCheck {
    pub minima: Vec<QuotientMinimum>,
    /// Smallest quotient reached, the estimate of `a*`.
    pub best: f64,
}

/// Minimizes `J` from `starts` seeded random starts in parallel.
pub fn cross_check(search: &QuotientSearch, seed: u64, starts: usize) -> Result<CrossCheck> {
    let grid = search.grid()?;
    let minima = (0..starts)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(k as u64));
            search.minimize(search.random_start(&grid, &mut rng))
        })
        .collect::<Result<Vec<_>>>()?;
    let best = minima.iter().map(|m| m.quotient).fold(f64::INFINITY, f64::min);
    Ok(CrossCheck { minima, best })
}
