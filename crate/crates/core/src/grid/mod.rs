//! Uniform periodic grid on the square `[−L, L)²` with spectral derivative,
//! quadrature and angular-momentum operators.
//!
//! Samples are stored row-major: index `j * n + i` holds the point
//! `(x₁, x₂) = (−L + i·h, −L + j·h)`, so `x₁` is the fast axis.

mod field;
pub mod io;
pub mod random;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

pub use field::ComplexField;
pub(crate) use field::radial_power;

/// Fraction of the half-width that delimits the outer annulus used by the
/// box-truncation diagnostic.
pub const OUTER_ANNULUS_FRACTION: f64 = 0.9;

/// Largest mass tolerated in the outer annulus before a field is flagged as
/// feeling the box.
pub const ANNULUS_MASS_LIMIT: f64 = 1e-10;

#[derive(Clone)]
pub struct SpectralGrid {
    n: usize,
    extent: f64,
    spacing: f64,
    coords: Vec<f64>,
    wavenumbers: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for SpectralGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralGrid")
            .field("n", &self.n)
            .field("extent", &self.extent)
            .field("spacing", &self.spacing)
            .finish()
    }
}

impl PartialEq for SpectralGrid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.extent == other.extent
    }
}

impl SpectralGrid {
    /// Builds an `n × n` grid on `[−extent, extent)²`.
    pub fn new(n: usize, extent: f64) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "n must be a power of two ≥ 8, got {n}"
            )));
        }
        if !(extent.is_finite() && extent > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "extent must be positive, got {extent}"
            )));
        }
        let spacing = 2.0 * extent / n as f64;
        let coords = (0..n).map(|i| -extent + i as f64 * spacing).collect();
        let wavenumbers = (0..n)
            .map(|j| std::f64::consts::PI * signed_index(j, n) as f64 / extent)
            .collect();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        Ok(Self {
            n,
            extent,
            spacing,
            coords,
            wavenumbers,
            forward,
            inverse,
        })
    }

    /// Same as [`SpectralGrid::new`] but wrapped for sharing between fields.
    pub fn shared(n: usize, extent: f64) -> Result<Arc<Self>> {
        Self::new(n, extent).map(Arc::new)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn cell_area(&self) -> f64 {
        self.spacing * self.spacing
    }

    /// Total number of grid points, `n²`.
    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Box coordinates along one axis.
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Per-axis wavenumbers `π·j'/L`, in FFT order.
    pub fn wavenumbers(&self) -> &[f64] {
        &self.wavenumbers
    }

    pub fn nyquist_index(&self) -> usize {
        self.n / 2
    }

    /// Position of the flat index `idx`.
    #[inline]
    pub fn point(&self, idx: usize) -> (f64, f64) {
        (self.coords[idx % self.n], self.coords[idx / self.n])
    }

    /// Iterator over `(x₁, x₂)` in storage order.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..self.len()).map(move |idx| self.point(idx))
    }

    /// Quadrature `Σ f·h²`, spectrally accurate for smooth periodic or decayed samples.
    pub fn integrate(&self, samples: &[f64]) -> f64 {
        debug_assert_eq!(samples.len(), self.len());
        samples.iter().sum::<f64>() * self.cell_area()
    }

    /// In-place unnormalized forward 2D transform.
    pub fn fft2(&self, data: &mut [Complex64]) {
        self.transform(data, &self.forward);
    }

    /// In-place inverse 2D transform including the `1/n²` factor.
    pub fn ifft2(&self, data: &mut [Complex64]) {
        self.transform(data, &self.inverse);
        let scale = 1.0 / self.len() as f64;
        data.iter_mut().for_each(|z| *z *= scale);
    }

    fn transform(&self, data: &mut [Complex64], plan: &Arc<dyn Fft<f64>>) {
        assert_eq!(data.len(), self.len(), "buffer does not match grid");
        let mut scratch = vec![Complex64::default(); plan.get_inplace_scratch_len()];
        plan.process_with_scratch(data, &mut scratch);
        transpose_square(data, self.n);
        plan.process_with_scratch(data, &mut scratch);
        transpose_square(data, self.n);
    }

    /// Forward transform of a copy of `values`.
    pub fn spectrum(&self, values: &[Complex64]) -> Vec<Complex64> {
        let mut out = values.to_vec();
        self.fft2(&mut out);
        out
    }

    /// `∫|u|²` evaluated on the Fourier side.
    pub fn fourier_norm_sq(&self, values: &[Complex64]) -> f64 {
        let spec = self.spectrum(values);
        spec.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.cell_area() / self.len() as f64
    }

    /// Applies the Fourier multiplier `m(k₁, k₂)` to `values`.
    pub fn apply_multiplier<F>(&self, values: &[Complex64], multiplier: F) -> Vec<Complex64>
    where
        F: Fn(f64, f64) -> Complex64,
    {
        let mut spec = self.spectrum(values);
        let n = self.n;
        for (idx, z) in spec.iter_mut().enumerate() {
            *z *= multiplier(self.wavenumbers[idx % n], self.wavenumbers[idx / n]);
        }
        self.ifft2(&mut spec);
        spec
    }

    /// First-derivative multiplier `i·k`, zero at the Nyquist index.
    fn derivative_symbol(&self, j: usize) -> Complex64 {
        if j == self.nyquist_index() {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(0.0, self.wavenumbers[j])
        }
    }

    /// Spectral partial derivatives `(∂₁u, ∂₂u)`.
    pub fn partial_derivatives(&self, values: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
        let n = self.n;
        let spec = self.spectrum(values);
        let mut d1 = spec.clone();
        let mut d2 = spec;
        for idx in 0..self.len() {
            d1[idx] *= self.derivative_symbol(idx % n);
            d2[idx] *= self.derivative_symbol(idx / n);
        }
        self.ifft2(&mut d1);
        self.ifft2(&mut d2);
        (d1, d2)
    }

    /// Spectral Laplacian `Δu` with multiplier `−|k|²`.
    pub fn laplacian(&self, values: &[Complex64]) -> Vec<Complex64> {
        self.apply_multiplier(values, |k1, k2| Complex64::new(-(k1 * k1 + k2 * k2), 0.0))
    }

    /// `L u = i(x₂∂₁u − x₁∂₂u)`.
    pub fn apply_angular_momentum(&self, values: &[Complex64]) -> Vec<Complex64> {
        let (d1, d2) = self.partial_derivatives(values);
        (0..self.len())
            .map(|idx| {
                let (x1, x2) = self.point(idx);
                Complex64::i() * (x2 * d1[idx] - x1 * d2[idx])
            })
            .collect()
    }

    /// Mass carried by points with `max(|x₁|, |x₂|) > 0.9·L`.
    pub fn outer_annulus_mass(&self, values: &[Complex64]) -> f64 {
        let cut = OUTER_ANNULUS_FRACTION * self.extent;
        let sum: f64 = values
            .iter()
            .enumerate()
            .filter(|(idx, _)| {
                let (x1, x2) = self.point(*idx);
                x1.abs().max(x2.abs()) > cut
            })
            .map(|(_, z)| z.norm_sqr())
            .sum();
        sum * self.cell_area()
    }

    /// Evaluates the trigonometric interpolant of `values` on the tensor grid
    /// `xs × ys`. Points outside the box evaluate to zero.
    pub fn interpolate_tensor(&self, values: &[Complex64], xs: &[f64], ys: &[f64]) -> Vec<Complex64> {
        let n = self.n;
        let mut coeff = self.spectrum(values);
        let norm = 1.0 / self.len() as f64;
        coeff.iter_mut().for_each(|z| *z *= norm);

        let basis = |targets: &[f64]| -> Vec<Vec<Complex64>> {
            targets
                .iter()
                .map(|&x| {
                    let inside = x >= -self.extent && x < self.extent;
                    let shift = x + self.extent;
                    (0..n)
                        .map(|j| {
                            if !inside {
                                Complex64::new(0.0, 0.0)
                            } else if j == self.nyquist_index() {
                                // split the Nyquist mode symmetrically
                                Complex64::new((self.wavenumbers[j] * shift).cos(), 0.0)
                            } else {
                                Complex64::from_polar(1.0, self.wavenumbers[j] * shift)
                            }
                        })
                        .collect()
                })
                .collect()
        };
        let bx = basis(xs);
        let by = basis(ys);

        // contract along x₁ first: partial[ky][a]
        let mut partial = vec![Complex64::default(); n * xs.len()];
        for ky in 0..n {
            let row = &coeff[ky * n..(ky + 1) * n];
            for (a, phases) in bx.iter().enumerate() {
                partial[ky * xs.len() + a] = row.iter().zip(phases).map(|(c, p)| c * p).sum();
            }
        }
        let mut out = vec![Complex64::default(); xs.len() * ys.len()];
        for (b, phases) in by.iter().enumerate() {
            for a in 0..xs.len() {
                let mut acc = Complex64::default();
                for (ky, p) in phases.iter().enumerate() {
                    acc += partial[ky * xs.len() + a] * p;
                }
                out[b * xs.len() + a] = acc;
            }
        }
        out
    }
}

fn signed_index(j: usize, n: usize) -> i64 {
    if j < n / 2 {
        j as i64
    } else {
        j as i64 - n as i64
    }
}

fn transpose_square(data: &mut [Complex64], n: usize) {
    for j in 0..n {
        for i in (j + 1)..n {
            data.swap(j * n + i, i * n + j);
        }
    }
}

/// `∫|∇u|²` through the multiplier `|k|²`.
pub fn gradient_norm_sq(u: &ComplexField) -> f64 {
    let grid = u.grid();
    let n = grid.n();
    let k = grid.wavenumbers();
    let spec = grid.spectrum(u.values());
    let sum: f64 = spec
        .iter()
        .enumerate()
        .map(|(idx, z)| {
            let (k1, k2) = (k[idx % n], k[idx / n]);
            (k1 * k1 + k2 * k2) * z.norm_sqr()
        })
        .sum();
    sum * grid.cell_area() / grid.len() as f64
}

/// Expectation `⟨u, L u⟩` of the angular momentum (real part).
pub fn angular_momentum(u: &ComplexField) -> f64 {
    let lu = u.grid().apply_angular_momentum(u.values());
    u.inner_values(&lu).re
}

/// `v(x) = √ε·u(√ε·x)` resampled on `target` by Fourier interpolation.
pub fn rescale_to_blowup_on(
    u: &ComplexField,
    epsilon: f64,
    target: &Arc<SpectralGrid>,
) -> Result<ComplexField> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "blow-up scale must be positive, got {epsilon}"
        )));
    }
    let root = epsilon.sqrt();
    let xs: Vec<f64> = target.coords().iter().map(|x| root * x).collect();
    let mut values = u.grid().interpolate_tensor(u.values(), &xs, &xs);
    values.iter_mut().for_each(|z| *z *= root);
    ComplexField::new(Arc::clone(target), values)
}

/// Rescales onto a grid with the same `n` and extent `L/√ε`, which keeps the
/// same physical window.
pub fn rescale_to_blowup(u: &ComplexField, epsilon: f64) -> Result<ComplexField> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "blow-up scale must be positive, got {epsilon}"
        )));
    }
    let grid = u.grid();
    let target = SpectralGrid::shared(grid.n(), grid.extent() / epsilon.sqrt())?;
    rescale_to_blowup_on(u, epsilon, &target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn gaussian(grid: &Arc<SpectralGrid>) -> ComplexField {
        ComplexField::from_fn(grid, |x1, x2| {
            Complex64::new((-(x1 * x1 + x2 * x2) / 2.0).exp() / PI.sqrt(), 0.0)
        })
    }

    fn vortex(grid: &Arc<SpectralGrid>) -> ComplexField {
        ComplexField::from_fn(grid, |x1, x2| {
            Complex64::new(x1, x2) * (-(x1 * x1 + x2 * x2) / 2.0).exp() / PI.sqrt()
        })
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(SpectralGrid::new(4, 1.0).is_err());
        assert!(SpectralGrid::new(96, 1.0).is_err());
        assert!(SpectralGrid::new(64, 0.0).is_err());
        assert!(SpectralGrid::new(64, -2.0).is_err());
    }

    #[test]
    fn geometry_is_consistent() {
        let g = SpectralGrid::new(64, 3.0).unwrap();
        assert!((g.spacing() * 64.0 - 6.0).abs() < 1e-14);
        assert_eq!(g.coords()[32], 0.0);
        let k = g.wavenumbers();
        for j in 1..32 {
            assert_eq!(k[j], -k[64 - j]);
        }
        assert!(k[32] < 0.0);
    }

    #[test]
    fn constant_integrates_to_box_area() {
        for n in [8, 32, 128] {
            let g = SpectralGrid::new(n, 4.0).unwrap();
            let ones = vec![1.0; g.len()];
            assert!((g.integrate(&ones) - 64.0).abs() < 1e-12);
        }
    }

    #[test]
    fn gaussian_mass_and_kinetic_energy() {
        let g = SpectralGrid::shared(128, 8.0).unwrap();
        let u = gaussian(&g);
        assert!((u.norm_sq() - 1.0).abs() < 1e-10);
        assert!((gradient_norm_sq(&u) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn odd_samples_integrate_to_zero() {
        let g = SpectralGrid::new(128, 8.0).unwrap();
        let s: Vec<f64> = g.points().map(|(x1, x2)| x1 * (-(x1 * x1 + x2 * x2)).exp()).collect();
        assert!(g.integrate(&s).abs() < 1e-12);
    }

    #[test]
    fn plane_wave_kinetic_energy() {
        let g = SpectralGrid::shared(32, 2.0).unwrap();
        let k1 = g.wavenumbers()[3];
        let amp = 0.7;
        let u = ComplexField::from_fn(&g, |x1, _| Complex64::from_polar(amp, k1 * x1));
        let expected = k1 * k1 * 16.0 * amp * amp;
        assert!((gradient_norm_sq(&u) - expected).abs() < 1e-10 * expected);
        let constant = ComplexField::from_fn(&g, |_, _| Complex64::new(0.3, -0.1));
        assert!(gradient_norm_sq(&constant).abs() < 1e-20);
    }

    #[test]
    fn plane_wave_derivative_is_exact() {
        let g = SpectralGrid::shared(32, 2.0).unwrap();
        let k1 = g.wavenumbers()[5];
        let k2 = g.wavenumbers()[30];
        let u = ComplexField::from_fn(&g, |x1, x2| Complex64::from_polar(1.0, k1 * x1 + k2 * x2));
        let (d1, d2) = g.partial_derivatives(u.values());
        for (idx, z) in u.values().iter().enumerate() {
            assert!((d1[idx] - Complex64::i() * k1 * z).norm() < 1e-12);
            assert!((d2[idx] - Complex64::i() * k2 * z).norm() < 1e-12);
        }
    }

    #[test]
    fn angular_momentum_of_oscillator_states() {
        let g = SpectralGrid::shared(128, 10.0).unwrap();
        let real = gaussian(&g);
        assert!(angular_momentum(&real).abs() < 1e-10);
        let v = vortex(&g);
        assert!((angular_momentum(&v) - 1.0).abs() < 1e-8);
        assert!((angular_momentum(&v.conj()) + 1.0).abs() < 1e-8);
    }

    #[test]
    fn rescale_identity_and_gaussian() {
        let g = SpectralGrid::shared(128, 8.0).unwrap();
        let u = gaussian(&g);
        let same = rescale_to_blowup_on(&u, 1.0, &g).unwrap();
        for (a, b) in same.values().iter().zip(u.values()) {
            assert!((a - b).norm() < 1e-10);
        }

        let v = rescale_to_blowup_on(&u, 4.0, &g).unwrap();
        for (idx, z) in v.values().iter().enumerate() {
            let (x1, x2) = g.point(idx);
            let exact = 2.0 / PI.sqrt() * (-2.0 * (x1 * x1 + x2 * x2)).exp();
            assert!((z.re - exact).abs() < 1e-8 && z.im.abs() < 1e-8);
        }
    }

    #[test]
    fn rescale_rejects_non_positive_scale() {
        let g = SpectralGrid::shared(16, 4.0).unwrap();
        let u = gaussian(&g);
        assert!(rescale_to_blowup(&u, 0.0).is_err());
        assert!(rescale_to_blowup(&u, -1.0).is_err());
    }

    #[test]
    fn outer_annulus_detects_wide_fields() {
        let g = SpectralGrid::shared(64, 8.0).unwrap();
        let narrow = gaussian(&g);
        assert!(g.outer_annulus_mass(narrow.values()) < 1e-10);
        let wide = ComplexField::from_fn(&g, |x1, x2| {
            Complex64::new((-(x1 * x1 + x2 * x2) / 50.0).exp(), 0.0)
        });
        assert!(g.outer_annulus_mass(wide.values()) > 1e-3);
    }
}
