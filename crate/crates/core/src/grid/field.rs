use std::sync::Arc;

use num_complex::Complex64;

use super::SpectralGrid;
use crate::error::{Error, Result};

/// Complex amplitude sampled on a [`SpectralGrid`].
#[derive(Clone, Debug)]
pub struct ComplexField {
    grid: Arc<SpectralGrid>,
    values: Vec<Complex64>,
}

impl ComplexField {
    pub fn new(grid: Arc<SpectralGrid>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "expected {} samples, got {}",
                grid.len(),
                values.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: &Arc<SpectralGrid>) -> Self {
        Self {
            grid: Arc::clone(grid),
            values: vec![Complex64::default(); grid.len()],
        }
    }

    /// Samples `f(x₁, x₂)` at every grid point.
    pub fn from_fn<F>(grid: &Arc<SpectralGrid>, f: F) -> Self
    where
        F: Fn(f64, f64) -> Complex64,
    {
        let values = grid.points().map(|(x1, x2)| f(x1, x2)).collect();
        Self {
            grid: Arc::clone(grid),
            values,
        }
    }

    pub fn grid(&self) -> &Arc<SpectralGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn same_grid(&self, other: &ComplexField) -> bool {
        Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid
    }

    /// Pointwise `|u|²`.
    pub fn density(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.norm_sqr()).collect()
    }

    /// `‖u‖²_{L²}`.
    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.cell_area()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Scales to unit `L²` norm.
    pub fn normalize(&mut self) -> Result<()> {
        let norm = self.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::Numerical(format!("cannot normalize a field of norm {norm}")));
        }
        let inv = 1.0 / norm;
        self.values.iter_mut().for_each(|z| *z *= inv);
        Ok(())
    }

    pub fn normalized(mut self) -> Result<Self> {
        self.normalize()?;
        Ok(self)
    }

    /// `⟨self, other⟩ = ∫ conj(self)·other`.
    pub fn inner(&self, other: &ComplexField) -> Result<Complex64> {
        if !self.same_grid(other) {
            return Err(Error::GridMismatch);
        }
        Ok(self.inner_values(&other.values))
    }

    pub(crate) fn inner_values(&self, other: &[Complex64]) -> Complex64 {
        let sum: Complex64 = self
            .values
            .iter()
            .zip(other)
            .map(|(a, b)| a.conj() * b)
            .sum();
        sum * self.grid.cell_area()
    }

    /// `‖self − other‖_{L²}`.
    pub fn distance(&self, other: &ComplexField) -> Result<f64> {
        if !self.same_grid(other) {
            return Err(Error::GridMismatch);
        }
        let sum: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        Ok((sum * self.grid.cell_area()).sqrt())
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            grid: Arc::clone(&self.grid),
            values: self.values.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            grid: Arc::clone(&self.grid),
            values: self.values.iter().map(|z| z.conj()).collect(),
        }
    }

    /// `self + t·direction`.
    pub fn offset(&self, direction: &ComplexField, t: f64) -> Result<Self> {
        if !self.same_grid(direction) {
            return Err(Error::GridMismatch);
        }
        Ok(Self {
            grid: Arc::clone(&self.grid),
            values: self
                .values
                .iter()
                .zip(&direction.values)
                .map(|(a, b)| a + b * t)
                .collect(),
        })
    }

    /// `∫|x|^s |u|²` in box coordinates.
    pub fn radial_moment(&self, s: f64) -> f64 {
        let g = &self.grid;
        let samples: Vec<f64> = self
            .values
            .iter()
            .enumerate()
            .map(|(idx, z)| {
                let (x1, x2) = g.point(idx);
                radial_power(x1 * x1 + x2 * x2, s) * z.norm_sqr()
            })
            .collect();
        g.integrate(&samples)
    }

    /// Centre of mass `∫x|u|²`.
    pub fn first_moment(&self) -> [f64; 2] {
        let g = &self.grid;
        let mut m = [0.0; 2];
        for (idx, z) in self.values.iter().enumerate() {
            let (x1, x2) = g.point(idx);
            let rho = z.norm_sqr();
            m[0] += x1 * rho;
            m[1] += x2 * rho;
        }
        [m[0] * g.cell_area(), m[1] * g.cell_area()]
    }

    /// `‖u‖_{Lᵖ}` by grid quadrature of `|u|ᵖ`.
    pub fn lp_norm(&self, p: f64) -> f64 {
        let samples: Vec<f64> = self.values.iter().map(|z| z.norm().powf(p)).collect();
        self.grid.integrate(&samples).powf(1.0 / p)
    }

    /// `∫|u|⁴`.
    pub fn quartic(&self) -> f64 {
        let samples: Vec<f64> = self.values.iter().map(|z| z.norm_sqr().powi(2)).collect();
        self.grid.integrate(&samples)
    }

    /// Mass of `|u|²` inside the disc of radius `r` about the origin, from
    /// the exact disc transform `∫_{|x|<r} e^{ik·x} = 2πr·J₁(|k|r)/|k|`
    /// applied to the Fourier series of the density.
    pub fn disc_mass(&self, r: f64) -> f64 {
        self.disc_mass_from(&self.density_spectrum(), r)
    }

    /// Radius of the disc about the origin holding `fraction` of the mass.
    pub fn mass_radius(&self, fraction: f64) -> f64 {
        let spectrum = self.density_spectrum();
        let target = fraction * self.norm_sq();
        let (mut lo, mut hi) = (0.0, self.grid.extent());
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if self.disc_mass_from(&spectrum, mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    fn density_spectrum(&self) -> Vec<Complex64> {
        let rho: Vec<Complex64> = self.values.iter().map(|z| Complex64::new(z.norm_sqr(), 0.0)).collect();
        self.grid.spectrum(&rho)
    }

    fn disc_mass_from(&self, spectrum: &[Complex64], r: f64) -> f64 {
        let g = &self.grid;
        let n = g.n();
        let k = g.wavenumbers();
        let area = 4.0 * g.extent() * g.extent();
        let mut total = 0.0;
        for j in 0..n {
            for i in 0..n {
                let kk = k[i].hypot(k[j]);
                let disc = if kk == 0.0 {
                    std::f64::consts::PI * r * r
                } else {
                    2.0 * std::f64::consts::PI * r * libm::j1(kk * r) / kk
                };
                // the grid starts at −L, which shifts mode m by (−1)^m; the
                // disc is symmetric, so only the real part survives
                let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                total += sign * spectrum[j * n + i].re * disc;
            }
        }
        total * g.cell_area() / area
    }
}

#[inline]
pub(crate) fn radial_power(r_sq: f64, s: f64) -> f64 {
    if s == 2.0 {
        r_sq
    } else if s == 4.0 {
        r_sq * r_sq
    } else {
        r_sq.powf(0.5 * s)
    }
}
