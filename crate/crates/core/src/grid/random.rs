//! Seeded random test fields.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{ComplexField, SpectralGrid};

/// Superposition of Gaussian wave packets with random centres, widths,
/// carriers and complex amplitudes.
#[derive(Clone, Debug)]
pub struct RandomFieldSpec {
    pub packets: usize,
    /// Centres are drawn uniformly from `[−spread, spread]²`.
    pub center_spread: f64,
    pub min_width: f64,
    pub max_width: f64,
    /// Carrier wave vectors are drawn from `[−k, k]²`.
    pub max_carrier: f64,
}

impl Default for RandomFieldSpec {
    fn default() -> Self {
        Self {
            packets: 3,
            center_spread: 1.0,
            min_width: 0.6,
            max_width: 1.6,
            max_carrier: 1.5,
        }
    }
}

impl RandomFieldSpec {
    /// Same packet statistics with every length multiplied by `scale`.
    pub fn scaled(&self, scale: f64) -> Self {
        Self {
            packets: self.packets,
            center_spread: self.center_spread * scale,
            min_width: self.min_width * scale,
            max_width: self.max_width * scale,
            max_carrier: self.max_carrier / scale,
        }
    }
}

struct Packet {
    amp: Complex64,
    center: (f64, f64),
    inv_width_sq: f64,
    carrier: (f64, f64),
}

/// Normalized smooth field drawn from `spec`.
pub fn random_smooth_field<R: Rng + ?Sized>(
    grid: &Arc<SpectralGrid>,
    rng: &mut R,
    spec: &RandomFieldSpec,
) -> ComplexField {
    let packets: Vec<Packet> = (0..spec.packets.max(1))
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            let width = rng.random_range(spec.min_width..=spec.max_width);
            Packet {
                amp: Complex64::new(re, im),
                center: (
                    rng.random_range(-spec.center_spread..=spec.center_spread),
                    rng.random_range(-spec.center_spread..=spec.center_spread),
                ),
                inv_width_sq: 1.0 / (width * width),
                carrier: (
                    rng.random_range(-spec.max_carrier..=spec.max_carrier),
                    rng.random_range(-spec.max_carrier..=spec.max_carrier),
                ),
            }
        })
        .collect();
    let field = ComplexField::from_fn(grid, |x1, x2| {
        packets
            .iter()
            .map(|p| {
                let (d1, d2) = (x1 - p.center.0, x2 - p.center.1);
                let envelope = (-0.5 * (d1 * d1 + d2 * d2) * p.inv_width_sq).exp();
                p.amp * Complex64::from_polar(envelope, p.carrier.0 * x1 + p.carrier.1 * x2)
            })
            .sum()
    });
    field
        .normalized()
        .expect("random packets have positive norm")
}

/// Normalized field whose Fourier coefficients are i.i.d. complex normal for
/// `|k| ≤ k_max` and zero elsewhere, multiplied by the window
/// `e^{−|x|²/(2w²)}` with `w = L/7` so that it decays to about `1e−11` at
/// the box edge and behaves as a function on the plane, not the torus.
pub fn random_band_limited_field<R: Rng + ?Sized>(
    grid: &Arc<SpectralGrid>,
    rng: &mut R,
    k_max: f64,
) -> ComplexField {
    let n = grid.n();
    let k = grid.wavenumbers();
    let mut spec: Vec<Complex64> = (0..grid.len())
        .map(|idx| {
            let (k1, k2) = (k[idx % n], k[idx / n]);
            if k1 * k1 + k2 * k2 <= k_max * k_max {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                Complex64::new(re, im)
            } else {
                Complex64::default()
            }
        })
        .collect();
    // keep at least the zero mode so the field never vanishes
    if spec[0].norm() == 0.0 {
        spec[0] = Complex64::new(1.0, 0.0);
    }
    grid.ifft2(&mut spec);
    let w = grid.extent() / 7.0;
    for (idx, z) in spec.iter_mut().enumerate() {
        let (x1, x2) = grid.point(idx);
        *z *= (-(x1 * x1 + x2 * x2) / (2.0 * w * w)).exp();
    }
    ComplexField::new(Arc::clone(grid), spec)
        .expect("length matches grid")
        .normalized()
        .expect("band-limited field has positive norm")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fields_are_normalized_and_seeded() {
        let g = SpectralGrid::shared(32, 6.0).unwrap();
        let mut a = ChaCha8Rng::seed_from_u64(11);
        let mut b = ChaCha8Rng::seed_from_u64(11);
        let fa = random_smooth_field(&g, &mut a, &RandomFieldSpec::default());
        let fb = random_smooth_field(&g, &mut b, &RandomFieldSpec::default());
        assert_eq!(fa.values(), fb.values());
        assert!((fa.norm_sq() - 1.0).abs() < 1e-12);
        let bl = random_band_limited_field(&g, &mut a, 3.0);
        assert!((bl.norm_sq() - 1.0).abs() < 1e-12);
    }
}
