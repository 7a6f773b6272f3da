//! Property tests over random Gaussian packets.

use std::sync::{Arc, OnceLock};

use gpcollapse::asymptotics::fit_power_law;
use gpcollapse::functional::{diamagnetic_sides, gp_energy, hartree_energy, GpParams, InteractionSpec, KernelShape};
use gpcollapse::grid::{ComplexField, SpectralGrid};
use gpcollapse::profile::gn::gn_quotient;
use num_complex::Complex64;
use proptest::prelude::*;

const A_STAR: f64 = 11.700896525791975;

fn grid() -> &'static Arc<SpectralGrid> {
    static G: OnceLock<Arc<SpectralGrid>> = OnceLock::new();
    G.get_or_init(|| SpectralGrid::shared(64, 8.0).unwrap())
}

/// Sum of up to three Gaussian packets with plane-wave phases.
fn packets() -> impl Strategy<Value = ComplexField> {
    prop::collection::vec(
        (-1.5..1.5f64, -1.5..1.5f64, 0.6..1.4f64, -1.0..1.0f64, -1.0..1.0f64, 0.2..1.0f64),
        1..=3,
    )
    .prop_map(|ps| {
        ComplexField::from_fn(grid(), |x1, x2| {
            ps.iter()
                .map(|&(c1, c2, w, k1, k2, amp)| {
                    let r2 = (x1 - c1).powi(2) + (x2 - c2).powi(2);
                    amp * (-r2 / (2.0 * w * w)).exp() * Complex64::from_polar(1.0, k1 * x1 + k2 * x2)
                })
                .sum()
        })
        .normalized()
        .unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gn_inequality_holds(u in packets()) {
        prop_assert!(gn_quotient(&u) >= A_STAR * (1.0 - 1e-6));
    }

    #[test]
    fn energy_is_phase_invariant(u in packets(), theta in -3.1..3.1f64, omega in 0.0..0.95f64, gap in 0.01..5.0f64) {
        let p = GpParams::new(omega, A_STAR - gap, A_STAR).unwrap();
        let base = gp_energy(&u, &p).unwrap().total;
        let turned = gp_energy(&u.scaled(Complex64::from_polar(1.0, theta)), &p).unwrap().total;
        prop_assert!((turned - base).abs() <= 1e-12 * (1.0 + base.abs()));
    }

    #[test]
    fn hartree_never_below_contact(u in packets(), beta in 0.05..0.45f64, log_n in 0.0..8.0f64) {
        let p = GpParams::new(0.3, A_STAR - 0.1, A_STAR).unwrap();
        let w = InteractionSpec::smeared(KernelShape::Gaussian, beta, 10f64.powf(log_n)).unwrap();
        let gp = gp_energy(&u, &p).unwrap().total;
        let h = hartree_energy(&u, &p, &w).unwrap().total;
        prop_assert!(h >= gp - 1e-10);
    }

    #[test]
    fn diamagnetic_inequality(u in packets(), sigma in -1.0..1.0f64) {
        let (lhs, rhs) = diamagnetic_sides(&u, sigma);
        prop_assert!(lhs >= rhs - 1e-10);
    }

    #[test]
    fn power_law_fit_recovers_parameters(c in 0.1..10.0f64, k in 0.1..2.0f64, first in 0.1..1.0f64) {
        let x: Vec<f64> = (0..6).map(|i| first * 0.5f64.powi(i)).collect();
        let y: Vec<f64> = x.iter().map(|v| c * v.powf(k)).collect();
        let fit = fit_power_law(&x, &y).unwrap();
        prop_assert!((fit.exponent - k).abs() < 1e-10);
        prop_assert!((fit.constant / c - 1.0).abs() < 1e-10);
    }
}
