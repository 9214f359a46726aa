use proptest::prelude::*;
use uncertainty_core::centralfield::{
    bound_threshold_negative_root, bound_threshold_radius, buckingham_bound, threshold_residual, virial_report,
    BuckinghamPotential, PowerLawPotential,
};
use uncertainty_core::quad::Quadrature;
use uncertainty_core::states::{HydrogenGroundState, SlaterState};
use uncertainty_core::PhysicalConstants;

/// `⟨r^k⟩` of the normalized Slater density `r^{2n} e^{−2ζr}`.
fn slater_moment(n: u32, zeta: f64, k: i32) -> f64 {
    let m = 2 * n as i32;
    let mut v = 1.0;
    if k >= 0 {
        for j in 1..=k {
            v *= (m + j) as f64;
        }
        v / (2.0 * zeta).powi(k)
    } else {
        for j in 0..-k {
            v /= (m - j) as f64;
        }
        v * (2.0 * zeta).powi(-k)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn threshold_root_is_positive_and_solves(lm in -8.0f64..8.0, lb in -8.0f64..8.0) {
        let (m2, b) = (10f64.powf(lm), 10f64.powf(lb));
        let r = bound_threshold_radius(m2, b).unwrap();
        prop_assert!(r > 0.0);
        prop_assert!(threshold_residual(r, m2, b).abs() <= 1e-12 * b * m2, "r={r} residual={}", threshold_residual(r, m2, b));
        prop_assert!(bound_threshold_negative_root(m2, b).unwrap() < 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn buckingham_mean_below_bound(
        n in 3u32..7, zeta in 0.5f64..3.0,
        gamma in 0.1f64..10.0, r0 in 0.1f64..3.0, sigma in 0.1f64..2.0,
    ) {
        let s = SlaterState::new(n, zeta, PhysicalConstants::natural()).unwrap();
        let v = BuckinghamPotential::new(gamma, r0, sigma).unwrap();
        let rep = buckingham_bound(&s, &v, &Quadrature::default()).unwrap();
        let actual = rep.actual.value.unwrap();
        prop_assert!(actual <= rep.bound + 1e-10 * rep.bound.abs());
        prop_assert!(rep.consistent);
        let gap = gamma * sigma.powi(6) * (slater_moment(n, zeta, -6) - 1.0 / slater_moment(n, zeta, 6));
        prop_assert!(gap >= 0.0);
        prop_assert!((rep.gap.unwrap() - gap).abs() <= 1e-8 * gap.max(1e-300), "{} vs {gap}", rep.gap.unwrap());
    }

    #[test]
    fn hydrogen_virial(lh in -1.0f64..1.0, lm in -1.0f64..1.0, la in -1.0f64..1.0) {
        let (hbar, mass, a0) = (10f64.powf(lh), 10f64.powf(lm), 10f64.powf(la));
        let c = PhysicalConstants::new(hbar, mass, a0).unwrap();
        let s = HydrogenGroundState::new(a0, c).unwrap();
        let v = PowerLawPotential::new(1.0, hbar * hbar / (mass * a0)).unwrap();
        let rep = virial_report(&s, &v, &c, &Quadrature::default()).unwrap();
        prop_assert!((rep.mean_t + 0.5 * rep.mean_v).abs() <= 1e-8 * rep.mean_t.abs(), "{rep:?}");
        prop_assert!((rep.total_e - rep.e_formula).abs() <= 1e-8 * rep.total_e.abs());
        // E₁ = −ħ²/(2m a₀²)
        let e1 = -hbar * hbar / (2.0 * mass * a0 * a0);
        prop_assert!((rep.total_e - e1).abs() <= 1e-8 * e1.abs());
    }
}

#[test]
fn hydrogen_buckingham_actual_diverges() {
    let s = HydrogenGroundState::<f64>::natural();
    let v = BuckinghamPotential::new(1.0, 1.0, 1.0).unwrap();
    let rep = buckingham_bound(&s, &v, &Quadrature::default()).unwrap();
    assert!(rep.actual.is_divergent() && rep.gap.is_none() && rep.consistent);
    assert!(rep.bound.is_finite());
}
