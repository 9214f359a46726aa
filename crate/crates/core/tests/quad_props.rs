use proptest::prelude::*;
use uncertainty_core::quad::{Domain, Quadrature};
use uncertainty_core::scalar::gamma_moment;

#[test]
fn gamma_oracle() {
    let q = Quadrature::default();
    for n in 0..=12u32 {
        for k in [1.0f64, 2.0, 3.0] {
            let r = q.integrate(|r: f64| r.powi(n as i32) * (-k * r).exp(), Domain::semi_infinite(0.0)).unwrap();
            let exact = gamma_moment::<f64>(n, k);
            assert!(r.converged && ((r.value - exact) / exact).abs() < 1e-10, "n={n} k={k}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn linearity(
        a in -3.0f64..3.0, b in -3.0f64..3.0,
        n in 0i32..6, m in 0i32..6,
        k1 in 0.5f64..3.0, k2 in 0.5f64..3.0,
    ) {
        let q = Quadrature::default();
        let d = Domain::semi_infinite(0.0);
        let f = |r: f64| r.powi(n) * (-k1 * r).exp();
        let g = |r: f64| (1.0 + r).powi(m) * (-k2 * r).exp();
        let rf = q.integrate(f, d).unwrap();
        let rg = q.integrate(g, d).unwrap();
        let rs = q.integrate(|r| a * f(r) + b * g(r), d).unwrap();
        let err = rs.err_estimate + a.abs() * rf.err_estimate + b.abs() * rg.err_estimate;
        prop_assert!((rs.value - (a * rf.value + b * rg.value)).abs() <= 10.0 * err + 1e-14);
    }

    #[test]
    fn substitution_invariance(n in 0i32..8, k in 0.5f64..4.0) {
        let q = Quadrature::default();
        let f = |r: f64| r.powi(n) * (-k * r).exp();
        let direct = q.integrate(f, Domain::semi_infinite(0.0)).unwrap();
        let mapped = q
            .integrate(
                |t: f64| {
                    let s = 1.0 - t;
                    let v = f(t / s);
                    if v == 0.0 { 0.0 } else { v / (s * s) }
                },
                Domain::finite(0.0, 1.0).unwrap(),
            )
            .unwrap();
        let tol = direct.err_estimate + mapped.err_estimate;
        prop_assert!((direct.value - mapped.value).abs() <= tol.max(1e-12 * direct.value), "{direct:?} {mapped:?}");
    }
}
