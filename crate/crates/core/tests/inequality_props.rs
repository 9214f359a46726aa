use proptest::prelude::*;
use uncertainty_core::inequalities::{
    holder_verdict, holder_verdict_continuous, uncertainty_verdict_canonical, DiscreteDensity, Outcome,
};
use uncertainty_core::moments::RadialFunction;
use uncertainty_core::quad::{Behavior, Quadrature};
use uncertainty_core::rng::SplitMix64;
use uncertainty_core::states::{Axis, HarmonicOscillatorGround, HydrogenGroundState, SlaterState};
use uncertainty_core::{make_exponents, PhysicalConstants, SlackPolicy};

fn random_density(seed: u64) -> DiscreteDensity<f64> {
    let mut rng = SplitMix64::new(seed);
    let n = 1 + (rng.next_u64() % 60) as usize;
    let pts = (0..n).map(|_| (rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0), rng.uniform(0.0, 1.0))).collect();
    DiscreteDensity::new(pts).unwrap()
}

fn radial_family(kind: usize, a: f64) -> RadialFunction<f64> {
    match kind {
        0 => RadialFunction::power(a),
        1 => RadialFunction::exp_decay(0.25 + a.abs()),
        _ => RadialFunction::new("1/(1+r^2)", |r: f64| 1.0 / (1.0 + r * r), Behavior::Power(0.0), Behavior::Power(-2.0)),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn discrete_holder_holds(seed in any::<u64>(), p in 0.25f64..8.0, q in 0.25f64..8.0) {
        let v = holder_verdict(&random_density(seed), &make_exponents(p, q).unwrap(), &SlackPolicy::default());
        prop_assert!(v.margin >= -1e-12 && v.holds, "{v:?}");
    }

    #[test]
    fn continuous_holder_holds(
        kf in 0usize..3, kg in 0usize..3,
        a in -0.9f64..2.5, b in -0.9f64..2.5,
        p in 0.25f64..8.0, q in 0.25f64..8.0,
        hydrogen in any::<bool>(),
    ) {
        let e = make_exponents(p, q).unwrap();
        let (f, g) = (radial_family(kf, a), radial_family(kg, b));
        let h = HydrogenGroundState::natural();
        let s = SlaterState::r4test();
        let st: &dyn uncertainty_core::states::ContinuousState<f64> = if hydrogen { &h } else { &s };
        match holder_verdict_continuous(st, &f, &g, &e, &Quadrature::default(), &SlackPolicy::default()).unwrap() {
            Outcome::Checked(v) => prop_assert!(v.margin >= -1e-12 && v.holds, "{v:?}"),
            Outcome::Divergent(_) => {}
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn holder_swap_symmetry(seed in any::<u64>(), p in 0.25f64..8.0, q in 0.25f64..8.0) {
        let d = random_density(seed);
        let swapped = DiscreteDensity::new(d.points().iter().map(|&(f, g, w)| (g, f, w)).collect()).unwrap();
        let pol = SlackPolicy::default();
        let v = holder_verdict(&d, &make_exponents(p, q).unwrap(), &pol);
        let w = holder_verdict(&swapped, &make_exponents(q, p).unwrap(), &pol);
        prop_assert_eq!(v.holds, w.holds);
        prop_assert!((v.ratio.unwrap() - w.ratio.unwrap()).abs() <= 1e-12);
    }
}

#[test]
fn kennard_reduction_lhs_is_exact() {
    let e = make_exponents(2.0, 2.0).unwrap();
    let q = Quadrature::default();
    let pol = SlackPolicy::default();
    for hbar in [1.0, 2.0, 0.3, 1.054_571_817e-34] {
        let c = PhysicalConstants::new(hbar, 1.0, 1.0).unwrap();
        let s = HarmonicOscillatorGround::new(1.0, c).unwrap();
        let v = match uncertainty_verdict_canonical(&s, Axis::X, Axis::X, &e, &q, &pol).unwrap() {
            Outcome::Checked(v) => v,
            other => panic!("{other:?}"),
        };
        assert_eq!(v.lhs, hbar / 2.0);
    }
    let h = HydrogenGroundState::natural();
    for (i, j) in [(Axis::X, Axis::Y), (Axis::Z, Axis::X)] {
        let v = uncertainty_verdict_canonical(&h, i, j, &e, &q, &pol).unwrap();
        assert_eq!(v.verdict().unwrap().lhs, 0.0);
    }
    let v = uncertainty_verdict_canonical(&h, Axis::Y, Axis::Y, &e, &q, &pol).unwrap();
    assert_eq!(v.verdict().unwrap().lhs, 0.5);
}
