//! Central force fields: virial relations for `V = −β/r^α`, the kinetic-floor
//! energy estimate and bound-state threshold, and mean Lennard-Jones and
//! Buckingham energies.

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::moments::{raw_moment, Observable, RadialFunction};
use crate::quad::Quadrature;
use crate::states::{gradient_norm_squared, ContinuousState};
use crate::{Direction, DivergenceSite, MomentStatus, MomentValue, PhysicalConstants, Real};

fn positive<T: Real>(name: &str, x: T) -> Result<()> {
    if x.is_finite() && x > T::zero() {
        Ok(())
    } else {
        Err(domain(format!("{name} must be positive and finite, got {x}")))
    }
}

/// `V = −β/r^α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerLawPotential<T> {
    alpha: T,
    beta: T,
}

impl<T: Real> PowerLawPotential<T> {
    pub fn new(alpha: T, beta: T) -> Result<Self> {
        positive("alpha", alpha)?;
        positive("beta", beta)?;
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn beta(&self) -> T {
        self.beta
    }
}

/// `V = 4ε[(σ/r)¹² − (σ/r)⁶]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LennardJonesPotential<T> {
    epsilon: T,
    sigma: T,
}

impl<T: Real> LennardJonesPotential<T> {
    pub fn new(epsilon: T, sigma: T) -> Result<Self> {
        positive("epsilon", epsilon)?;
        positive("sigma", sigma)?;
        Ok(Self { epsilon, sigma })
    }

    pub fn epsilon(&self) -> T {
        self.epsilon
    }

    pub fn sigma(&self) -> T {
        self.sigma
    }
}

/// `V = γ[e^{−r/r₀} − (σ/r)⁶]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BuckinghamPotential<T> {
    gamma: T,
    r0: T,
    sigma: T,
}

impl<T: Real> BuckinghamPotential<T> {
    pub fn new(gamma: T, r0: T, sigma: T) -> Result<Self> {
        positive("gamma", gamma)?;
        positive("r0", r0)?;
        positive("sigma", sigma)?;
        Ok(Self { gamma, r0, sigma })
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }

    pub fn r0(&self) -> T {
        self.r0
    }

    pub fn sigma(&self) -> T {
        self.sigma
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VirialReport<T> {
    pub mean_t: T,
    pub mean_v: T,
    pub total_e: T,
    /// `|⟨T⟩ + (α/2)⟨V⟩| / max(|⟨T⟩|, |⟨V⟩|)`; near zero only for eigenstates
    /// of the potential.
    pub virial_residual: T,
    /// `(α/2 − 1)β⟨r^{−α}⟩`, the energy the virial relation predicts.
    pub e_formula: T,
}

/// Kinetic and potential means of `s` in `V = −β/r^α`.
pub fn virial_report<T: Real>(
    s: &dyn ContinuousState<T>,
    v: &PowerLawPotential<T>,
    c: &PhysicalConstants<T>,
    q: &Quadrature<T>,
) -> Result<VirialReport<T>> {
    let inv = raw_moment(s, &Observable::RadialInverse, v.alpha, q)?.value_or_err(&format!("<r^-{}>", v.alpha))?;
    let mean_t = c.hbar * c.hbar / (T::lit(2.0) * c.mass) * gradient_norm_squared(s, q)?;
    let mean_v = -v.beta * inv;
    let half_alpha = v.alpha / T::lit(2.0);
    let scale = mean_t.abs().max(mean_v.abs());
    let virial_residual = if scale > T::zero() { (mean_t + half_alpha * mean_v).abs() / scale } else { T::zero() };
    Ok(VirialReport {
        mean_t,
        mean_v,
        total_e: mean_t + mean_v,
        virial_residual,
        e_formula: (half_alpha - T::one()) * v.beta * inv,
    })
}

/// `ħ²/(8mΔr²) − β⟨r^{−α}⟩`, the displayed central expression of the
/// kinetic-floor estimate with `p_r² ≥ ħ²/(4Δr²)`.
///
/// The relation printed around it carries both `≥` and `≤`; this is only the
/// value, labelled an estimate.
pub fn ground_energy_estimate<T: Real>(
    delta_r2: T,
    mean_r_inv_alpha: &MomentValue<T>,
    v: &PowerLawPotential<T>,
    c: &PhysicalConstants<T>,
) -> Result<T> {
    positive("radial variance", delta_r2)?;
    let m = mean_r_inv_alpha.value_or_err(&format!("<r^-{}>", v.alpha))?;
    Ok(kinetic_floor(delta_r2, c) - v.beta * m)
}

/// `ħ²/(8mΔr²) − β/⟨r^α⟩`, the same estimate after the reciprocal-moment
/// inequality.
pub fn reciprocal_energy_form<T: Real>(
    delta_r2: T,
    mean_r_alpha: &MomentValue<T>,
    v: &PowerLawPotential<T>,
    c: &PhysicalConstants<T>,
) -> Result<T> {
    positive("radial variance", delta_r2)?;
    let m = mean_r_alpha.value_or_err(&format!("<r^{}>", v.alpha))?;
    Ok(kinetic_floor(delta_r2, c) - v.beta / m)
}

fn kinetic_floor<T: Real>(delta_r2: T, c: &PhysicalConstants<T>) -> T {
    c.hbar * c.hbar / (T::lit(8.0) * c.mass * delta_r2)
}

/// `b = 8mβ/ħ²`.
pub fn threshold_coefficient<T: Real>(v: &PowerLawPotential<T>, c: &PhysicalConstants<T>) -> T {
    T::lit(8.0) * c.mass * v.beta / (c.hbar * c.hbar)
}

/// Positive root `⟨r⟩` of `b⟨r⟩² + ⟨r⟩ − b⟨r²⟩ = 0`, the α = 1 disintegration
/// threshold.
pub fn bound_threshold_radius<T: Real>(mean_r2: T, b: T) -> Result<T> {
    positive("<r^2>", mean_r2)?;
    positive("b", b)?;
    let h = (T::lit(2.0) * b).recip();
    // −h + √(h² + ⟨r²⟩) without cancellation
    Ok(mean_r2 / (h + h.hypot(mean_r2.sqrt())))
}

/// The negative root `−1/(2b) − √(1/(4b²) + ⟨r²⟩)`, unphysical since `⟨r⟩ > 0`.
pub fn bound_threshold_negative_root<T: Real>(mean_r2: T, b: T) -> Result<T> {
    positive("<r^2>", mean_r2)?;
    positive("b", b)?;
    let h = (T::lit(2.0) * b).recip();
    Ok(-h - h.hypot(mean_r2.sqrt()))
}

/// `b⟨r⟩² + ⟨r⟩ − b⟨r²⟩`.
pub fn threshold_residual<T: Real>(r: T, mean_r2: T, b: T) -> T {
    b * r * r + r - b * mean_r2
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BuckinghamReport<T> {
    /// `γ[⟨e^{−r/r₀}⟩ − σ⁶/⟨r⁶⟩]`
    pub bound: T,
    /// `γ[⟨e^{−r/r₀}⟩ − σ⁶⟨r^{−6}⟩]`, divergent toward `−∞` when `⟨r^{−6}⟩` is.
    pub actual: MomentValue<T>,
    /// `bound − actual = γσ⁶(⟨r^{−6}⟩ − 1/⟨r⁶⟩)` when `actual` converges.
    pub gap: Option<T>,
    /// `actual ≤ bound` (vacuous for divergent `actual`).
    pub consistent: bool,
}

/// Mean Buckingham energy against its reciprocal-moment bound.
pub fn buckingham_bound<T: Real>(
    s: &dyn ContinuousState<T>,
    v: &BuckinghamPotential<T>,
    q: &Quadrature<T>,
) -> Result<BuckinghamReport<T>> {
    let decay = raw_moment(s, &Observable::RadialFunction(RadialFunction::exp_decay(v.r0)), T::one(), q)?
        .value_or_err(&format!("<exp(-r/{})>", v.r0))?;
    let r6 = raw_moment(s, &Observable::Radial, T::lit(6.0), q)?.value_or_err("<r^6>")?;
    let s6 = v.sigma.powi(6);
    let bound = v.gamma * (decay - s6 / r6);
    let inv6 = raw_moment(s, &Observable::RadialInverse, T::lit(6.0), q)?;
    Ok(match inv6.status {
        MomentStatus::Convergent => {
            let m = inv6.value.expect("convergent moment has a value");
            let actual = v.gamma * (decay - s6 * m);
            let gap = v.gamma * s6 * (m - r6.recip());
            BuckinghamReport {
                bound,
                actual: MomentValue::convergent(actual, v.gamma * s6 * inv6.err_estimate, T::one()),
                gap: Some(gap),
                consistent: actual <= bound + T::lit(1e-10) * bound.abs(),
            }
        }
        MomentStatus::Divergent { at, .. } => BuckinghamReport {
            bound,
            actual: MomentValue::divergent(T::one(), at, Direction::NegativeInfinity).with_note("<r^-6> is divergent"),
            gap: None,
            consistent: true,
        },
        MomentStatus::Failed => return Err(Error::Failed { label: "<r^-6>".into() }),
    })
}

/// `⟨V_LJ⟩ = 4ε[σ¹²⟨r^{−12}⟩ − σ⁶⟨r^{−6}⟩]`.
pub fn lennard_jones_mean<T: Real>(
    s: &dyn ContinuousState<T>,
    v: &LennardJonesPotential<T>,
    q: &Quadrature<T>,
) -> Result<MomentValue<T>> {
    let one = T::one();
    let m12 = raw_moment(s, &Observable::RadialInverse, T::lit(12.0), q)?;
    let m6 = raw_moment(s, &Observable::RadialInverse, T::lit(6.0), q)?;
    let divergent = |name: &str, toward| {
        MomentValue::divergent(one, DivergenceSite::Origin, toward).with_note(format!("{name} is divergent"))
    };
    if m12.is_divergent() {
        return Ok(divergent("<r^-12>", Direction::PositiveInfinity));
    }
    if m6.is_divergent() {
        return Ok(divergent("<r^-6>", Direction::NegativeInfinity));
    }
    let (Some(a), Some(b)) = (m12.value.filter(|_| m12.is_convergent()), m6.value.filter(|_| m6.is_convergent())) else {
        return Ok(MomentValue::failed(one, "inverse moment quadrature failed"));
    };
    let four_eps = T::lit(4.0) * v.epsilon;
    let (s6, s12) = (v.sigma.powi(6), v.sigma.powi(12));
    Ok(MomentValue::convergent(
        four_eps * (s12 * a - s6 * b),
        four_eps * (s12 * m12.err_estimate + s6 * m6.err_estimate),
        one,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{factorial, gamma_moment};
    use crate::states::{GridOptions, HydrogenGroundState, RadialGridState, SlaterState};

    fn q() -> Quadrature<f64> {
        Quadrature::default()
    }

    fn nat() -> PhysicalConstants<f64> {
        PhysicalConstants::natural()
    }

    #[test]
    fn hydrogen_virial() {
        let h = HydrogenGroundState::natural();
        let r = virial_report(&h, &PowerLawPotential::new(1.0, 1.0).unwrap(), &nat(), &q()).unwrap();
        assert!((r.mean_t - 0.5).abs() < 1e-10);
        assert!((r.mean_v + 1.0).abs() < 1e-12);
        assert!((r.total_e + 0.5).abs() < 1e-10);
        assert!(r.virial_residual <= 1e-8);
        assert!((r.e_formula + 0.5).abs() < 1e-12);
        assert_eq!(r.total_e, r.mean_t + r.mean_v);
    }

    #[test]
    fn energy_formula_negative_for_soft_potentials() {
        let states: Vec<Box<dyn ContinuousState<f64>>> =
            vec![Box::new(HydrogenGroundState::natural()), Box::new(SlaterState::r4test())];
        for s in &states {
            for alpha in [0.25, 1.0, 1.5, 1.9] {
                let r = virial_report(s.as_ref(), &PowerLawPotential::new(alpha, 2.0).unwrap(), &nat(), &q()).unwrap();
                assert!(r.e_formula < 0.0);
            }
        }
    }

    #[test]
    fn virial_reports_divergent_potential() {
        let h = HydrogenGroundState::natural();
        let e = virial_report(&h, &PowerLawPotential::new(3.0, 1.0).unwrap(), &nat(), &q());
        assert!(matches!(e, Err(Error::Divergent { .. })));
    }

    #[test]
    fn hydrogen_energy_estimate() {
        let v = PowerLawPotential::new(1.0, 1.0).unwrap();
        let inv = MomentValue::convergent(1.0, 0.0, -1.0);
        let e = ground_energy_estimate(0.75, &inv, &v, &nat()).unwrap();
        assert!((e + 5.0 / 6.0).abs() < 1e-15);
        let far = ground_energy_estimate(1e300, &inv, &v, &nat()).unwrap();
        assert_eq!(far, -1.0);
        let free = ground_energy_estimate(0.75, &inv, &PowerLawPotential::new(1.0, 1e-300).unwrap(), &nat()).unwrap();
        assert!((free - 1.0 / 6.0).abs() < 1e-15);
        assert!(ground_energy_estimate(0.0, &inv, &v, &nat()).is_err());
        let r = reciprocal_energy_form(0.75, &MomentValue::convergent(1.5, 0.0, 1.0), &v, &nat()).unwrap();
        assert!((r - (1.0 / 6.0 - 1.0 / 1.5)).abs() < 1e-15);
    }

    #[test]
    fn threshold_root() {
        let r = bound_threshold_radius(3.0, 8.0).unwrap();
        assert!((r - (-1.0 / 16.0 + (1.0f64 / 256.0 + 3.0).sqrt())).abs() < 1e-15);
        assert!((r - 1.6707).abs() < 5e-5);
        assert!(threshold_residual(r, 3.0, 8.0).abs() <= 1e-12 * 24.0);
        assert!((bound_threshold_radius(3.0, 1e12).unwrap() - 3f64.sqrt()).abs() < 1e-11);
        let b = 2.5f64;
        let m2 = 3.0 / (4.0 * b * b);
        assert!((bound_threshold_radius(m2, b).unwrap() - 1.0 / (2.0 * b)).abs() < 1e-15);
        let neg: f64 = bound_threshold_negative_root(3.0, 8.0).unwrap();
        assert!(neg < 0.0 && threshold_residual(neg, 3.0, 8.0).abs() < 1e-12 * 24.0);
        assert!(bound_threshold_radius(-1.0, 8.0).is_err());
        assert!(bound_threshold_radius(1.0, 0.0).is_err());
        assert!((threshold_coefficient(&PowerLawPotential::new(1.0, 1.0).unwrap(), &nat()) - 8.0).abs() < 1e-15);
    }

    #[test]
    fn buckingham_on_r4_state() {
        let s = SlaterState::r4test();
        let rep = buckingham_bound(&s, &BuckinghamPotential::new(1.0, 1.0, 1.0).unwrap(), &q()).unwrap();
        let z = gamma_moment::<f64>(8, 2.0);
        let inv6 = gamma_moment::<f64>(2, 2.0) / z;
        let r6 = gamma_moment::<f64>(14, 2.0) / z;
        assert!((inv6 - 0.25 / 78.75).abs() < 1e-15 && (r6 - 33783.75).abs() < 1e-8);
        let gap = rep.gap.unwrap();
        assert!((gap - (inv6 - 1.0 / r6)).abs() < 1e-8, "{gap}");
        assert!(gap > 0.0 && rep.consistent);
        assert!((rep.bound - rep.actual.value.unwrap() - gap).abs() < 1e-12);
    }

    #[test]
    fn buckingham_on_hydrogen_is_divergent() {
        let h = HydrogenGroundState::natural();
        let rep = buckingham_bound(&h, &BuckinghamPotential::new(2.0, 0.5, 1.0).unwrap(), &q()).unwrap();
        assert!(rep.bound.is_finite());
        assert_eq!(rep.actual.status, MomentStatus::Divergent { at: DivergenceSite::Origin, toward: Direction::NegativeInfinity });
        assert!(rep.consistent && rep.gap.is_none());
    }

    #[test]
    fn buckingham_small_sigma_limit() {
        let s = SlaterState::r4test();
        let rep = buckingham_bound(&s, &BuckinghamPotential::new(1.0, 1.0, 1e-40).unwrap(), &q()).unwrap();
        assert_eq!(rep.bound, rep.actual.value.unwrap());
    }

    #[test]
    fn lennard_jones_divergence() {
        let v = LennardJonesPotential::new(1.0, 1.0).unwrap();
        for s in [&HydrogenGroundState::natural() as &dyn ContinuousState<f64>, &SlaterState::r4test()] {
            let m = lennard_jones_mean(s, &v, &q()).unwrap();
            assert!(m.is_divergent());
            assert!(m.note.unwrap().contains("r^-12"));
        }
    }

    #[test]
    fn lennard_jones_on_synthetic_grid() {
        // u = r⁶e^{−r}/√(12!/2¹³), so ρ_r ∝ r¹²e^{−2r}
        let norm = (gamma_moment::<f64>(12, 2.0)).sqrt();
        let opts = GridOptions { origin_power: Some(6.0), ..GridOptions::default() };
        let g = RadialGridState::tabulate(|r: f64| r.powi(6) * (-r).exp() / norm, 60.0, 6000, opts).unwrap();
        let (eps, sigma) = (0.7, 1.3);
        let m = lennard_jones_mean(&g, &LennardJonesPotential::new(eps, sigma).unwrap(), &q()).unwrap();
        let z = gamma_moment::<f64>(12, 2.0);
        let m12 = 0.5 / z;
        let m6 = factorial::<f64>(6) / 2f64.powi(7) / z;
        let exact = 4.0 * eps * (sigma.powi(12) * m12 - sigma.powi(6) * m6);
        let got = m.value.unwrap();
        assert!((got - exact).abs() < 1e-8 * exact.abs().max(1.0), "{got} {exact}");
    }

    #[test]
    fn potential_validation() {
        assert!(PowerLawPotential::new(0.0, 1.0).is_err());
        assert!(PowerLawPotential::new(1.0, -1.0).is_err());
        assert!(LennardJonesPotential::new(1.0, 0.0).is_err());
        assert!(BuckinghamPotential::new(1.0, f64::NAN, 1.0).is_err());
    }
}
