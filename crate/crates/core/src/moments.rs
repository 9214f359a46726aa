//! Absolute central and raw moments of continuous states.
//!
//! Every improper integral is first classified by power counting on the
//! integrand envelope (density envelope times observable envelope). Divergent
//! moments come back as [`crate::MomentStatus::Divergent`] without being integrated.
//! When an envelope is unknown the doubling-domain probe decides, and the
//! result carries a note saying so.
//!
//! Axis moments of spherical states use `⟨|z|^s⟩ = ⟨r^s⟩/(s+1)` (the angular
//! integral `∫₀¹ μ^s dμ` done analytically), and likewise
//! `⟨|p_z|^s⟩ = ħ^s⟨k^s⟩/(s+1)` over the radial wavenumber density.

use std::fmt;
use std::sync::Arc;

use crate::error::{domain, Error, Result};
use crate::quad::{detect_divergence, probe_divergence, Behavior, Domain, Envelope, Integrability, QuadResult, Quadrature};
use crate::states::{
    axis_position_density, line_axis, momentum_marginal_density, radial_domain, wavenumber_domain, Axis,
    ContinuousState, SphericalState, StateView,
};
use crate::{Direction, DivergenceSite, MomentValue, Real};

/// Real function of the radius with its declared local behaviour, used for
/// divergence classification.
#[derive(Clone)]
pub struct RadialFunction<T> {
    name: String,
    f: Arc<dyn Fn(T) -> T + Send + Sync>,
    /// `f ~ r^a` as `r → 0` (or `Unknown`).
    origin: Behavior<T>,
    /// `Power(b)` for `f ~ r^b` at infinity, `Exponential` for decay faster
    /// than any power, `Unknown` otherwise.
    tail: Behavior<T>,
}

impl<T: Real> RadialFunction<T> {
    pub fn new(
        name: impl Into<String>,
        f: impl Fn(T) -> T + Send + Sync + 'static,
        origin: Behavior<T>,
        tail: Behavior<T>,
    ) -> Self {
        Self { name: name.into(), f: Arc::new(f), origin, tail }
    }

    /// `r^s`.
    pub fn power(s: T) -> Self {
        Self::new(format!("r^{s}"), move |r: T| r.powf(s), Behavior::Power(s), Behavior::Power(s))
    }

    /// `e^{−r/r₀}`.
    pub fn exp_decay(r0: T) -> Self {
        Self::new(format!("exp(-r/{r0})"), move |r: T| (-r / r0).exp(), Behavior::Power(T::zero()), Behavior::Exponential)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, r: T) -> T {
        (self.f)(r)
    }

    pub fn origin(&self) -> Behavior<T> {
        self.origin
    }

    pub fn tail(&self) -> Behavior<T> {
        self.tail
    }
}

impl<T: fmt::Debug> fmt::Debug for RadialFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialFunction")
            .field("name", &self.name)
            .field("origin", &self.origin)
            .field("tail", &self.tail)
            .finish()
    }
}

/// Observable whose distribution a moment is taken over.
#[derive(Debug, Clone)]
pub enum Observable<T> {
    PositionAxis(Axis),
    MomentumAxis(Axis),
    Radial,
    RadialInverse,
    RadialFunction(RadialFunction<T>),
}

impl<T: Real> Observable<T> {
    pub fn label(&self) -> String {
        match self {
            Observable::PositionAxis(a) => format!("x{}", a.index()),
            Observable::MomentumAxis(a) => format!("p{}", a.index()),
            Observable::Radial => "r".into(),
            Observable::RadialInverse => "1/r".into(),
            Observable::RadialFunction(f) => f.name.clone(),
        }
    }
}

fn check_order<T: Real>(order: T) -> Result<()> {
    if order > T::zero() && order.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("moment order must be positive and finite, got {order}")))
    }
}

fn is_integer<T: Real>(x: T) -> bool {
    x.is_finite() && x == x.round()
}

/// `⟨|a − ⟨a⟩|^order⟩` over the distribution of `o` in `s`.
pub fn abs_central_moment<T: Real>(
    s: &dyn ContinuousState<T>,
    o: &Observable<T>,
    order: T,
    q: &Quadrature<T>,
) -> Result<MomentValue<T>> {
    check_order(order)?;
    match (s.view(), o) {
        (StateView::Spherical(st), Observable::PositionAxis(_)) => {
            Ok(axis_from_radial(radial_power_moment(st, order, q)?, order))
        }
        (StateView::Spherical(st), Observable::MomentumAxis(_)) => {
            let hbar = st.constants().hbar;
            let k = wavenumber_power_moment(st, order, q)?;
            let c = hbar.powf(order);
            Ok(axis_from_radial(k, order).map(c, |v| v * c))
        }
        (StateView::Spherical(st), Observable::Radial) => {
            let mu = mean(s, o, q)?;
            let g = move |r: T| (r - mu).abs().powf(order);
            let env = Envelope::new(Behavior::Power(T::zero()), Behavior::Power(order));
            radial_expectation(st, g, env, &[mu], order, q)
        }
        (StateView::Spherical(st), Observable::RadialInverse) => {
            let mu = mean(s, o, q)?;
            let g = move |r: T| (r.recip() - mu).abs().powf(order);
            let env = Envelope::new(Behavior::Power(-order), Behavior::Power(T::zero()));
            radial_expectation(st, g, env, &[mu.recip()], order, q)
        }
        (StateView::Spherical(st), Observable::RadialFunction(f)) => {
            let mu = mean(s, o, q)?;
            let fc = f.clone();
            let g = move |r: T| (fc.eval(r) - mu).abs().powf(order);
            let shift = |b: Behavior<T>, growing_if_positive: bool| match b {
                Behavior::Power(a) if (a < T::zero()) == growing_if_positive => Behavior::Power(a * order),
                Behavior::Power(_) | Behavior::Exponential | Behavior::Compact => Behavior::Power(T::zero()),
                Behavior::Unknown => Behavior::Unknown,
            };
            let env = Envelope::new(shift(f.origin, true), shift(f.tail, false));
            radial_expectation(st, g, env, &[], order, q)
        }
        (StateView::Line(st), Observable::PositionAxis(a)) => {
            line_axis(*a)?;
            let mu = st.mean_position();
            line_expectation(|x| st.position_density(x), mu, st.length_scale(), move |x| (x - mu).abs().powf(order), order, q)
        }
        (StateView::Line(st), Observable::MomentumAxis(a)) => {
            line_axis(*a)?;
            let mu = st.mean_momentum();
            line_expectation(|p| st.momentum_density(p), mu, st.momentum_scale(), move |p| (p - mu).abs().powf(order), order, q)
        }
        (StateView::Line(_), _) => Err(Error::Capability("a radial density")),
    }
}

/// `⟨a^order⟩` for any real order.
///
/// Axis observables of spherical states need an integer order (odd orders
/// vanish by symmetry). Custom radial functions taken to a non-integer order
/// must be non-negative.
pub fn raw_moment<T: Real>(
    s: &dyn ContinuousState<T>,
    o: &Observable<T>,
    order: T,
    q: &Quadrature<T>,
) -> Result<MomentValue<T>> {
    if !order.is_finite() {
        return Err(domain("moment order must be finite"));
    }
    match (s.view(), o) {
        (StateView::Spherical(st), Observable::Radial) => radial_power_moment(st, order, q),
        (StateView::Spherical(st), Observable::RadialInverse) => radial_power_moment(st, -order, q),
        (StateView::Spherical(st), Observable::RadialFunction(f)) => {
            let fc = f.clone();
            let g = move |r: T| {
                let v = fc.eval(r);
                if v >= T::zero() || !is_integer(order) {
                    v.powf(order)
                } else {
                    v.powi(order.to_i32().unwrap_or(i32::MAX))
                }
            };
            let scale = |b: Behavior<T>| match b {
                Behavior::Power(a) => Behavior::Power(a * order),
                Behavior::Exponential if order > T::zero() => Behavior::Exponential,
                Behavior::Exponential if order == T::zero() => Behavior::Power(T::zero()),
                _ => Behavior::Unknown,
            };
            let env = Envelope::new(scale(f.origin), scale(f.tail));
            radial_expectation(st, g, env, &[], order, q)
        }
        (StateView::Spherical(st), Observable::PositionAxis(_) | Observable::MomentumAxis(_)) => {
            if !is_integer(order) {
                return Err(domain("raw axis moments of spherical states need an integer order; use abs_central_moment"));
            }
            let abs_order = order.abs();
            let radial = match o {
                Observable::PositionAxis(_) => radial_power_moment(st, order, q)?,
                _ => {
                    let c = st.constants().hbar.powf(order);
                    wavenumber_power_moment(st, order, q)?.map(c, |v| v * c)
                }
            };
            if order <= -T::one() {
                // the angular factor ∫₀¹ μ^s dμ diverges at the equatorial plane
                return Ok(MomentValue::divergent(order, DivergenceSite::Origin, Direction::PositiveInfinity));
            }
            let even = (abs_order / T::lit(2.0)) == (abs_order / T::lit(2.0)).round();
            let v = axis_from_radial(radial, order);
            Ok(if even || !v.is_convergent() {
                v
            } else {
                MomentValue::convergent(T::zero(), T::zero(), order)
            })
        }
        (StateView::Line(st), Observable::PositionAxis(a) | Observable::MomentumAxis(a)) => {
            line_axis(*a)?;
            if !is_integer(order) {
                return Err(domain("raw moments on the line need an integer order; use abs_central_moment"));
            }
            let n = order.to_i32().unwrap_or(0);
            if n <= -1 {
                return Ok(MomentValue::divergent(order, DivergenceSite::Origin, Direction::PositiveInfinity));
            }
            match o {
                Observable::PositionAxis(_) => line_expectation(
                    |x| st.position_density(x),
                    st.mean_position(),
                    st.length_scale(),
                    move |x| x.powi(n),
                    order,
                    q,
                ),
                _ => line_expectation(
                    |p| st.momentum_density(p),
                    st.mean_momentum(),
                    st.momentum_scale(),
                    move |p| p.powi(n),
                    order,
                    q,
                ),
            }
        }
        (StateView::Line(_), _) => Err(Error::Capability("a radial density")),
    }
}

/// Mean of the marginal distribution of `o`. Axis means of spherical states
/// are exactly zero and are not integrated.
pub fn mean<T: Real>(s: &dyn ContinuousState<T>, o: &Observable<T>, q: &Quadrature<T>) -> Result<T> {
    match (s.view(), o) {
        (StateView::Spherical(_), Observable::PositionAxis(_) | Observable::MomentumAxis(_)) => Ok(T::zero()),
        (StateView::Spherical(st), Observable::Radial) => match st.analytic_mean_radius() {
            Some(m) => Ok(m),
            None => raw_moment(s, o, T::one(), q)?.value_or_err("<r>"),
        },
        (StateView::Spherical(_), _) => raw_moment(s, o, T::one(), q)?.value_or_err(&format!("<{}>", o.label())),
        (StateView::Line(st), Observable::PositionAxis(a)) => {
            line_axis(*a)?;
            Ok(st.mean_position())
        }
        (StateView::Line(st), Observable::MomentumAxis(a)) => {
            line_axis(*a)?;
            Ok(st.mean_momentum())
        }
        (StateView::Line(_), _) => Err(Error::Capability("a radial density")),
    }
}

/// `⟨|a − ⟨a⟩|^order⟩` for an axis observable by integrating its marginal
/// density directly (nested quadrature for spherical states). Slower than
/// [`abs_central_moment`]; used as an independent cross-check.
pub fn abs_central_moment_via_marginal<T: Real>(
    s: &dyn ContinuousState<T>,
    o: &Observable<T>,
    order: T,
    q: &Quadrature<T>,
) -> Result<T> {
    check_order(order)?;
    let mu = mean(s, o, q)?;
    let (axis, scale, momentum) = match (s.view(), o) {
        (StateView::Spherical(st), Observable::PositionAxis(a)) => (*a, st.length_scale(), false),
        (StateView::Spherical(st), Observable::MomentumAxis(a)) => {
            (*a, st.constants().hbar / st.length_scale(), true)
        }
        (StateView::Line(st), Observable::PositionAxis(a)) => (*a, st.length_scale(), false),
        (StateView::Line(st), Observable::MomentumAxis(a)) => (*a, st.momentum_scale(), true),
        _ => return Err(domain("marginal route is defined for axis observables only")),
    };
    let density = |x: T| {
        if momentum {
            momentum_marginal_density(s, axis, x, q)
        } else {
            axis_position_density(s, axis, x, q)
        }
    };
    let outer = q.clone().with_breakpoints([mu]);
    crate::states::integrate_fallible(
        |x| Ok((x - mu).abs().powf(order) * density(x)?),
        Domain::infinite().with_scale(scale),
        &outer,
    )
}

/// `⟨|z|^s⟩` from `⟨r^s⟩`.
fn axis_from_radial<T: Real>(radial: MomentValue<T>, order: T) -> MomentValue<T> {
    let f = (order + T::one()).recip();
    radial.map(f, |v| v * f)
}

/// `⟨r^s⟩` over `ρ_r`.
fn radial_power_moment<T: Real, S: SphericalState<T> + ?Sized>(st: &S, s: T, q: &Quadrature<T>) -> Result<MomentValue<T>> {
    let env = Envelope::new(Behavior::Power(s), Behavior::Power(s));
    radial_expectation(st, move |r: T| r.powf(s), env, &[], s, q)
}

/// `⟨k^s⟩` over `φ̃²`.
fn wavenumber_power_moment<T: Real, S: SphericalState<T> + ?Sized>(st: &S, s: T, q: &Quadrature<T>) -> Result<MomentValue<T>> {
    let env = Envelope::new(Behavior::Power(T::lit(2.0) + s), combine_tail(st.wavenumber_tail(), Behavior::Power(s)));
    let Some(d) = wavenumber_domain(st, T::zero()) else {
        return Ok(MomentValue::convergent(T::zero(), T::zero(), s));
    };
    let classified = match detect_divergence(&env) {
        Ok(c) => c,
        Err(Error::UnknownEnvelope) => Integrability::Convergent,
        Err(e) => return Err(e),
    };
    if let Some(v) = divergent_value(classified, s, T::one()) {
        return Ok(v);
    }
    let failure = std::sync::Mutex::new(None);
    let r = q.integrate_enveloped(
        |k| {
            if k == T::zero() || !k.is_finite() {
                return T::zero();
            }
            match st.wavenumber_amplitude(k) {
                Ok(a) if a == T::zero() => T::zero(),
                Ok(a) => {
                    let w = a * k.powf(s / T::lit(2.0));
                    w * w
                }
                Err(e) => {
                    failure.lock().unwrap_or_else(|p| p.into_inner()).get_or_insert(e);
                    T::zero()
                }
            }
        },
        d,
        &env,
    );
    if let Some(e) = failure.into_inner().unwrap_or_else(|p| p.into_inner()) {
        return Ok(MomentValue::failed(s, e.to_string()));
    }
    Ok(from_quad(r, s))
}

/// Tail of a product of two envelopes.
fn combine_tail<T: Real>(density: Behavior<T>, g: Behavior<T>) -> Behavior<T> {
    match (density, g) {
        (Behavior::Compact, _) => Behavior::Compact,
        (Behavior::Unknown, _) | (_, Behavior::Unknown) => Behavior::Unknown,
        (Behavior::Exponential, _) => Behavior::Exponential,
        (Behavior::Power(a), Behavior::Power(b)) => Behavior::Power(a + b),
        (Behavior::Power(_), Behavior::Exponential) => Behavior::Exponential,
        (Behavior::Power(a), Behavior::Compact) => Behavior::Power(a),
    }
}

fn combine_origin<T: Real>(density: T, g: Behavior<T>) -> Behavior<T> {
    match g {
        Behavior::Power(b) => Behavior::Power(density + b),
        Behavior::Exponential | Behavior::Compact => Behavior::Power(density),
        Behavior::Unknown => Behavior::Unknown,
    }
}

fn divergent_value<T: Real>(c: Integrability, order: T, sign: T) -> Option<MomentValue<T>> {
    let toward = if sign < T::zero() { Direction::NegativeInfinity } else { Direction::PositiveInfinity };
    match c {
        Integrability::Convergent => None,
        Integrability::DivergentAtOrigin => Some(MomentValue::divergent(order, DivergenceSite::Origin, toward)),
        Integrability::DivergentAtInfinity => Some(MomentValue::divergent(order, DivergenceSite::Infinity, toward)),
    }
}

fn from_quad<T: Real>(r: Result<QuadResult<T>>, order: T) -> MomentValue<T> {
    match r {
        Ok(r) if r.converged && r.value.is_finite() => MomentValue::convergent(r.value, r.err_estimate, order),
        Ok(r) => MomentValue::failed(
            order,
            format!("quadrature did not converge (value {:e}, error estimate {:e})", r.value.to_f64_lossy(), r.err_estimate.to_f64_lossy()),
        ),
        Err(e) => MomentValue::failed(order, e.to_string()),
    }
}

/// `∫ g(r) ρ_r(r) dr` with divergence classification from the envelope of `g`.
fn radial_expectation<T: Real, S: SphericalState<T> + ?Sized, G: Fn(T) -> T>(
    st: &S,
    g: G,
    g_env: Envelope<T>,
    breakpoints: &[T],
    order: T,
    q: &Quadrature<T>,
) -> Result<MomentValue<T>> {
    let two_s0 = T::lit(2.0) * st.origin_power();
    let env = Envelope::new(combine_origin(two_s0, g_env.origin), combine_tail(st.radial_tail(), g_env.tail));
    let integrand = |r: T| {
        let u = st.reduced(r);
        if u == T::zero() {
            T::zero()
        } else {
            u * u * g(r)
        }
    };
    let Some(d) = radial_domain(st, T::zero()) else {
        return Ok(MomentValue::convergent(T::zero(), T::zero(), order));
    };
    let l = st.length_scale();
    let mut note = None;
    let classified = match detect_divergence(&env) {
        Ok(c) => c,
        Err(Error::UnknownEnvelope) => {
            note = Some("integrability decided by the doubling-domain heuristic probe");
            if matches!(env.tail, Behavior::Unknown) {
                match probe_divergence(integrand, l, l, q) {
                    Ok(c) => c,
                    Err(e) => return Ok(MomentValue::failed(order, e.to_string())),
                }
            } else {
                detect_divergence(&Envelope::new(Behavior::Power(T::zero()), env.tail)).unwrap_or(Integrability::Convergent)
            }
        }
        Err(e) => return Err(e),
    };
    let sign_at = |r: T| {
        let v = g(r);
        if v < T::zero() {
            -T::one()
        } else {
            T::one()
        }
    };
    if let Some(v) = divergent_value(
        classified,
        order,
        match classified {
            Integrability::DivergentAtOrigin => sign_at(l * T::lit(1e-6)),
            _ => sign_at(l * T::lit(1e3)),
        },
    ) {
        return Ok(match note {
            Some(n) => v.with_note(n),
            None => v,
        });
    }
    let mut cuts = st.radial_breakpoints();
    cuts.extend_from_slice(breakpoints);
    let qq = q.clone().with_breakpoints(cuts);
    let v = from_quad(qq.integrate_enveloped(integrand, d, &env), order);
    Ok(match note {
        Some(n) => v.with_note(n),
        None => v,
    })
}

/// `∫ g(x) ρ(x) dx` on the line, split at the mean.
fn line_expectation<T: Real>(
    density: impl Fn(T) -> T,
    mu: T,
    scale: T,
    g: impl Fn(T) -> T,
    order: T,
    q: &Quadrature<T>,
) -> Result<MomentValue<T>> {
    let d = Domain::infinite().with_scale(scale);
    let qq = q.clone().with_breakpoints([mu]);
    Ok(from_quad(
        qq.integrate(
            |x| {
                let p = density(x);
                if p == T::zero() {
                    T::zero()
                } else {
                    p * g(x)
                }
            },
            d,
        ),
        order,
    ))
}
