//! Catalog of normalized quantum states and the densities the moment engine
//! integrates.
//!
//! Two shapes of state exist. A [`SphericalState`] is an `l = 0` state in three
//! dimensions, described by its reduced radial wavefunction `u(r) = r·R(r)` with
//! `∫u² dr = 1`; its momentum side is the radial sine transform `φ̃(k)` in
//! wavenumber `k = |p|/ħ`. A [`LineState`] is a one-dimensional state with
//! explicit position and momentum densities.
//!
//! Axis marginals of spherical states use the exact reduction
//! `g(z) = ½ ∫_{|z|}^∞ ρ_r(r)/r dr` (and likewise for momentum), so nothing here
//! is ever integrated in more than one dimension.

mod grid;
mod line;
mod slater;
pub(crate) mod spline;

use std::fmt::Debug;
use std::str::FromStr;

use serde::Serialize;

pub use grid::{parse_radial_grid, GridOptions, RadialGridState};
pub use line::{GaussianPacket, HarmonicOscillatorGround};
pub use slater::{HydrogenGroundState, SlaterState};
pub use spline::Interpolation;

use crate::error::{domain, Error, Result};
use crate::quad::{Behavior, Domain, QuadResult, Quadrature};
use crate::{PhysicalConstants, Real};

/// Spherically symmetric (`l = 0`) state in three dimensions.
pub trait SphericalState<T: Real>: Send + Sync + Debug {
    fn label(&self) -> String;
    fn constants(&self) -> &PhysicalConstants<T>;
    /// Typical radius; sets the scale of unbounded quadrature maps.
    fn length_scale(&self) -> T;
    /// Reduced radial wavefunction `u(r)`.
    fn reduced(&self, r: T) -> T;
    /// `u'(r)`.
    fn reduced_derivative(&self, r: T) -> T;
    /// `u(r) ~ r^s₀` as `r → 0`.
    fn origin_power(&self) -> T;
    /// Behaviour of `ρ_r = u²` as `r → ∞`.
    fn radial_tail(&self) -> Behavior<T>;
    /// Upper end of the radial support, when finite.
    fn radial_extent(&self) -> Option<T> {
        None
    }
    /// Points where the radial functions are less smooth (interpolation
    /// knots); integrals over `r` should split there.
    fn radial_breakpoints(&self) -> Vec<T> {
        Vec::new()
    }
    /// Radial wavenumber amplitude `φ̃(k)`, normalized so `∫₀^∞ φ̃² dk = 1`.
    fn wavenumber_amplitude(&self, k: T) -> Result<T>;
    /// Behaviour of `φ̃²` as `k → ∞`.
    fn wavenumber_tail(&self) -> Behavior<T>;
    /// Upper end of the wavenumber support, when finite.
    fn wavenumber_extent(&self) -> Option<T> {
        None
    }
    /// `∫₀^∞ u'(r)² dr = ∫|∇ψ|² d³r`.
    fn gradient_integral(&self, q: &Quadrature<T>) -> Result<T> {
        let d = self.reduced_derivative_domain()?;
        let r = q.integrate(|r| sq(self.reduced_derivative(r)), d)?;
        converged(r)
    }
    /// `⟨r⟩` when known in closed form.
    fn analytic_mean_radius(&self) -> Option<T> {
        None
    }

    #[doc(hidden)]
    fn reduced_derivative_domain(&self) -> Result<Domain<T>> {
        radial_domain(self, T::zero()).ok_or_else(|| domain("empty radial support"))
    }
}

/// One-dimensional state on the line.
pub trait LineState<T: Real>: Send + Sync + Debug {
    fn label(&self) -> String;
    fn constants(&self) -> &PhysicalConstants<T>;
    /// Position spread; sets the quadrature scale.
    fn length_scale(&self) -> T;
    /// Momentum spread; sets the quadrature scale in momentum.
    fn momentum_scale(&self) -> T;
    fn position_density(&self, x: T) -> T;
    fn momentum_density(&self, p: T) -> T;
    /// `|ψ'(x)|²`.
    fn gradient_density(&self, x: T) -> T;
    fn mean_position(&self) -> T;
    fn mean_momentum(&self) -> T;
    /// Tail behaviour of both densities.
    fn tail(&self) -> Behavior<T> {
        Behavior::Exponential
    }
}

/// Borrowed view selecting the shape of a state.
#[derive(Debug, Clone, Copy)]
pub enum StateView<'a, T: Real> {
    Spherical(&'a dyn SphericalState<T>),
    Line(&'a dyn LineState<T>),
}

/// Any state the moment engine can integrate against.
pub trait ContinuousState<T: Real>: Send + Sync + Debug {
    fn view(&self) -> StateView<'_, T>;

    fn descriptor(&self) -> StateDescriptor<T> {
        match self.view() {
            StateView::Spherical(s) => StateDescriptor {
                label: s.label(),
                dimensionality: Dimensionality::Spherical3D,
                has_position_density: true,
                has_radial_density: true,
                has_momentum_density: true,
                mean_position: Some(T::zero()),
                mean_momentum: Some(T::zero()),
            },
            StateView::Line(s) => StateDescriptor {
                label: s.label(),
                dimensionality: Dimensionality::Line1D,
                has_position_density: true,
                has_radial_density: false,
                has_momentum_density: true,
                mean_position: Some(s.mean_position()),
                mean_momentum: Some(s.mean_momentum()),
            },
        }
    }

    fn physical_constants(&self) -> PhysicalConstants<T> {
        match self.view() {
            StateView::Spherical(s) => *s.constants(),
            StateView::Line(s) => *s.constants(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Dimensionality {
    Line1D,
    Spherical3D,
}

/// Capabilities and closed-form means of a state. Means are per axis; for
/// spherical states every axis mean is zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateDescriptor<T> {
    pub label: String,
    pub dimensionality: Dimensionality,
    pub has_position_density: bool,
    pub has_radial_density: bool,
    pub has_momentum_density: bool,
    pub mean_position: Option<T>,
    pub mean_momentum: Option<T>,
}

/// Cartesian axis. One-dimensional states only have axis 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn index(self) -> usize {
        match self {
            Axis::X => 1,
            Axis::Y => 2,
            Axis::Z => 3,
        }
    }

    pub fn from_index(i: usize) -> Result<Self> {
        match i {
            1 => Ok(Axis::X),
            2 => Ok(Axis::Y),
            3 => Ok(Axis::Z),
            _ => Err(domain(format!("axis index must be 1, 2 or 3, got {i}"))),
        }
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "x" | "1" => Ok(Axis::X),
            "y" | "2" => Ok(Axis::Y),
            "z" | "3" => Ok(Axis::Z),
            other => Err(domain(format!("unknown axis {other:?}"))),
        }
    }
}

impl std::fmt::Display for Axis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

pub(crate) fn line_axis(axis: Axis) -> Result<()> {
    if axis == Axis::X {
        Ok(())
    } else {
        Err(domain(format!("one-dimensional state has only axis 1, got {}", axis.index())))
    }
}

pub(crate) fn sq<T: Real>(x: T) -> T {
    x * x
}

pub(crate) fn converged<T: Real>(r: QuadResult<T>) -> Result<T> {
    if r.converged {
        Ok(r.value)
    } else {
        Err(Error::NotConverged {
            value: r.value.to_f64_lossy(),
            err_estimate: r.err_estimate.to_f64_lossy(),
            evaluations: r.evaluations,
        })
    }
}

/// `[from, extent]` or `[from, ∞)`; `None` when `from` is past the support.
pub(crate) fn radial_domain<T: Real, S: SphericalState<T> + ?Sized>(s: &S, from: T) -> Option<Domain<T>> {
    match s.radial_extent() {
        Some(end) => Domain::finite(from, end).ok(),
        None => Some(Domain::semi_infinite(from).with_scale(s.length_scale())),
    }
}

/// Same as [`radial_domain`] in wavenumber.
pub(crate) fn wavenumber_domain<T: Real, S: SphericalState<T> + ?Sized>(s: &S, from: T) -> Option<Domain<T>> {
    match s.wavenumber_extent() {
        Some(end) => Domain::finite(from, end).ok(),
        None => Some(Domain::semi_infinite(from).with_scale(T::one() / s.length_scale())),
    }
}

/// `ρ_r(r)·r^s` without forming `0·∞` at the origin.
pub(crate) fn weighted_radial<T: Real, S: SphericalState<T> + ?Sized>(s: &S, r: T, power: T) -> T {
    let u = s.reduced(r);
    if u == T::zero() {
        return T::zero();
    }
    u * u * r.powf(power)
}

/// Radial probability density `ρ_r(r) = u(r)²` (per unit length).
pub fn radial_density<T: Real>(s: &dyn ContinuousState<T>, r: T) -> Result<T> {
    match s.view() {
        StateView::Spherical(st) => {
            if !(r >= T::zero()) {
                return Err(domain(format!("radius must be non-negative, got {r}")));
            }
            Ok(sq(st.reduced(r)))
        }
        StateView::Line(_) => Err(Error::Capability("a radial density")),
    }
}

/// Position marginal along `axis` at coordinate `z`.
pub fn axis_position_density<T: Real>(s: &dyn ContinuousState<T>, axis: Axis, z: T, q: &Quadrature<T>) -> Result<T> {
    match s.view() {
        StateView::Spherical(st) => {
            let from = z.abs();
            let Some(d) = radial_domain(st, from) else {
                return Ok(T::zero());
            };
            let r = q.integrate(|r| weighted_radial(st, r, -T::one()), d)?;
            Ok(T::lit(0.5) * converged(r)?)
        }
        StateView::Line(st) => {
            line_axis(axis)?;
            Ok(st.position_density(z))
        }
    }
}

/// Momentum marginal along `axis` at momentum `p` (per unit momentum).
pub fn momentum_marginal_density<T: Real>(s: &dyn ContinuousState<T>, axis: Axis, p: T, q: &Quadrature<T>) -> Result<T> {
    match s.view() {
        StateView::Spherical(st) => {
            let hbar = st.constants().hbar;
            let from = p.abs() / hbar;
            let Some(d) = wavenumber_domain(st, from) else {
                return Ok(T::zero());
            };
            let value = integrate_fallible(
                |k| {
                    let a = st.wavenumber_amplitude(k)?;
                    Ok(if a == T::zero() { T::zero() } else { a * a / k })
                },
                d,
                q,
            )?;
            Ok(T::lit(0.5) * value / hbar)
        }
        StateView::Line(st) => {
            line_axis(axis)?;
            Ok(st.momentum_density(p))
        }
    }
}

/// `∫|∇ψ|²`, in inverse length squared.
pub fn gradient_norm_squared<T: Real>(s: &dyn ContinuousState<T>, q: &Quadrature<T>) -> Result<T> {
    match s.view() {
        StateView::Spherical(st) => st.gradient_integral(q),
        StateView::Line(st) => {
            let d = Domain::infinite().with_scale(st.length_scale());
            let q = q.clone().with_breakpoints([st.mean_position()]);
            converged(q.integrate(|x| st.gradient_density(x), d)?)
        }
    }
}

/// Mean kinetic energy `(ħ²/2m) ∫|∇ψ|²`.
pub fn mean_kinetic_via_gradient<T: Real>(s: &dyn ContinuousState<T>, q: &Quadrature<T>) -> Result<T> {
    let c = s.physical_constants();
    Ok(c.hbar * c.hbar / (T::lit(2.0) * c.mass) * gradient_norm_squared(s, q)?)
}

/// Integrates a fallible integrand; the first error wins.
pub(crate) fn integrate_fallible<T: Real, F>(f: F, d: Domain<T>, q: &Quadrature<T>) -> Result<T>
where
    F: Fn(T) -> Result<T>,
{
    let failure = std::sync::Mutex::new(None);
    let r = q.integrate(
        |x| match f(x) {
            Ok(v) => v,
            Err(e) => {
                let mut slot = failure.lock().unwrap_or_else(|p| p.into_inner());
                slot.get_or_insert(e);
                T::zero()
            }
        },
        d,
    )?;
    if let Some(e) = failure.into_inner().unwrap_or_else(|p| p.into_inner()) {
        return Err(e);
    }
    converged(r)
}
