use std::sync::OnceLock;

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::quad::{sine_transform, Behavior, Domain, Quadrature};
use crate::states::spline::{Interpolation, Spline};
use crate::states::{converged, sq, ContinuousState, SphericalState, StateView};
use crate::{PhysicalConstants, Real};

/// Construction options for [`RadialGridState`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridOptions<T> {
    /// `u ~ r^s₀` at the origin. Required when the grid does not start at
    /// `r = 0`; defaults to 1 otherwise.
    pub origin_power: Option<T>,
    pub interpolation: Interpolation,
    pub constants: PhysicalConstants<T>,
    pub label: Option<String>,
}

impl<T: Real> Default for GridOptions<T> {
    fn default() -> Self {
        Self {
            origin_power: None,
            interpolation: Interpolation::Cubic,
            constants: PhysicalConstants::natural(),
            label: None,
        }
    }
}

/// Relative tolerance on `∫u'²` for the grid-refinement estimate.
const GRADIENT_TOL: f64 = 1e-6;

const MAX_KNOT_BREAKPOINTS: usize = 20_000;

/// `l = 0` state sampled on a radial grid.
///
/// The grid values are interpolated as `u(r) = r^s₀·v(r)` with `v` a spline,
/// so the declared origin behaviour is exact. The state is zero beyond the
/// last grid point. Construction renormalizes to `∫u² dr = 1` and records the
/// factor applied to the input values.
///
/// The momentum side is a table of sine transforms built on first use. It is
/// band-limited: the table stops once the wavenumber density is negligible or
/// at the grid's Nyquist wavenumber `π/h_max`, and the amplitude is zero
/// beyond.
#[derive(Debug)]
pub struct RadialGridState<T: Real> {
    r: Vec<T>,
    u: Vec<T>,
    s0: T,
    v: Spline<T>,
    end: T,
    mean_radius: T,
    factor: T,
    options: GridOptions<T>,
    momentum: OnceLock<Result<MomentumTable<T>>>,
}

#[derive(Debug)]
struct MomentumTable<T> {
    amplitude: Spline<T>,
    kmax: T,
}

impl<T: Real> RadialGridState<T> {
    pub fn new(r: Vec<T>, u: Vec<T>, options: GridOptions<T>) -> Result<Self> {
        if r.len() != u.len() {
            return Err(Error::DimensionMismatch { expected: r.len(), got: u.len() });
        }
        if r.len() < 4 {
            return Err(domain(format!("radial grid needs at least 4 points, got {}", r.len())));
        }
        if let Some(i) = r.iter().chain(&u).position(|x| !x.is_finite()) {
            return Err(domain(format!("non-finite grid value at index {}", i % r.len())));
        }
        if r[0] < T::zero() {
            return Err(domain("radial grid must not contain negative radii"));
        }
        if let Some(i) = r.windows(2).position(|w| w[1] <= w[0]) {
            return Err(domain(format!("radial grid is not strictly increasing at index {}", i + 1)));
        }
        let s0 = match options.origin_power {
            Some(s) if s.is_finite() && s > -T::lit(0.5) => s,
            Some(s) => return Err(domain(format!("origin power must exceed -1/2 for a normalizable state, got {s}"))),
            None if r[0] == T::zero() => T::one(),
            None => return Err(domain("grid must start at r = 0 or declare its origin power")),
        };

        // v = u/r^s₀ on the points with r > 0
        let start = usize::from(r[0] == T::zero());
        let xs: Vec<T> = r[start..].to_vec();
        let vs: Vec<T> = r[start..].iter().zip(&u[start..]).map(|(&ri, &ui)| ui / ri.powf(s0)).collect();
        let v = Spline::new(xs, vs, options.interpolation)?;
        let end = r[r.len() - 1];

        let mut state = Self {
            r,
            u,
            s0,
            v,
            end,
            mean_radius: end,
            factor: T::one(),
            options,
            momentum: OnceLock::new(),
        };
        let q = state.knot_quadrature(&Quadrature::default());
        let d = Domain::finite(T::zero(), end)?;
        let norm = converged(q.integrate(|x| sq(state.reduced(x)), d)?)?;
        if !(norm > T::zero()) {
            return Err(domain("grid wavefunction vanishes identically"));
        }
        let factor = norm.sqrt().recip();
        state.factor = factor;
        state.u.iter_mut().for_each(|x| *x = *x * factor);
        state.v = state.v.scaled(factor);
        state.mean_radius = converged(q.integrate(|x| x * sq(state.reduced(x)), d)?)?;
        Ok(state)
    }

    /// Samples `f` at `n + 1` uniform points on `[0, r_max]`.
    pub fn tabulate(f: impl Fn(T) -> T, r_max: T, n: usize, options: GridOptions<T>) -> Result<Self> {
        if !(r_max > T::zero()) {
            return Err(domain("r_max must be positive"));
        }
        let r: Vec<T> = (0..=n).map(|i| r_max * T::count(i) / T::count(n)).collect();
        let u = r.iter().map(|&x| f(x)).collect();
        Self::new(r, u, options)
    }

    /// Parses the two-column text format.
    pub fn from_text(text: &str, options: GridOptions<T>) -> Result<Self> {
        let (r, u) = parse_radial_grid(text)?;
        Self::new(r, u, options)
    }

    /// Multiplier that was applied to the input values to normalize them.
    pub fn normalization_factor(&self) -> T {
        self.factor
    }

    pub fn grid(&self) -> &[T] {
        &self.r
    }

    /// Normalized sample values.
    pub fn values(&self) -> &[T] {
        &self.u
    }

    /// `∫u'²` with the spline derivative, plus a refinement error estimate
    /// from the same data on every other grid point.
    pub fn gradient_integral_with_estimate(&self, q: &Quadrature<T>) -> Result<(T, T)> {
        let full = self.raw_gradient_integral(q)?;
        let mut r = Vec::with_capacity(self.r.len() / 2 + 2);
        let mut u = Vec::with_capacity(self.r.len() / 2 + 2);
        for i in (0..self.r.len()).step_by(2) {
            r.push(self.r[i]);
            u.push(self.u[i]);
        }
        if r.last() != self.r.last() {
            r.push(self.end);
            u.push(self.u[self.u.len() - 1]);
        }
        let coarse = RadialGridState::new(
            r,
            u,
            GridOptions { origin_power: Some(self.s0), ..self.options.clone() },
        )?;
        let half = coarse.raw_gradient_integral(q)?;
        let order = match self.options.interpolation {
            Interpolation::Cubic => T::lit(15.0),
            Interpolation::Linear => T::lit(3.0),
        };
        Ok((full, (full - half).abs() / order))
    }

    /// Adds the grid points as breakpoints so that panels never straddle a
    /// spline knot (skipped for very large grids to stay within budget).
    fn knot_quadrature(&self, base: &Quadrature<T>) -> Quadrature<T> {
        let mut q = base.clone();
        if self.r.len() <= MAX_KNOT_BREAKPOINTS {
            q.breakpoints.extend(self.r.iter().copied());
        }
        q
    }

    fn raw_gradient_integral(&self, q: &Quadrature<T>) -> Result<T> {
        let d = Domain::finite(T::zero(), self.end)?;
        let q = self.knot_quadrature(q);
        converged(q.integrate(|x| sq(self.reduced_derivative(x)), d)?)
    }

    fn table(&self) -> Result<&MomentumTable<T>> {
        self.momentum
            .get_or_init(|| self.build_table())
            .as_ref()
            .map_err(Clone::clone)
    }

    fn build_table(&self) -> Result<MomentumTable<T>> {
        let q = self.knot_quadrature(&Quadrature::new(T::lit(1e-10), T::lit(1e-13)));
        let h_max = self.r.windows(2).map(|w| w[1] - w[0]).fold(T::zero(), T::max);
        let k_nyquist = T::PI() / h_max;
        let l = self.mean_radius;
        let dk = T::one() / (T::lit(64.0) * l);
        let k_switch = T::lit(8.0) / l;
        let growth = T::lit(1.01);
        let d = Domain::finite(T::zero(), self.end)?;

        let mut ks = vec![T::zero()];
        let mut amps = vec![T::zero()];
        loop {
            let last = ks[ks.len() - 1];
            if last >= k_nyquist {
                break;
            }
            let mut chunk = Vec::with_capacity(64);
            let mut k = last;
            while chunk.len() < 64 && k < k_nyquist {
                k = if k < k_switch { k + dk } else { k * growth };
                chunk.push(k.min(k_nyquist));
            }
            let values: Result<Vec<T>> =
                chunk.par_iter().map(|&k| sine_transform(|x| self.reduced(x), k, d, &q)).collect();
            let values = values?;
            let negligible = chunk
                .iter()
                .zip(&values)
                .all(|(&k, &a)| a * a * k * k * k * l * l < T::lit(1e-15));
            ks.extend(chunk);
            amps.extend(values);
            if negligible && ks[ks.len() - 1] > k_switch {
                break;
            }
        }
        let kmax = ks[ks.len() - 1];
        Ok(MomentumTable { amplitude: Spline::new(ks, amps, Interpolation::Cubic)?, kmax })
    }
}

impl<T: Real> SphericalState<T> for RadialGridState<T> {
    fn label(&self) -> String {
        self.options
            .label
            .clone()
            .unwrap_or_else(|| format!("radial-grid({} points, r_max={})", self.r.len(), self.end))
    }

    fn constants(&self) -> &PhysicalConstants<T> {
        &self.options.constants
    }

    fn length_scale(&self) -> T {
        self.mean_radius
    }

    fn reduced(&self, r: T) -> T {
        if !(r >= T::zero() && r <= self.end) {
            return T::zero();
        }
        if r == T::zero() {
            return if self.s0 > T::zero() { T::zero() } else { self.v.value(r) };
        }
        r.powf(self.s0) * self.v.value(r)
    }

    fn reduced_derivative(&self, r: T) -> T {
        if !(r >= T::zero() && r <= self.end) {
            return T::zero();
        }
        let (v, dv) = self.v.eval(r);
        if r == T::zero() && self.s0 > T::one() {
            return T::zero();
        }
        let lead = if self.s0 == T::one() { v } else { self.s0 * r.powf(self.s0 - T::one()) * v };
        lead + r.powf(self.s0) * dv
    }

    fn origin_power(&self) -> T {
        self.s0
    }

    fn radial_tail(&self) -> Behavior<T> {
        Behavior::Compact
    }

    fn radial_extent(&self) -> Option<T> {
        Some(self.end)
    }

    fn radial_breakpoints(&self) -> Vec<T> {
        if self.r.len() <= MAX_KNOT_BREAKPOINTS {
            self.r.clone()
        } else {
            Vec::new()
        }
    }

    fn wavenumber_amplitude(&self, k: T) -> Result<T> {
        if !(k >= T::zero() && k.is_finite()) {
            return Err(domain(format!("wavenumber must be finite and non-negative, got {k}")));
        }
        let t = self.table()?;
        Ok(if k > t.kmax { T::zero() } else { t.amplitude.value(k) })
    }

    fn wavenumber_tail(&self) -> Behavior<T> {
        Behavior::Compact
    }

    fn wavenumber_extent(&self) -> Option<T> {
        self.table().ok().map(|t| t.kmax)
    }

    /// Fails with [`Error::GridTooCoarse`] when halving the resolution moves the
    /// result by more than the tolerance allows.
    fn gradient_integral(&self, q: &Quadrature<T>) -> Result<T> {
        let (value, estimate) = self.gradient_integral_with_estimate(q)?;
        let tolerance = T::lit(GRADIENT_TOL) * value.abs();
        if estimate > tolerance {
            return Err(Error::GridTooCoarse {
                estimate: estimate.to_f64_lossy(),
                tolerance: tolerance.to_f64_lossy(),
            });
        }
        Ok(value)
    }
}

impl<T: Real> ContinuousState<T> for RadialGridState<T> {
    fn view(&self) -> StateView<'_, T> {
        StateView::Spherical(self)
    }
}

/// Reads whitespace-separated `r u` pairs, one per line. `#` starts a
/// comment; blank lines are skipped. Radii must be strictly increasing.
pub fn parse_radial_grid<T: Real>(text: &str) -> Result<(Vec<T>, Vec<T>)> {
    let mut r = Vec::new();
    let mut u = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::Parse { line, message: format!("expected 2 columns, found {}", fields.len()) });
        }
        let mut parsed = [0.0f64; 2];
        for (slot, field) in parsed.iter_mut().zip(&fields) {
            *slot = field
                .parse::<f64>()
                .map_err(|e| Error::Parse { line, message: format!("{field:?}: {e}") })?;
            if !slot.is_finite() {
                return Err(Error::Parse { line, message: format!("non-finite value {field}") });
            }
        }
        let (ri, ui) = (T::lit(parsed[0]), T::lit(parsed[1]));
        if let Some(&prev) = r.last() {
            if ri <= prev {
                return Err(Error::Parse { line, message: format!("radius {ri} does not exceed previous {prev}") });
            }
        }
        r.push(ri);
        u.push(ui);
    }
    if r.is_empty() {
        return Err(Error::Parse { line: 0, message: "no data rows".into() });
    }
    Ok((r, u))
}
