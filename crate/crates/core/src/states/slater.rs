use crate::error::{domain, Result};
use crate::quad::Behavior;
use crate::scalar::factorial;
use crate::states::{ContinuousState, SphericalState, StateView};
use crate::{PhysicalConstants, Real};

/// Normalized Slater-type `s` state `u(r) = N rⁿ e^{−ζr}`,
/// `N = √((2ζ)^{2n+1}/(2n)!)`.
///
/// The wavenumber amplitude is closed-form:
/// `φ̃(k) = √(2/π)·N·n!·(ζ²+k²)^{−(n+1)/2}·sin((n+1)·atan(k/ζ))`.
#[derive(Debug, Clone, PartialEq)]
pub struct SlaterState<T> {
    n: u32,
    zeta: T,
    norm: T,
    constants: PhysicalConstants<T>,
}

impl<T: Real> SlaterState<T> {
    /// `n ≥ 1`, `ζ > 0` in inverse length units.
    pub fn new(n: u32, zeta: T, constants: PhysicalConstants<T>) -> Result<Self> {
        if n == 0 || n > 60 {
            return Err(domain(format!("Slater power must be in 1..=60, got {n}")));
        }
        if !(zeta.is_finite() && zeta > T::zero()) {
            return Err(domain(format!("Slater exponent must be finite and positive, got {zeta}")));
        }
        let two_zeta = T::lit(2.0) * zeta;
        let log_norm = (T::count(2 * n as usize + 1) * two_zeta.ln() - factorial::<T>(2 * n).ln()) / T::lit(2.0);
        Ok(Self { n, zeta, norm: log_norm.exp(), constants })
    }

    /// `u ∝ r⁴e^{−r}` in natural units: regular enough at the origin for a
    /// finite `⟨r^{−6}⟩`.
    pub fn r4test() -> Self {
        Self::new(4, T::one(), PhysicalConstants::natural()).expect("valid constants")
    }

    pub fn power(&self) -> u32 {
        self.n
    }

    pub fn zeta(&self) -> T {
        self.zeta
    }

    /// Order of the `k^{−2(m+1)}` tail of `φ̃²`: the leading `k^{−(n+1)}`
    /// term cancels when `n` is odd.
    fn tail_power(&self) -> T {
        let m = if self.n % 2 == 0 { self.n } else { self.n + 1 };
        -T::count(2 * (m as usize + 1))
    }
}

impl<T: Real> SphericalState<T> for SlaterState<T> {
    fn label(&self) -> String {
        format!("slater(n={}, zeta={})", self.n, self.zeta)
    }

    fn constants(&self) -> &PhysicalConstants<T> {
        &self.constants
    }

    fn length_scale(&self) -> T {
        T::one() / self.zeta
    }

    fn reduced(&self, r: T) -> T {
        self.norm * r.powi(self.n as i32) * (-self.zeta * r).exp()
    }

    fn reduced_derivative(&self, r: T) -> T {
        let n = T::count(self.n as usize);
        self.norm * (-self.zeta * r).exp() * r.powi(self.n as i32 - 1) * (n - self.zeta * r)
    }

    fn origin_power(&self) -> T {
        T::count(self.n as usize)
    }

    fn radial_tail(&self) -> Behavior<T> {
        Behavior::Exponential
    }

    fn wavenumber_amplitude(&self, k: T) -> Result<T> {
        if !(k >= T::zero() && k.is_finite()) {
            return Err(domain(format!("wavenumber must be finite and non-negative, got {k}")));
        }
        let n1 = T::count(self.n as usize + 1);
        let modulus = self.zeta.hypot(k).powf(-n1);
        let phase = if k <= self.zeta {
            (n1 * (k / self.zeta).atan()).sin()
        } else {
            // (n+1)·atan(k/ζ) = (n+1)π/2 − (n+1)·atan(ζ/k), kept exact for large k
            let small = n1 * (self.zeta / k).atan();
            match (self.n + 1) % 4 {
                0 => -small.sin(),
                1 => small.cos(),
                2 => small.sin(),
                _ => -small.cos(),
            }
        };
        let c = (T::lit(2.0) / T::PI()).sqrt() * self.norm * factorial::<T>(self.n);
        Ok(c * modulus * phase)
    }

    fn wavenumber_tail(&self) -> Behavior<T> {
        Behavior::Power(self.tail_power())
    }

    fn analytic_mean_radius(&self) -> Option<T> {
        Some(T::count(2 * self.n as usize + 1) / (T::lit(2.0) * self.zeta))
    }
}

impl<T: Real> ContinuousState<T> for SlaterState<T> {
    fn view(&self) -> StateView<'_, T> {
        StateView::Spherical(self)
    }
}

/// Hydrogen `1s` state, `ψ₁₀₀(r) = (π a₀³)^{−1/2} e^{−r/a₀}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HydrogenGroundState<T> {
    a0: T,
    inner: SlaterState<T>,
}

impl<T: Real> HydrogenGroundState<T> {
    /// Ground state with Bohr radius `a0` (which may differ from
    /// `constants.a0` for scaling studies).
    pub fn new(a0: T, constants: PhysicalConstants<T>) -> Result<Self> {
        if !(a0.is_finite() && a0 > T::zero()) {
            return Err(domain(format!("a0 must be finite and positive, got {a0}")));
        }
        Ok(Self { a0, inner: SlaterState::new(1, T::one() / a0, constants)? })
    }

    /// Uses the Bohr radius of `constants`.
    pub fn from_constants(constants: PhysicalConstants<T>) -> Self {
        Self::new(constants.a0, constants).expect("constants are validated")
    }

    pub fn natural() -> Self {
        Self::from_constants(PhysicalConstants::natural())
    }

    pub fn a0(&self) -> T {
        self.a0
    }

    /// `ψ₁₀₀(r)`.
    pub fn psi(&self, r: T) -> T {
        (T::PI() * self.a0.powi(3)).sqrt().recip() * (-r / self.a0).exp()
    }
}

impl<T: Real> SphericalState<T> for HydrogenGroundState<T> {
    fn label(&self) -> String {
        format!("hydrogen(a0={})", self.a0)
    }
    fn constants(&self) -> &PhysicalConstants<T> {
        self.inner.constants()
    }
    fn length_scale(&self) -> T {
        self.a0
    }
    fn reduced(&self, r: T) -> T {
        self.inner.reduced(r)
    }
    fn reduced_derivative(&self, r: T) -> T {
        self.inner.reduced_derivative(r)
    }
    fn origin_power(&self) -> T {
        T::one()
    }
    fn radial_tail(&self) -> Behavior<T> {
        Behavior::Exponential
    }
    fn wavenumber_amplitude(&self, k: T) -> Result<T> {
        self.inner.wavenumber_amplitude(k)
    }
    fn wavenumber_tail(&self) -> Behavior<T> {
        self.inner.wavenumber_tail()
    }
    fn analytic_mean_radius(&self) -> Option<T> {
        self.inner.analytic_mean_radius()
    }
}

impl<T: Real> ContinuousState<T> for HydrogenGroundState<T> {
    fn view(&self) -> StateView<'_, T> {
        StateView::Spherical(self)
    }
}
