use crate::error::{domain, Result};
use crate::states::{ContinuousState, LineState, StateView};
use crate::{PhysicalConstants, Real};

fn normal_pdf<T: Real>(x: T, mean: T, sigma: T) -> T {
    let z = (x - mean) / sigma;
    (-(z * z) / T::lit(2.0)).exp() / (sigma * T::TAU().sqrt())
}

/// Minimum-uncertainty Gaussian packet
/// `ψ(x) = (2πσ²)^{−1/4} exp(−(x−x₀)²/(4σ²) + i p₀x/ħ)`.
///
/// Position variance is `σ²`, momentum variance `(ħ/(2σ))²`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianPacket<T> {
    x0: T,
    p0: T,
    sigma: T,
    constants: PhysicalConstants<T>,
}

impl<T: Real> GaussianPacket<T> {
    pub fn new(x0: T, p0: T, sigma: T, constants: PhysicalConstants<T>) -> Result<Self> {
        if !(x0.is_finite() && p0.is_finite()) {
            return Err(domain("packet centre must be finite"));
        }
        if !(sigma.is_finite() && sigma > T::zero()) {
            return Err(domain(format!("sigma must be finite and positive, got {sigma}")));
        }
        Ok(Self { x0, p0, sigma, constants })
    }

    pub fn sigma(&self) -> T {
        self.sigma
    }

    pub fn sigma_p(&self) -> T {
        self.constants.hbar / (T::lit(2.0) * self.sigma)
    }
}

impl<T: Real> LineState<T> for GaussianPacket<T> {
    fn label(&self) -> String {
        format!("gaussian(x0={}, p0={}, sigma={})", self.x0, self.p0, self.sigma)
    }
    fn constants(&self) -> &PhysicalConstants<T> {
        &self.constants
    }
    fn length_scale(&self) -> T {
        self.sigma
    }
    fn momentum_scale(&self) -> T {
        self.sigma_p()
    }
    fn position_density(&self, x: T) -> T {
        normal_pdf(x, self.x0, self.sigma)
    }
    fn momentum_density(&self, p: T) -> T {
        normal_pdf(p, self.p0, self.sigma_p())
    }
    fn gradient_density(&self, x: T) -> T {
        let s2 = self.sigma * self.sigma;
        let dx = x - self.x0;
        let k0 = self.p0 / self.constants.hbar;
        (dx * dx / (T::lit(4.0) * s2 * s2) + k0 * k0) * self.position_density(x)
    }
    fn mean_position(&self) -> T {
        self.x0
    }
    fn mean_momentum(&self) -> T {
        self.p0
    }
}

impl<T: Real> ContinuousState<T> for GaussianPacket<T> {
    fn view(&self) -> StateView<'_, T> {
        StateView::Line(self)
    }
}

/// Ground state of `H = p²/2m + mω²x²/2`, a centred Gaussian with
/// `σ_x = √(ħ/(2mω))`.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicOscillatorGround<T> {
    omega: T,
    packet: GaussianPacket<T>,
}

impl<T: Real> HarmonicOscillatorGround<T> {
    /// The mass is taken from `constants`.
    pub fn new(omega: T, constants: PhysicalConstants<T>) -> Result<Self> {
        if !(omega.is_finite() && omega > T::zero()) {
            return Err(domain(format!("omega must be finite and positive, got {omega}")));
        }
        let sigma = (constants.hbar / (T::lit(2.0) * constants.mass * omega)).sqrt();
        Ok(Self { omega, packet: GaussianPacket::new(T::zero(), T::zero(), sigma, constants)? })
    }

    /// `m = ω = ħ = 1`.
    pub fn natural() -> Self {
        Self::new(T::one(), PhysicalConstants::natural()).expect("valid parameters")
    }

    pub fn omega(&self) -> T {
        self.omega
    }

    pub fn sigma_x(&self) -> T {
        self.packet.sigma()
    }
}

impl<T: Real> LineState<T> for HarmonicOscillatorGround<T> {
    fn label(&self) -> String {
        format!("qho(mass={}, omega={})", self.packet.constants.mass, self.omega)
    }
    fn constants(&self) -> &PhysicalConstants<T> {
        self.packet.constants()
    }
    fn length_scale(&self) -> T {
        self.packet.length_scale()
    }
    fn momentum_scale(&self) -> T {
        self.packet.momentum_scale()
    }
    fn position_density(&self, x: T) -> T {
        self.packet.position_density(x)
    }
    fn momentum_density(&self, p: T) -> T {
        self.packet.momentum_density(p)
    }
    fn gradient_density(&self, x: T) -> T {
        self.packet.gradient_density(x)
    }
    fn mean_position(&self) -> T {
        T::zero()
    }
    fn mean_momentum(&self) -> T {
        T::zero()
    }
}

impl<T: Real> ContinuousState<T> for HarmonicOscillatorGround<T> {
    fn view(&self) -> StateView<'_, T> {
        StateView::Line(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{Domain, Quadrature};

    #[test]
    fn packet_means_and_variance() {
        let g = GaussianPacket::new(2.0, -1.5, 0.6, PhysicalConstants::<f64>::natural()).unwrap();
        let q = Quadrature::default();
        let d = Domain::infinite().with_scale(0.6);
        let mean = q.integrate(|x| x * g.position_density(x), d).unwrap().value;
        let var = q.integrate(|x| (x - 2.0).powi(2) * g.position_density(x), d).unwrap().value;
        assert!((mean - 2.0).abs() < 1e-9);
        assert!((var - 0.36).abs() < 1e-12);
        let pm = q.integrate(|p| p * g.momentum_density(p), Domain::infinite()).unwrap().value;
        assert!((pm + 1.5).abs() < 1e-9);
    }

    #[test]
    fn oscillator_width() {
        let c = PhysicalConstants::new(1.0, 2.0, 1.0).unwrap();
        let h = HarmonicOscillatorGround::<f64>::new(4.0, c).unwrap();
        assert!((h.sigma_x().powi(2) - 1.0 / 16.0).abs() < 1e-15);
    }
}
