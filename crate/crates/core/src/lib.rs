//! Generalized absolute central moments of quantum states and numerical
//! checks of Hölder-type, any-order uncertainty inequalities.

pub mod centralfield;
pub mod domain;
pub mod error;
pub mod inequalities;
pub mod matrixlab;
pub mod moments;
pub mod quad;
pub mod rng;
pub mod scalar;
pub mod states;

pub use domain::{
    make_exponents, young_gap, Direction, DivergenceSite, Exponents, MomentStatus, MomentValue, Param,
    PhysicalConstants, SlackPolicy, Verdict,
};
pub use error::{Error, Result};
pub use scalar::Real;

pub type ExponentsF64 = Exponents<f64>;
pub type ExponentsF32 = Exponents<f32>;
pub type VerdictF64 = Verdict<f64>;
pub type VerdictF32 = Verdict<f32>;
pub type MomentValueF64 = MomentValue<f64>;
pub type MomentValueF32 = MomentValue<f32>;
pub type ConstantsF64 = PhysicalConstants<f64>;
pub type ConstantsF32 = PhysicalConstants<f32>;
pub type QuadratureF64 = quad::Quadrature<f64>;
pub type QuadratureF32 = quad::Quadrature<f32>;
pub type HydrogenF64 = states::HydrogenGroundState<f64>;
pub type HydrogenF32 = states::HydrogenGroundState<f32>;
pub type SlaterF64 = states::SlaterState<f64>;
pub type SlaterF32 = states::SlaterState<f32>;
pub type GaussianF64 = states::GaussianPacket<f64>;
pub type GaussianF32 = states::GaussianPacket<f32>;
pub type OscillatorF64 = states::HarmonicOscillatorGround<f64>;
pub type OscillatorF32 = states::HarmonicOscillatorGround<f32>;
pub type RadialGridF64 = states::RadialGridState<f64>;
pub type RadialGridF32 = states::RadialGridState<f32>;
pub type HermitianF64 = matrixlab::HermitianOperator<f64>;
pub type HermitianF32 = matrixlab::HermitianOperator<f32>;
pub type FiniteStateF64 = matrixlab::FiniteState<f64>;
pub type FiniteStateF32 = matrixlab::FiniteState<f32>;
pub type MatrixF64 = matrixlab::CMatrix<f64>;
pub type MatrixF32 = matrixlab::CMatrix<f32>;
