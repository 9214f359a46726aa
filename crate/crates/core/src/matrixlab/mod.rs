//! Finite-dimensional Hermitian operator algebra: commutators, spectral
//! decomposition, operator modulus powers and expectation values.

mod jacobi;
mod matrix;

use num_complex::Complex;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use jacobi::{eigendecompose, MAX_SWEEPS};
pub use matrix::{CMatrix, MAX_DIM};

use crate::error::{domain, Error, Result};
use crate::rng::SplitMix64;
use crate::Real;
use matrix::{check_dims, check_max_dim};

/// Entrywise Hermiticity tolerance, relative to `max(1, ‖M‖_max)` (at least
/// `16ε` of the scalar).
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Expectations with an imaginary part above this are rejected.
pub const IMAGINARY_TOL: f64 = 1e-8;

fn c<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

fn scale_of<T: Real>(m: &CMatrix<T>) -> T {
    m.max_abs().max(T::one())
}

/// Hermitian matrix. Construction checks `M = M†` and then symmetrizes the
/// round-off away.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator<T> {
    m: CMatrix<T>,
}

impl<T: Real> HermitianOperator<T> {
    pub fn new(m: CMatrix<T>) -> Result<Self> {
        check_max_dim(m.dim())?;
        let residual = m.hermiticity_residual();
        if !(residual <= T::lit(HERMITIAN_TOL).max(T::lit(16.0) * T::epsilon()) * scale_of(&m)) {
            return Err(Error::NotHermitian { residual: residual.to_f64_lossy() });
        }
        let half = T::lit(0.5);
        let sym = CMatrix::from_fn(m.dim(), |i, j| {
            if i == j {
                c(m[(i, i)].re, T::zero())
            } else {
                (m[(i, j)] + m[(j, i)].conj()) * half
            }
        });
        Ok(Self { m: sym })
    }

    pub fn diagonal(values: &[T]) -> Result<Self> {
        Self::new(CMatrix::diagonal(values))
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::new(CMatrix::identity(dim))
    }

    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.m
    }

    pub fn scale(&self, factor: T) -> Self {
        Self { m: self.m.scale_real(factor) }
    }
}

impl<T: Real> Serialize for HermitianOperator<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.m.serialize(s)
    }
}

impl<'de, T: Real> Deserialize<'de> for HermitianOperator<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        HermitianOperator::new(CMatrix::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// Unit-norm state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteState<T> {
    amps: Vec<Complex<T>>,
}

impl<T: Real> FiniteState<T> {
    /// Requires `‖ψ‖ = 1` within `1e-12`.
    pub fn new(amps: Vec<Complex<T>>) -> Result<Self> {
        check_max_dim(amps.len())?;
        let norm = norm(&amps);
        if !((norm - T::one()).abs() <= T::lit(1e-12).max(T::lit(8.0) * T::epsilon())) {
            return Err(domain(format!("state norm is {norm}, expected 1")));
        }
        Ok(Self { amps })
    }

    /// Divides by the norm; fails for the zero vector.
    pub fn normalized(amps: Vec<Complex<T>>) -> Result<Self> {
        check_max_dim(amps.len())?;
        let n = norm(&amps);
        if !(n > T::zero() && n.is_finite()) {
            return Err(domain("cannot normalize a zero or non-finite vector"));
        }
        Ok(Self { amps: amps.into_iter().map(|a| a / n).collect() })
    }

    /// Real amplitudes, normalized.
    pub fn from_real(values: &[T]) -> Result<Self> {
        Self::normalized(values.iter().map(|&v| c(v, T::zero())).collect())
    }

    /// `k`-th basis vector.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(domain(format!("basis index {k} out of range for dimension {dim}")));
        }
        let mut amps = vec![c(T::zero(), T::zero()); dim];
        amps[k] = c(T::one(), T::zero());
        Self::new(amps)
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }
}

fn norm<T: Real>(v: &[Complex<T>]) -> T {
    v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

#[derive(Serialize, Deserialize)]
struct StateJson {
    dim: usize,
    amplitudes: Vec<[f64; 2]>,
}

impl<T: Real> Serialize for FiniteState<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        StateJson {
            dim: self.dim(),
            amplitudes: self.amps.iter().map(|z| [z.re.to_f64_lossy(), z.im.to_f64_lossy()]).collect(),
        }
        .serialize(s)
    }
}

impl<'de, T: Real> Deserialize<'de> for FiniteState<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = StateJson::deserialize(d)?;
        if j.amplitudes.len() != j.dim {
            return Err(serde::de::Error::custom(format!(
                "dim is {} but {} amplitudes given",
                j.dim,
                j.amplitudes.len()
            )));
        }
        let amps = j.amplitudes.iter().map(|&[re, im]| c(T::lit(re), T::lit(im))).collect();
        FiniteState::new(amps).map_err(serde::de::Error::custom)
    }
}

/// `M = U·diag(λ)·U†` with ascending `λ` and unitary `U` (eigenvectors in
/// columns).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition<T> {
    pub eigenvalues: Vec<T>,
    pub eigenvectors: CMatrix<T>,
    /// Jacobi sweeps used.
    pub sweeps: usize,
}

impl<T: Real> SpectralDecomposition<T> {
    /// `U·diag(f(λ))·U†`.
    pub fn apply(&self, f: impl Fn(T) -> T) -> CMatrix<T> {
        let n = self.eigenvalues.len();
        let u = &self.eigenvectors;
        let fl: Vec<T> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        CMatrix::from_fn(n, |i, j| {
            (0..n).fold(c(T::zero(), T::zero()), |acc, k| acc + u[(i, k)] * u[(j, k)].conj() * fl[k])
        })
    }

    pub fn reconstruct(&self) -> CMatrix<T> {
        self.apply(|l| l)
    }

    /// `|⟨uᵢ|ψ⟩|²` for each eigenvector.
    pub fn weights(&self, psi: &FiniteState<T>) -> Result<Vec<T>> {
        let n = self.eigenvalues.len();
        check_dims(n, psi.dim())?;
        let u = &self.eigenvectors;
        Ok((0..n)
            .map(|k| {
                (0..n)
                    .fold(c(T::zero(), T::zero()), |acc, i| acc + u[(i, k)].conj() * psi.amps[i])
                    .norm_sqr()
            })
            .collect())
    }

    /// `max |U†U − I|`.
    pub fn unitarity_residual(&self) -> T {
        let u = &self.eigenvectors;
        let g = &u.adjoint() * u;
        g.max_abs_diff(&CMatrix::identity(u.dim())).expect("square")
    }
}

/// `[A, B] = AB − BA`, anti-Hermitian for Hermitian inputs.
pub fn commutator<T: Real>(a: &HermitianOperator<T>, b: &HermitianOperator<T>) -> Result<CMatrix<T>> {
    check_dims(a.dim(), b.dim())?;
    (a.matrix() * b.matrix()).try_sub(&(b.matrix() * a.matrix()))
}

/// `{A, B} = AB + BA`.
pub fn anticommutator<T: Real>(a: &HermitianOperator<T>, b: &HermitianOperator<T>) -> Result<HermitianOperator<T>> {
    check_dims(a.dim(), b.dim())?;
    HermitianOperator::new((a.matrix() * b.matrix()).try_add(&(b.matrix() * a.matrix()))?)
}

/// `|M|^s` by spectral calculus, `|M| = (M†M)^{1/2}`.
///
/// Hermitian `M` is decomposed directly (`U|Λ|^sU†`); anti-Hermitian `M` via
/// the Hermitian `iM`; anything else via `(M†M)^{s/2}`.
pub fn operator_abs_power<T: Real>(m: &CMatrix<T>, s: T) -> Result<HermitianOperator<T>> {
    if !(s > T::zero() && s.is_finite()) {
        return Err(domain(format!("power must be positive and finite, got {s}")));
    }
    check_max_dim(m.dim())?;
    let tol = T::lit(HERMITIAN_TOL).max(T::lit(16.0) * T::epsilon()) * scale_of(m);
    let power = |x: T| x.abs().powf(s);
    let out = if m.hermiticity_residual() <= tol {
        eigendecompose(&HermitianOperator::new(m.clone())?)?.apply(power)
    } else if m.anti_hermiticity_residual() <= tol {
        let h = m.scale(c(T::zero(), T::one()));
        eigendecompose(&HermitianOperator::new(h)?)?.apply(power)
    } else {
        let gram = HermitianOperator::new(&m.adjoint() * m)?;
        let half = s / T::lit(2.0);
        eigendecompose(&gram)?.apply(|x| x.max(T::zero()).powf(half))
    };
    HermitianOperator::new(out)
}

/// `⟨ψ|M|ψ⟩` for any square matrix, as a complex number.
pub fn expectation_complex<T: Real>(m: &CMatrix<T>, psi: &FiniteState<T>) -> Result<Complex<T>> {
    let mv = m.mul_vec(&psi.amps)?;
    Ok(psi.amps.iter().zip(&mv).fold(c(T::zero(), T::zero()), |acc, (&a, &b)| acc + a.conj() * b))
}

/// `⟨ψ|M|ψ⟩`; an imaginary part above `1e-8·max(1, ‖M‖_max)` is an error.
pub fn expectation<T: Real>(m: &HermitianOperator<T>, psi: &FiniteState<T>) -> Result<T> {
    let z = expectation_complex(m.matrix(), psi)?;
    if !(z.im.abs() <= T::lit(IMAGINARY_TOL).max(T::lit(64.0) * T::epsilon()) * scale_of(m.matrix())) {
        return Err(Error::ImaginaryExpectation { residue: z.im.to_f64_lossy() });
    }
    Ok(z.re)
}

/// `A − ⟨A⟩_ψ·I`.
pub fn central_shift<T: Real>(a: &HermitianOperator<T>, psi: &FiniteState<T>) -> Result<HermitianOperator<T>> {
    let mean = expectation(a, psi)?;
    let shifted = a.matrix().try_sub(&CMatrix::identity(a.dim()).scale_real(mean))?;
    HermitianOperator::new(shifted)
}

/// `⟨ψ| |A − ⟨A⟩|^s |ψ⟩ = Σᵢ wᵢ|λᵢ − ⟨A⟩|^s` with spectral weights `wᵢ`.
pub fn abs_central_moment_finite<T: Real>(a: &HermitianOperator<T>, psi: &FiniteState<T>, s: T) -> Result<T> {
    if !(s > T::zero() && s.is_finite()) {
        return Err(domain(format!("order must be positive and finite, got {s}")));
    }
    check_dims(a.dim(), psi.dim())?;
    let d = eigendecompose(a)?;
    let w = d.weights(psi)?;
    let mean: T = w.iter().zip(&d.eigenvalues).map(|(&wi, &l)| wi * l).sum();
    Ok(w.iter().zip(&d.eigenvalues).map(|(&wi, &l)| wi * (l - mean).abs().powf(s)).sum())
}

/// Pauli matrices `σx, σy, σz`.
pub fn pauli<T: Real>() -> [HermitianOperator<T>; 3] {
    let o = T::zero();
    let l = T::one();
    let mk = |rows: [[Complex<T>; 2]; 2]| {
        HermitianOperator::new(CMatrix::from_rows(&[rows[0].to_vec(), rows[1].to_vec()]).expect("2×2"))
            .expect("Pauli matrices are Hermitian")
    };
    [
        mk([[c(o, o), c(l, o)], [c(l, o), c(o, o)]]),
        mk([[c(o, o), c(o, -l)], [c(o, l), c(o, o)]]),
        mk([[c(l, o), c(o, o)], [c(o, o), c(-l, o)]]),
    ]
}

/// Position and momentum truncated to the lowest `dim` oscillator levels:
/// `X = √(ħ/2mω)(a + a†)`, `P = i√(ħmω/2)(a† − a)`.
///
/// `[X, P] = iħ·diag(1, …, 1, 1 − dim)`: the canonical commutator holds
/// everywhere except the last basis state.
pub fn truncated_canonical_pair<T: Real>(
    dim: usize,
    hbar: T,
    mass: T,
    omega: T,
) -> Result<(HermitianOperator<T>, HermitianOperator<T>)> {
    check_max_dim(dim)?;
    for (name, v) in [("hbar", hbar), ("mass", mass), ("omega", omega)] {
        if !(v > T::zero() && v.is_finite()) {
            return Err(domain(format!("{name} must be positive and finite, got {v}")));
        }
    }
    let xs = (hbar / (T::lit(2.0) * mass * omega)).sqrt();
    let ps = (hbar * mass * omega / T::lit(2.0)).sqrt();
    // a[n−1, n] = √n
    let ladder = |i: usize, j: usize| if j == i + 1 { T::count(j).sqrt() } else { T::zero() };
    let x = CMatrix::from_fn(dim, |i, j| c(xs * (ladder(i, j) + ladder(j, i)), T::zero()));
    let p = CMatrix::from_fn(dim, |i, j| c(T::zero(), ps * (ladder(j, i) - ladder(i, j))));
    Ok((HermitianOperator::new(x)?, HermitianOperator::new(p)?))
}

/// Random Hermitian matrix with entries uniform in `[−1, 1)` (real diagonal).
/// Entries are drawn row by row over the upper triangle, real part first.
pub fn random_hermitian<T: Real>(dim: usize, rng: &mut SplitMix64) -> Result<HermitianOperator<T>> {
    check_max_dim(dim)?;
    let mut m = CMatrix::zeros(dim);
    for i in 0..dim {
        m[(i, i)] = c(rng.uniform(-T::one(), T::one()), T::zero());
        for j in i + 1..dim {
            let z = c(rng.uniform(-T::one(), T::one()), rng.uniform(-T::one(), T::one()));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    HermitianOperator::new(m)
}

/// Random normalized state with components uniform in `[−1, 1)²`.
pub fn random_state<T: Real>(dim: usize, rng: &mut SplitMix64) -> Result<FiniteState<T>> {
    let amps = (0..dim)
        .map(|_| c(rng.uniform(-T::one(), T::one()), rng.uniform(-T::one(), T::one())))
        .collect();
    FiniteState::normalized(amps)
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = HermitianOperator<f64>;

    fn ci(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn pauli_x_spectrum() {
        let [sx, _, _] = pauli::<f64>();
        let d = eigendecompose(&sx).unwrap();
        assert!((d.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!((d.eigenvalues[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn diagonal_spectrum_and_permutation_vectors() {
        let d = eigendecompose(&M::diagonal(&[3.0, -2.0, 7.0]).unwrap()).unwrap();
        assert_eq!(d.eigenvalues, vec![-2.0, 3.0, 7.0]);
        let u = &d.eigenvectors;
        assert_eq!(u[(1, 0)], ci(1.0, 0.0));
        assert_eq!(u[(0, 1)], ci(1.0, 0.0));
        assert_eq!(u[(2, 2)], ci(1.0, 0.0));
        assert_eq!(d.sweeps, 0);
    }

    #[test]
    fn random_reconstruction() {
        let mut rng = SplitMix64::new(16);
        let m: M = random_hermitian(16, &mut rng).unwrap();
        let d = eigendecompose(&m).unwrap();
        let res = d.reconstruct().max_abs_diff(m.matrix()).unwrap();
        assert!(res <= 1e-10 * m.matrix().max_abs(), "{res}");
        assert!(d.unitarity_residual() < 1e-10);
        assert!(d.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        for k in 0..16 {
            let first = (0..16).map(|i| d.eigenvectors[(i, k)]).find(|z| z.norm() > 1e-6).unwrap();
            assert!(first.im == 0.0 && first.re > 0.0);
        }
    }

    #[test]
    fn commutator_examples() {
        let [sx, sy, sz] = pauli::<f64>();
        let c = commutator(&sx, &sy).unwrap();
        let want = sz.matrix().scale(ci(0.0, 2.0));
        assert!(c.max_abs_diff(&want).unwrap() < 1e-15);
        assert_eq!(commutator(&sx, &sx).unwrap().max_abs(), 0.0);
        assert!(matches!(commutator(&sx, &M::identity(3).unwrap()), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn truncated_pair_commutator() {
        let n = 12;
        let (x, p) = truncated_canonical_pair(n, 1.0, 1.0, 1.0).unwrap();
        let c = commutator(&x, &p).unwrap();
        for i in 0..n {
            for j in 0..n {
                let want = if i != j {
                    ci(0.0, 0.0)
                } else if i < n - 1 {
                    ci(0.0, 1.0)
                } else {
                    ci(0.0, 1.0 - n as f64)
                };
                assert!((c[(i, j)] - want).norm() < 1e-12, "({i},{j}) {}", c[(i, j)]);
            }
        }
    }

    #[test]
    fn anticommutator_examples() {
        let [sx, sy, _] = pauli::<f64>();
        assert!(anticommutator(&sx, &sy).unwrap().matrix().max_abs() < 1e-15);
        let id = M::identity(3).unwrap();
        let two = anticommutator(&id, &id).unwrap();
        assert_eq!(two.matrix(), &CMatrix::identity(3).scale_real(2.0));
    }

    #[test]
    fn abs_power_examples() {
        let m = CMatrix::diagonal(&[-2.0, 3.0]);
        let r = operator_abs_power(&m, 0.5).unwrap();
        assert!(r.matrix().max_abs_diff(&CMatrix::diagonal(&[2f64.sqrt(), 3f64.sqrt()])).unwrap() < 1e-14);

        let [sx, sy, _] = pauli::<f64>();
        let c = commutator(&sx, &sy).unwrap();
        let r = operator_abs_power(&c, 1.0).unwrap();
        assert!(r.matrix().max_abs_diff(&CMatrix::identity(2).scale_real(2.0)).unwrap() < 1e-14);

        let mut rng = SplitMix64::new(3);
        let h: M = random_hermitian(9, &mut rng).unwrap();
        let sq = operator_abs_power(h.matrix(), 2.0).unwrap();
        assert!(sq.matrix().max_abs_diff(&(h.matrix() * h.matrix())).unwrap() < 1e-10);
    }

    #[test]
    fn abs_power_of_general_matrix_is_singular_value_calculus() {
        // upper-triangular Jordan-like block: singular values 2 and 0.5
        let m = CMatrix::from_rows(&[vec![ci(1.0, 0.0), ci(1.5, 0.0)], vec![ci(0.0, 0.0), ci(1.0, 0.0)]]).unwrap();
        let r = operator_abs_power(&m, 2.0).unwrap();
        let gram = &m.adjoint() * &m;
        assert!(r.matrix().max_abs_diff(&gram).unwrap() < 1e-12);
    }

    #[test]
    fn expectation_examples() {
        let [_, _, sz] = pauli::<f64>();
        let up = FiniteState::basis(2, 0).unwrap();
        assert_eq!(expectation(&sz, &up).unwrap(), 1.0);
        let mut rng = SplitMix64::new(5);
        let psi = random_state::<f64>(7, &mut rng).unwrap();
        assert!((expectation(&M::identity(7).unwrap(), &psi).unwrap() - 1.0).abs() < 1e-14);
        let m: M = random_hermitian(7, &mut rng).unwrap();
        let d = eigendecompose(&m).unwrap();
        let w = d.weights(&psi).unwrap();
        let spectral: f64 = w.iter().zip(&d.eigenvalues).map(|(a, b)| a * b).sum();
        assert!((expectation(&m, &psi).unwrap() - spectral).abs() < 1e-10);
    }

    #[test]
    fn central_shift_examples() {
        let [_, _, sz] = pauli::<f64>();
        let up = FiniteState::basis(2, 0).unwrap();
        let shifted = central_shift(&sz, &up).unwrap();
        assert_eq!(shifted.matrix(), &CMatrix::diagonal(&[0.0, -2.0]));
        let id = M::identity(2).unwrap();
        assert_eq!(central_shift(&id, &up).unwrap().matrix().max_abs(), 0.0);
        let mut rng = SplitMix64::new(8);
        let a: M = random_hermitian(6, &mut rng).unwrap();
        let psi = random_state(6, &mut rng).unwrap();
        assert!(expectation(&central_shift(&a, &psi).unwrap(), &psi).unwrap().abs() < 1e-10);
    }

    #[test]
    fn abs_central_moment_examples() {
        let [_, _, sz] = pauli::<f64>();
        let plus = FiniteState::from_real(&[1.0, 1.0]).unwrap();
        assert!((abs_central_moment_finite(&sz, &plus, 1.0).unwrap() - 1.0).abs() < 1e-14);

        let mut rng = SplitMix64::new(11);
        let a: M = random_hermitian(8, &mut rng).unwrap();
        let psi = random_state(8, &mut rng).unwrap();
        let mean = expectation(&a, &psi).unwrap();
        let second = expectation(&HermitianOperator::new(a.matrix() * a.matrix()).unwrap(), &psi).unwrap();
        let var = abs_central_moment_finite(&a, &psi, 2.0).unwrap();
        assert!((var - (second - mean * mean)).abs() < 1e-10);

        // brute force fourth moment
        let d = eigendecompose(&a).unwrap();
        let w = d.weights(&psi).unwrap();
        let mu: f64 = w.iter().zip(&d.eigenvalues).map(|(w, l)| w * l).sum();
        let brute: f64 = w.iter().zip(&d.eigenvalues).map(|(w, l)| w * (l - mu).powi(4)).sum();
        assert!((abs_central_moment_finite(&a, &psi, 4.0).unwrap() - brute).abs() < 1e-10);
        // operator route agrees
        let op = operator_abs_power(central_shift(&a, &psi).unwrap().matrix(), 4.0).unwrap();
        assert!((expectation(&op, &psi).unwrap() - brute).abs() < 1e-10);
    }

    #[test]
    fn validation() {
        let m = CMatrix::from_rows(&[vec![ci(0.0, 0.0), ci(1.0, 0.0)], vec![ci(2.0, 0.0), ci(0.0, 0.0)]]).unwrap();
        assert!(matches!(HermitianOperator::new(m), Err(Error::NotHermitian { .. })));
        assert!(FiniteState::new(vec![ci(1.0, 0.0), ci(1.0, 0.0)]).is_err());
        assert!(FiniteState::<f64>::normalized(vec![ci(0.0, 0.0)]).is_err());
        assert!(HermitianOperator::<f64>::identity(MAX_DIM + 1).is_err());
        let non_herm = CMatrix::from_rows(&[vec![ci(0.0, 1.0)]]).unwrap();
        let psi = FiniteState::basis(1, 0).unwrap();
        assert!(expectation_complex(&non_herm, &psi).unwrap().im == 1.0);
    }

    #[test]
    fn json_round_trip() {
        let [_, sy, _] = pauli::<f64>();
        let text = serde_json::to_string(&sy).unwrap();
        assert_eq!(text, r#"{"dim":2,"entries":[[0.0,0.0],[0.0,-1.0],[0.0,1.0],[0.0,0.0]]}"#);
        let back: M = serde_json::from_str(&text).unwrap();
        assert_eq!(back, sy);
        let psi = FiniteState::from_real(&[3.0, 4.0]).unwrap();
        let back: FiniteState<f64> = serde_json::from_str(&serde_json::to_string(&psi).unwrap()).unwrap();
        assert_eq!(back, psi);
        assert!(serde_json::from_str::<M>(r#"{"dim":2,"entries":[[0,0]]}"#).is_err());
        assert!(serde_json::from_str::<M>(r#"{"dim":1,"entries":[[0,1]]}"#).is_err());
    }

    #[test]
    fn f32_eigensolver() {
        let mut rng = SplitMix64::new(1);
        let m: HermitianOperator<f32> = random_hermitian(6, &mut rng).unwrap();
        let d = eigendecompose(&m).unwrap();
        assert!(d.reconstruct().max_abs_diff(m.matrix()).unwrap() < 1e-5);
    }
}
