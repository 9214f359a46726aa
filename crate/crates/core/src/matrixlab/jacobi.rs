use num_complex::Complex;

use crate::error::{Error, Result};
use crate::matrixlab::{CMatrix, HermitianOperator, SpectralDecomposition};
use crate::Real;

/// Sweep cap for the cyclic Jacobi iteration.
pub const MAX_SWEEPS: usize = 100;

/// Cyclic complex Jacobi eigensolver.
///
/// Each rotation zeroes `a_pq` with `U = D·R`: the phase `D = diag(1, e^{−iφ})`
/// (`φ = arg a_pq`) makes the 2×2 block real symmetric and the real rotation
/// `R` diagonalizes it. Iterates until the off-diagonal Frobenius norm is at
/// most `1e-14·‖M‖_F` (or `4ε` for wider-epsilon scalars).
///
/// Output is deterministic: eigenvalues ascending, each eigenvector's first
/// non-negligible component made real and positive.
pub fn eigendecompose<T: Real>(op: &HermitianOperator<T>) -> Result<SpectralDecomposition<T>> {
    let mut a = op.matrix().clone();
    let n = a.dim();
    let mut v = CMatrix::identity(n);
    let threshold = T::lit(1e-14).max(T::lit(4.0) * T::epsilon()) * a.frobenius();
    let zero = Complex::new(T::zero(), T::zero());

    let mut off = off_diagonal_norm(&a);
    let mut sweeps = 0;
    while off > threshold {
        if sweeps == MAX_SWEEPS {
            return Err(Error::EigenNotConverged { sweeps, residual: off.to_f64_lossy() });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let c = a[(p, q)];
                let modulus = c.norm();
                if modulus == T::zero() {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                // negligible against both diagonal entries: drop it
                let g = T::lit(100.0) * modulus;
                if sweeps > 4 && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
                    a[(p, q)] = zero;
                    a[(q, p)] = zero;
                    continue;
                }
                let phase = c / modulus; // e^{iφ}
                let theta = (aqq - app) / (T::lit(2.0) * modulus);
                let t = {
                    let sign = if theta < T::zero() { -T::one() } else { T::one() };
                    sign / (theta.abs() + (theta * theta + T::one()).sqrt())
                };
                let cs = (t * t + T::one()).sqrt().recip();
                let sn = t * cs;
                // U = [[cs, sn], [−sn·e^{−iφ}, cs·e^{−iφ}]]
                let u_pp = Complex::new(cs, T::zero());
                let u_pq = Complex::new(sn, T::zero());
                let u_qp = phase.conj() * (-sn);
                let u_qq = phase.conj() * cs;

                // A ← A·U (columns p, q)
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * u_pp + akq * u_qp;
                    a[(k, q)] = akp * u_pq + akq * u_qq;
                }
                // A ← U†·A (rows p, q)
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
                    a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
                }
                a[(p, q)] = zero;
                a[(q, p)] = zero;
                a[(p, p)] = Complex::new(app - t * modulus, T::zero());
                a[(q, q)] = Complex::new(aqq + t * modulus, T::zero());
                // V ← V·U
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * u_pp + vkq * u_qp;
                    v[(k, q)] = vkp * u_pq + vkq * u_qq;
                }
            }
        }
        off = off_diagonal_norm(&a);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap_or(std::cmp::Ordering::Equal));
    let eigenvalues: Vec<T> = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = CMatrix::zeros(n);
    for (col, &src) in order.iter().enumerate() {
        let largest = (0..n).map(|k| v[(k, src)].norm()).fold(T::zero(), T::max);
        let pivot = (0..n).find(|&k| v[(k, src)].norm() > T::lit(1e-6) * largest).unwrap_or(0);
        let z = v[(pivot, src)];
        let fix = if z.norm() > T::zero() { z.conj() / z.norm() } else { Complex::new(T::one(), T::zero()) };
        for k in 0..n {
            vectors[(k, col)] = v[(k, src)] * fix;
        }
        vectors[(pivot, col)] = Complex::new(vectors[(pivot, col)].norm(), T::zero());
    }
    Ok(SpectralDecomposition { eigenvalues, eigenvectors: vectors, sweeps })
}

fn off_diagonal_norm<T: Real>(a: &CMatrix<T>) -> T {
    let n = a.dim();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s = s + a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}
