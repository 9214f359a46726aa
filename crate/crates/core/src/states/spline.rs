//! Piecewise interpolation on strictly increasing abscissae.

use crate::error::{domain, Result};
use crate::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interpolation {
    Linear,
    /// C² cubic spline with end slopes clamped to the one-sided four-point
    /// derivative of the data.
    Cubic,
}

#[derive(Debug, Clone)]
pub(crate) struct Spline<T> {
    x: Vec<T>,
    y: Vec<T>,
    /// Second derivatives at the knots (all zero for linear).
    m: Vec<T>,
    kind: Interpolation,
}

impl<T: Real> Spline<T> {
    pub fn new(x: Vec<T>, y: Vec<T>, kind: Interpolation) -> Result<Self> {
        let n = x.len();
        if n != y.len() {
            return Err(domain("abscissae and ordinates differ in length"));
        }
        let min = if kind == Interpolation::Cubic { 4 } else { 2 };
        if n < min {
            return Err(domain(format!("need at least {min} points, got {n}")));
        }
        if x.windows(2).any(|w| w[1] <= w[0]) {
            return Err(domain("abscissae must be strictly increasing"));
        }
        let m = match kind {
            Interpolation::Linear => vec![T::zero(); n],
            Interpolation::Cubic => {
                let d0 = lagrange_slope(&x[..4], &y[..4], x[0]);
                let dn = lagrange_slope(&x[n - 4..], &y[n - 4..], x[n - 1]);
                clamped_second_derivatives(&x, &y, d0, dn)
            }
        };
        Ok(Self { x, y, m, kind })
    }

    fn interval(&self, t: T) -> usize {
        let n = self.x.len();
        match self.x.binary_search_by(|v| v.partial_cmp(&t).unwrap_or(std::cmp::Ordering::Less)) {
            Ok(i) => i.min(n - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(n - 2),
        }
    }

    /// Value and first derivative. Outside the knot range the end piece is
    /// extended.
    pub fn eval(&self, t: T) -> (T, T) {
        let i = self.interval(t);
        let (x0, x1) = (self.x[i], self.x[i + 1]);
        let (y0, y1) = (self.y[i], self.y[i + 1]);
        let h = x1 - x0;
        match self.kind {
            Interpolation::Linear => {
                let slope = (y1 - y0) / h;
                (y0 + slope * (t - x0), slope)
            }
            Interpolation::Cubic => {
                let six = T::lit(6.0);
                let (m0, m1) = (self.m[i], self.m[i + 1]);
                let a = (x1 - t) / h;
                let b = (t - x0) / h;
                let value = a * y0 + b * y1 + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / six;
                let slope = (y1 - y0) / h
                    - (T::lit(3.0) * a * a - T::one()) * h * m0 / six
                    + (T::lit(3.0) * b * b - T::one()) * h * m1 / six;
                (value, slope)
            }
        }
    }

    pub fn value(&self, t: T) -> T {
        self.eval(t).0
    }

    /// The same spline with every ordinate multiplied by `c`.
    pub fn scaled(mut self, c: T) -> Self {
        self.y.iter_mut().for_each(|v| *v = *v * c);
        self.m.iter_mut().for_each(|v| *v = *v * c);
        self
    }
}

/// Derivative at `at` of the interpolating polynomial through four points.
fn lagrange_slope<T: Real>(x: &[T], y: &[T], at: T) -> T {
    let n = x.len();
    let mut total = T::zero();
    for j in 0..n {
        let mut denom = T::one();
        for m in 0..n {
            if m != j {
                denom = denom * (x[j] - x[m]);
            }
        }
        // d/dx Π_{m≠j}(x − x_m)
        let mut num = T::zero();
        for i in 0..n {
            if i == j {
                continue;
            }
            let mut prod = T::one();
            for m in 0..n {
                if m != j && m != i {
                    prod = prod * (at - x[m]);
                }
            }
            num = num + prod;
        }
        total = total + y[j] * num / denom;
    }
    total
}

fn clamped_second_derivatives<T: Real>(x: &[T], y: &[T], d0: T, dn: T) -> Vec<T> {
    let n = x.len();
    let six = T::lit(6.0);
    let two = T::lit(2.0);
    // tridiagonal system, Thomas algorithm
    let mut sub = vec![T::zero(); n];
    let mut diag = vec![T::zero(); n];
    let mut sup = vec![T::zero(); n];
    let mut rhs = vec![T::zero(); n];

    let h0 = x[1] - x[0];
    diag[0] = two * h0;
    sup[0] = h0;
    rhs[0] = six * ((y[1] - y[0]) / h0 - d0);
    for i in 1..n - 1 {
        let hl = x[i] - x[i - 1];
        let hr = x[i + 1] - x[i];
        sub[i] = hl;
        diag[i] = two * (hl + hr);
        sup[i] = hr;
        rhs[i] = six * ((y[i + 1] - y[i]) / hr - (y[i] - y[i - 1]) / hl);
    }
    let hn = x[n - 1] - x[n - 2];
    sub[n - 1] = hn;
    diag[n - 1] = two * hn;
    rhs[n - 1] = six * (dn - (y[n - 1] - y[n - 2]) / hn);

    for i in 1..n {
        let w = sub[i] / diag[i - 1];
        diag[i] = diag[i] - w * sup[i - 1];
        rhs[i] = rhs[i] - w * rhs[i - 1];
    }
    let mut m = vec![T::zero(); n];
    m[n - 1] = rhs[n - 1] / diag[n - 1];
    for i in (0..n - 1).rev() {
        m[i] = (rhs[i] - sup[i] * m[i + 1]) / diag[i];
    }
    m
}
