//! Shared value types: exponent pairs, physical constants, moment results and
//! inequality verdicts.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::Real;

/// The `(p, q)` order pair together with the composite Hölder exponent
/// `r* = pq/(p+q)` and the weights splitting the product side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Exponents<T> {
    pub p: T,
    pub q: T,
    /// `1/p + 1/q`.
    pub r_inv: T,
    /// `pq/(p+q)`, the order on the product side.
    pub r_star: T,
    /// `q/(p+q)`, the power applied to the `p`-moment.
    pub w_f: T,
    /// `p/(p+q)`, the power applied to the `q`-moment.
    pub w_g: T,
}

impl<T: Real> Exponents<T> {
    pub fn new(p: T, q: T) -> Result<Self> {
        for (name, v) in [("p", p), ("q", q)] {
            if !v.is_finite() || v <= T::zero() {
                return Err(domain(format!("{name} must be finite and positive, got {v}")));
            }
        }
        let r_inv = p.recip() + q.recip();
        if p == q {
            let half = T::lit(0.5);
            return Ok(Self { p, q, r_inv, r_star: p * half, w_f: half, w_g: half });
        }
        let sum = p + q;
        Ok(Self { p, q, r_inv, r_star: p * q / sum, w_f: q / sum, w_g: p / sum })
    }

    /// Same pair with the roles of `p` and `q` exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            p: self.q,
            q: self.p,
            r_inv: self.r_inv,
            r_star: self.r_star,
            w_f: self.w_g,
            w_g: self.w_f,
        }
    }
}

/// Constructs an [`Exponents`] value; errors on non-positive or non-finite input.
pub fn make_exponents<T: Real>(p: T, q: T) -> Result<Exponents<T>> {
    Exponents::new(p, q)
}

/// Gap of the generalized Young inequality
/// `c^p/p + d^q/q − (1/p + 1/q)·(cd)^{pq/(p+q)} ≥ 0`.
///
/// With `X = c^p`, `Y = d^q` the gap equals `r_inv·(w_f·X + w_g·Y − X^{w_f}·Y^{w_g})`,
/// a weighted AM–GM difference. It is evaluated in the cancellation-free form
/// `X·(w_g·expm1(L) − expm1(w_g·L))` with `L = ln(Y/X)`, so the result never
/// drops below zero by more than rounding of the final product.
pub fn young_gap<T: Real>(c: T, d: T, e: &Exponents<T>) -> T {
    debug_assert!(c >= T::zero() && d >= T::zero());
    let x = c.powf(e.p);
    let y = d.powf(e.q);
    if x == T::zero() || y == T::zero() {
        return x / e.p + y / e.q;
    }
    let (base, other, w) = if x >= y { (x, y, e.w_g) } else { (y, x, e.w_f) };
    // gap / r_inv = base · h(L), L = ln(other/base) ≤ 0
    let l = (other / base).ln();
    let h = if l.abs() < T::lit(1e-3) {
        let one = T::one();
        let lead = w * (one - w) * l * l / T::lit(2.0);
        lead * (one
            + (one + w) * l / T::lit(3.0)
            + (one + w + w * w) * l * l / T::lit(12.0))
    } else {
        w * l.exp_m1() - (w * l).exp_m1()
    };
    e.r_inv * base * h
}

/// Physical constants in the unit system of a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalConstants<T> {
    pub hbar: T,
    pub mass: T,
    pub a0: T,
}

impl<T: Real> PhysicalConstants<T> {
    pub fn new(hbar: T, mass: T, a0: T) -> Result<Self> {
        for (name, v) in [("hbar", hbar), ("mass", mass), ("a0", a0)] {
            if !v.is_finite() || v <= T::zero() {
                return Err(domain(format!("{name} must be finite and positive, got {v}")));
            }
        }
        Ok(Self { hbar, mass, a0 })
    }

    /// `ħ = m = a₀ = 1`.
    pub fn natural() -> Self {
        Self { hbar: T::one(), mass: T::one(), a0: T::one() }
    }

    /// CODATA 2018: reduced Planck constant, electron mass, Bohr radius.
    pub fn si() -> Self {
        Self {
            hbar: T::lit(1.054_571_817e-34),
            mass: T::lit(9.109_383_701_5e-31),
            a0: T::lit(5.291_772_109_03e-11),
        }
    }

    /// `ħ²/(m a₀²)`, the natural energy unit.
    pub fn energy_unit(&self) -> T {
        self.hbar * self.hbar / (self.mass * self.a0 * self.a0)
    }
}

impl<T: Real> Default for PhysicalConstants<T> {
    fn default() -> Self {
        Self::natural()
    }
}

/// Where an improper moment integral fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DivergenceSite {
    Origin,
    Infinity,
}

/// Sign of a divergent expectation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    PositiveInfinity,
    NegativeInfinity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum MomentStatus {
    Convergent,
    Divergent { at: DivergenceSite, toward: Direction },
    Failed,
}

/// Result of a moment evaluation. `value` is present only when convergent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentValue<T> {
    pub status: MomentStatus,
    pub value: Option<T>,
    pub err_estimate: T,
    pub order: T,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl<T: Real> MomentValue<T> {
    pub fn convergent(value: T, err_estimate: T, order: T) -> Self {
        debug_assert!(value.is_finite() && err_estimate.is_finite());
        Self { status: MomentStatus::Convergent, value: Some(value), err_estimate, order, note: None }
    }

    pub fn divergent(order: T, at: DivergenceSite, toward: Direction) -> Self {
        Self {
            status: MomentStatus::Divergent { at, toward },
            value: None,
            err_estimate: T::infinity(),
            order,
            note: None,
        }
    }

    pub fn failed(order: T, note: impl Into<String>) -> Self {
        Self {
            status: MomentStatus::Failed,
            value: None,
            err_estimate: T::infinity(),
            order,
            note: Some(note.into()),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn is_convergent(&self) -> bool {
        self.status == MomentStatus::Convergent
    }

    pub fn is_divergent(&self) -> bool {
        matches!(self.status, MomentStatus::Divergent { .. })
    }

    /// The value, or an error naming the moment.
    pub fn value_or_err(&self, label: &str) -> Result<T> {
        match (self.status, self.value) {
            (MomentStatus::Convergent, Some(v)) => Ok(v),
            (MomentStatus::Divergent { .. }, _) => Err(Error::Divergent { label: label.to_string() }),
            _ => Err(Error::Failed { label: label.to_string() }),
        }
    }

    /// Applies `f` to a convergent value, propagating the error estimate linearly.
    pub fn map(&self, scale: T, f: impl Fn(T) -> T) -> Self {
        match self.value {
            Some(v) if self.is_convergent() => MomentValue {
                status: self.status,
                value: Some(f(v)),
                err_estimate: self.err_estimate * scale.abs(),
                order: self.order,
                note: self.note.clone(),
            },
            _ => self.clone(),
        }
    }
}

/// A parameter echoed into a verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Param {
    Number(f64),
    Integer(i64),
    Flag(bool),
    Text(String),
}

impl From<f64> for Param {
    fn from(v: f64) -> Self {
        Param::Number(v)
    }
}
impl From<f32> for Param {
    fn from(v: f32) -> Self {
        Param::Number(v as f64)
    }
}
impl From<usize> for Param {
    fn from(v: usize) -> Self {
        Param::Integer(v as i64)
    }
}
impl From<bool> for Param {
    fn from(v: bool) -> Self {
        Param::Flag(v)
    }
}
impl From<&str> for Param {
    fn from(v: &str) -> Self {
        Param::Text(v.to_string())
    }
}
impl From<String> for Param {
    fn from(v: String) -> Self {
        Param::Text(v)
    }
}

/// Numerical slack allowed when comparing the two sides of an inequality:
/// `slack = rel · max(1, rhs)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlackPolicy<T> {
    pub rel: T,
}

impl<T: Real> SlackPolicy<T> {
    pub fn new(rel: T) -> Result<Self> {
        if !rel.is_finite() || rel < T::zero() {
            return Err(domain(format!("slack must be finite and non-negative, got {rel}")));
        }
        Ok(Self { rel })
    }

    pub fn slack_for(&self, rhs: T) -> T {
        self.rel * rhs.max(T::one())
    }
}

impl<T: Real> Default for SlackPolicy<T> {
    fn default() -> Self {
        Self { rel: T::lit(1e-9) }
    }
}

/// One inequality check `lhs ≤ rhs`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict<T> {
    pub lhs: T,
    pub rhs: T,
    /// `lhs/rhs`; absent when `rhs` is zero.
    pub ratio: Option<T>,
    /// `rhs − lhs`.
    pub margin: T,
    pub holds: bool,
    pub slack: T,
    pub label: String,
    pub inputs: BTreeMap<String, Param>,
    /// True when the inequality is a theorem: a failed check is then a
    /// numerical defect rather than a falsification.
    #[serde(skip)]
    pub guaranteed: bool,
}

impl<T: Real> Verdict<T> {
    pub fn new(label: impl Into<String>, lhs: T, rhs: T, slack: T) -> Self {
        let ratio = (rhs > T::zero()).then(|| lhs / rhs);
        Self {
            lhs,
            rhs,
            ratio,
            margin: rhs - lhs,
            holds: lhs <= rhs + slack,
            slack,
            label: label.into(),
            inputs: BTreeMap::new(),
            guaranteed: false,
        }
    }

    pub fn with_policy(label: impl Into<String>, lhs: T, rhs: T, policy: &SlackPolicy<T>) -> Self {
        Self::new(label, lhs, rhs, policy.slack_for(rhs))
    }

    pub fn guaranteed(mut self) -> Self {
        self.guaranteed = true;
        self
    }

    pub fn input(mut self, key: &str, value: impl Into<Param>) -> Self {
        self.inputs.insert(key.to_string(), value.into());
        self
    }

    pub fn number(self, key: &str, value: T) -> Self {
        self.input(key, value.to_f64_lossy())
    }

    pub fn with_exponents(self, e: &Exponents<T>) -> Self {
        self.number("p", e.p).number("q", e.q).number("r_star", e.r_star)
    }

    /// A failed check of a theorem.
    pub fn is_internal_error(&self) -> bool {
        self.guaranteed && !self.holds
    }
}
