//! Per-phase and stationary-frame vector types plus the Clarke transform pair.
//!
//! The amplitude-invariant convention is used throughout: a balanced
//! three-phase set with peak amplitude `V` maps to an alpha-beta vector of
//! magnitude `V`. The zero-sequence component is discarded on the forward
//! transform and absent by construction on the inverse.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

pub(crate) const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// Per-phase samples of one physical quantity (V, A, or Wb).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ThreePhase {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl ThreePhase {
    pub const ZERO: Self = Self { a: 0.0, b: 0.0, c: 0.0 };

    pub fn new(a: f64, b: f64, c: f64) -> Self {
        Self { a, b, c }
    }

    pub fn map(self, f: impl Fn(f64) -> f64) -> Self {
        Self::new(f(self.a), f(self.b), f(self.c))
    }

    pub fn sum(self) -> f64 {
        self.a + self.b + self.c
    }

    pub fn max_abs(self) -> f64 {
        self.a.abs().max(self.b.abs()).max(self.c.abs())
    }

    pub fn is_finite(self) -> bool {
        self.a.is_finite() && self.b.is_finite() && self.c.is_finite()
    }

    /// Removes the zero-sequence component by subtracting the per-phase mean.
    /// The result sums to zero up to rounding.
    pub fn without_zero_sequence(self) -> Self {
        let mean = self.sum() / 3.0;
        Self::new(self.a - mean, self.b - mean, self.c - mean)
    }
}

impl Add for ThreePhase {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.a + rhs.a, self.b + rhs.b, self.c + rhs.c)
    }
}

impl AddAssign for ThreePhase {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl Sub for ThreePhase {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.a - rhs.a, self.b - rhs.b, self.c - rhs.c)
    }
}

impl Mul<f64> for ThreePhase {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        Self::new(self.a * k, self.b * k, self.c * k)
    }
}

impl Neg for ThreePhase {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.a, -self.b, -self.c)
    }
}

/// Stationary-frame two-axis vector, same unit as its source quantity.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AlphaBeta {
    pub alpha: f64,
    pub beta: f64,
}

impl AlphaBeta {
    pub const ZERO: Self = Self { alpha: 0.0, beta: 0.0 };

    pub fn new(alpha: f64, beta: f64) -> Self {
        Self { alpha, beta }
    }

    pub fn magnitude(self) -> f64 {
        self.alpha.hypot(self.beta)
    }

    pub fn is_finite(self) -> bool {
        self.alpha.is_finite() && self.beta.is_finite()
    }

    /// Unit vector at `angle` radians from the alpha axis, scaled by `mag`.
    pub fn from_polar(mag: f64, angle: f64) -> Self {
        Self::new(mag * angle.cos(), mag * angle.sin())
    }
}

impl Add for AlphaBeta {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.alpha + rhs.alpha, self.beta + rhs.beta)
    }
}

impl Sub for AlphaBeta {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.alpha - rhs.alpha, self.beta - rhs.beta)
    }
}

impl Mul<f64> for AlphaBeta {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        Self::new(self.alpha * k, self.beta * k)
    }
}

impl Neg for AlphaBeta {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.alpha, -self.beta)
    }
}

/// Amplitude-invariant Clarke transform. Zero-sequence is discarded, so a
/// pure common-mode input maps to the zero vector.
pub fn abc_to_alphabeta(x: ThreePhase) -> AlphaBeta {
    AlphaBeta {
        alpha: (2.0 / 3.0) * (x.a - 0.5 * x.b - 0.5 * x.c),
        beta: (x.b - x.c) / SQRT_3,
    }
}

/// Inverse Clarke transform with zero zero-sequence. The result sums to
/// zero up to rounding.
pub fn alphabeta_to_abc(x: AlphaBeta) -> ThreePhase {
    let half_alpha = 0.5 * x.alpha;
    let beta_term = 0.5 * SQRT_3 * x.beta;
    ThreePhase {
        a: x.alpha,
        b: -half_alpha + beta_term,
        c: -half_alpha - beta_term,
    }
}
