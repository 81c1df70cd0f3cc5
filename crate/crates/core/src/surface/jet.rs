//! Truncated bivariate Taylor arithmetic and immersion jets.
//!
//! A [`Taylor2`] stores the Taylor coefficients `c_ij = ∂^{i+j} f / (∂u^i ∂v^j) / (i! j!)`
//! of a scalar function around a base point, up to total order 4. Arithmetic
//! on these truncated series is exact calculus, so composing the chart map
//! with polynomial or trigonometric components yields exact derivatives.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DVector;

pub const MAX_ORDER: usize = 4;
const NCOEF: usize = (MAX_ORDER + 1) * (MAX_ORDER + 2) / 2;

#[inline]
fn idx(i: usize, j: usize) -> usize {
    let d = i + j;
    d * (d + 1) / 2 + j
}

const FACT: [f64; MAX_ORDER + 1] = [1.0, 1.0, 2.0, 6.0, 24.0];

/// Truncated Taylor series in two variables.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Taylor2 {
    order: usize,
    c: [f64; NCOEF],
}

impl Taylor2 {
    pub fn constant(value: f64, order: usize) -> Self {
        debug_assert!(order <= MAX_ORDER);
        let mut c = [0.0; NCOEF];
        c[0] = value;
        Taylor2 { order, c }
    }

    /// The coordinate function `which` (0 = u, 1 = v) expanded at `value`.
    pub fn variable(value: f64, which: usize, order: usize) -> Self {
        let mut t = Taylor2::constant(value, order);
        if order >= 1 {
            t.c[if which == 0 { idx(1, 0) } else { idx(0, 1) }] = 1.0;
        }
        t
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    pub fn coeff(&self, i: usize, j: usize) -> f64 {
        if i + j > self.order {
            0.0
        } else {
            self.c[idx(i, j)]
        }
    }

    /// `∂^{i+j} f / ∂u^i ∂v^j` at the base point.
    pub fn partial(&self, i: usize, j: usize) -> f64 {
        self.coeff(i, j) * FACT[i] * FACT[j]
    }

    pub fn scale(mut self, s: f64) -> Self {
        let n = idx(0, self.order) + 1;
        for x in &mut self.c[..n] {
            *x *= s;
        }
        self
    }

    pub fn powi(self, n: u32) -> Self {
        let mut acc = Taylor2::constant(1.0, self.order);
        for _ in 0..n {
            acc = acc * self;
        }
        acc
    }

    /// `(sin f, cos f)` via the angle-addition expansion around the base value.
    pub fn sin_cos(self) -> (Self, Self) {
        let (s0, c0) = self.c[0].sin_cos();
        let mut delta = self;
        delta.c[0] = 0.0;
        // δ^k vanishes for k > order
        let mut sin_d = Taylor2::constant(0.0, self.order);
        let mut cos_d = Taylor2::constant(1.0, self.order);
        let mut pow = Taylor2::constant(1.0, self.order);
        let mut fact = 1.0;
        for k in 1..=self.order {
            pow = pow * delta;
            fact *= k as f64;
            let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
            if k % 2 == 1 {
                sin_d = sin_d + pow.scale(sign / fact);
            } else {
                cos_d = cos_d + pow.scale(sign / fact);
            }
        }
        (
            sin_d.scale(c0) + cos_d.scale(s0),
            cos_d.scale(c0) - sin_d.scale(s0),
        )
    }
}

impl Add for Taylor2 {
    type Output = Taylor2;
    fn add(mut self, rhs: Taylor2) -> Taylor2 {
        let order = self.order.min(rhs.order);
        self.order = order;
        for k in 0..=idx(0, order) {
            self.c[k] += rhs.c[k];
        }
        self
    }
}

impl Sub for Taylor2 {
    type Output = Taylor2;
    fn sub(self, rhs: Taylor2) -> Taylor2 {
        self + (-rhs)
    }
}

impl Neg for Taylor2 {
    type Output = Taylor2;
    fn neg(self) -> Taylor2 {
        self.scale(-1.0)
    }
}

impl Mul for Taylor2 {
    type Output = Taylor2;
    fn mul(self, rhs: Taylor2) -> Taylor2 {
        let order = self.order.min(rhs.order);
        let mut c = [0.0; NCOEF];
        for d in 0..=order {
            for j in 0..=d {
                let i = d - j;
                let mut acc = 0.0;
                for i1 in 0..=i {
                    for j1 in 0..=j {
                        acc += self.c[idx(i1, j1)] * rhs.c[idx(i - i1, j - j1)];
                    }
                }
                c[idx(i, j)] = acc;
            }
        }
        Taylor2 { order, c }
    }
}

/// Exact derivatives of every ambient component of an immersion at a chart point.
#[derive(Clone, Debug)]
pub struct Jet {
    pub point: [f64; 2],
    pub order: usize,
    pub comps: Vec<Taylor2>,
}

impl Jet {
    pub fn ambient_dim(&self) -> usize {
        self.comps.len()
    }

    /// The ambient vector `∂^{i+j} X / ∂u^i ∂v^j`.
    pub fn derivative(&self, i: usize, j: usize) -> DVector<f64> {
        DVector::from_iterator(self.comps.len(), self.comps.iter().map(|t| t.partial(i, j)))
    }

    pub fn position(&self) -> DVector<f64> {
        self.derivative(0, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_rule() {
        let u = Taylor2::variable(0.3, 0, 4);
        let v = Taylor2::variable(-0.7, 1, 4);
        // f = u^2 v at (0.3, -0.7)
        let f = u * u * v;
        assert!((f.partial(0, 0) - 0.09 * -0.7).abs() < 1e-15);
        assert!((f.partial(1, 0) - 2.0 * 0.3 * -0.7).abs() < 1e-15);
        assert!((f.partial(1, 1) - 0.6).abs() < 1e-15);
        assert!((f.partial(2, 1) - 2.0).abs() < 1e-15);
        assert_eq!(f.partial(3, 1), 0.0);
    }

    #[test]
    fn sine_derivatives_cycle() {
        let x0 = 0.4;
        let (s, c) = Taylor2::variable(x0, 0, 4).sin_cos();
        let expect_s = [x0.sin(), x0.cos(), -x0.sin(), -x0.cos(), x0.sin()];
        let expect_c = [x0.cos(), -x0.sin(), -x0.cos(), x0.sin(), x0.cos()];
        for k in 0..=4 {
            assert!((s.partial(k, 0) - expect_s[k]).abs() < 1e-14, "sin order {k}");
            assert!((c.partial(k, 0) - expect_c[k]).abs() < 1e-14, "cos order {k}");
        }
    }

    #[test]
    fn composed_trig_mixed_partial() {
        // cos(2u + 3v)
        let (u0, v0) = (0.2, 1.1);
        let arg = Taylor2::variable(u0, 0, 4).scale(2.0) + Taylor2::variable(v0, 1, 4).scale(3.0);
        let (_, c) = arg.sin_cos();
        let phase = 2.0 * u0 + 3.0 * v0;
        // cos''' = sin, cos'''' = cos
        assert!((c.partial(2, 1) - 12.0 * phase.sin()).abs() < 1e-13);
        assert!((c.partial(1, 3) - 54.0 * phase.cos()).abs() < 1e-12);
    }

    #[test]
    fn truncation_follows_lower_order() {
        let a = Taylor2::variable(1.0, 0, 2);
        let b = Taylor2::variable(1.0, 1, 4);
        assert_eq!((a * b).order(), 2);
        assert_eq!((a * b).coeff(2, 1), 0.0);
    }
}
