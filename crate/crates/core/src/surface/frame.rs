//! Adapted orthonormal frames and their connection coefficients.
//!
//! The tangent frame is `e₁ = X_u/|X_u|`, `e₂` = Gram–Schmidt of `X_v`. The
//! normal frame orthonormalizes standard basis vectors against `{X, e₁, e₂}`,
//! picking at each step the candidate with the largest residual. Pivots chosen
//! at one point can be replayed at nearby points so the frame field is smooth.
//!
//! Connection coefficients come from running the same construction on dual
//! numbers seeded with the second-order jet.

use std::ops::{Add, Div, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector, Matrix2};

use super::jet::Jet;
use crate::error::{Error, Result};

const MIN_METRIC_DET: f64 = 1e-14;

trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn lift(x: f64) -> Self;
    fn re(self) -> f64;
    fn sqrt(self) -> Self;
}

impl Scalar for f64 {
    fn lift(x: f64) -> Self {
        x
    }
    fn re(self) -> f64 {
        self
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
}

/// First-order dual number carrying derivatives along both chart directions.
#[derive(Clone, Copy, Debug)]
struct Dual {
    v: f64,
    d: [f64; 2],
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, o: Dual) -> Dual {
        Dual {
            v: self.v + o.v,
            d: [self.d[0] + o.d[0], self.d[1] + o.d[1]],
        }
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, o: Dual) -> Dual {
        Dual {
            v: self.v - o.v,
            d: [self.d[0] - o.d[0], self.d[1] - o.d[1]],
        }
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, o: Dual) -> Dual {
        Dual {
            v: self.v * o.v,
            d: [
                self.d[0] * o.v + self.v * o.d[0],
                self.d[1] * o.v + self.v * o.d[1],
            ],
        }
    }
}

impl Div for Dual {
    type Output = Dual;
    fn div(self, o: Dual) -> Dual {
        let inv = 1.0 / o.v;
        Dual {
            v: self.v * inv,
            d: [
                (self.d[0] - self.v * inv * o.d[0]) * inv,
                (self.d[1] - self.v * inv * o.d[1]) * inv,
            ],
        }
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        Dual {
            v: -self.v,
            d: [-self.d[0], -self.d[1]],
        }
    }
}

impl Scalar for Dual {
    fn lift(x: f64) -> Self {
        Dual { v: x, d: [0.0; 2] }
    }
    fn re(self) -> f64 {
        self.v
    }
    fn sqrt(self) -> Self {
        let r = self.v.sqrt();
        let k = 0.5 / r;
        Dual {
            v: r,
            d: [self.d[0] * k, self.d[1] * k],
        }
    }
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::lift(0.0), |acc, (x, y)| acc + *x * *y)
}

fn axpy<T: Scalar>(y: &mut [T], alpha: T, x: &[T]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi = *yi + alpha * *xi;
    }
}

fn scaled<T: Scalar>(x: &[T], s: T) -> Vec<T> {
    x.iter().map(|v| *v * s).collect()
}

struct RawFrame<T> {
    e1: Vec<T>,
    e2: Vec<T>,
    normals: Vec<Vec<T>>,
    pivots: Vec<usize>,
    /// e_k = coeffs[k][0] ∂_u + coeffs[k][1] ∂_v
    coeffs: [[T; 2]; 2],
}

fn project_out<T: Scalar>(v: &mut [T], basis: &[Vec<T>]) {
    // two passes keep the result orthogonal to working precision
    for _ in 0..2 {
        for b in basis {
            let c = dot(v, b);
            axpy(v, -c, b);
        }
    }
}

fn orthonormalize<T: Scalar>(x: &[T], xu: &[T], xv: &[T], pivots: Option<&[usize]>) -> Result<RawFrame<T>> {
    let n = x.len();
    let guu = dot(xu, xu);
    let guv = dot(xu, xv);
    let gvv = dot(xv, xv);
    let det = guu.re() * gvv.re() - guv.re() * guv.re();
    if !(det > MIN_METRIC_DET) {
        return Err(Error::Frame(format!("metric determinant {det:.3e} is not above {MIN_METRIC_DET:.0e}")));
    }
    let lu = guu.sqrt();
    let e1 = scaled(xu, T::lift(1.0) / lu);
    let proj = dot(xv, &e1);
    let mut w = xv.to_vec();
    axpy(&mut w, -proj, &e1);
    let lw = dot(&w, &w).sqrt();
    let e2 = scaled(&w, T::lift(1.0) / lw);
    let zero = T::lift(0.0);
    let coeffs = [
        [T::lift(1.0) / lu, zero],
        [-proj / (lu * lw), T::lift(1.0) / lw],
    ];

    let q = n - 3;
    let mut basis = vec![x.to_vec(), e1.clone(), e2.clone()];
    let mut chosen = Vec::with_capacity(q);
    let mut normals = Vec::with_capacity(q);
    for step in 0..q {
        let (pivot, mut r) = match pivots {
            Some(p) => {
                let k = p[step];
                let mut r = vec![zero; n];
                r[k] = T::lift(1.0);
                project_out(&mut r, &basis);
                (k, r)
            }
            None => {
                let mut best: Option<(usize, Vec<T>, f64)> = None;
                for k in (0..n).filter(|k| !chosen.contains(k)) {
                    let mut r = vec![zero; n];
                    r[k] = T::lift(1.0);
                    project_out(&mut r, &basis);
                    let norm = dot(&r, &r).re();
                    if best.as_ref().map_or(true, |b| norm > b.2) {
                        best = Some((k, r, norm));
                    }
                }
                let (k, r, _) = best.expect("a candidate remains while step < q");
                (k, r)
            }
        };
        let len = dot(&r, &r).sqrt();
        if !(len.re() > 1e-8) {
            return Err(Error::Frame(format!("normal pivot {pivot} is degenerate (residual {:.3e})", len.re())));
        }
        r = scaled(&r, T::lift(1.0) / len);
        chosen.push(pivot);
        normals.push(r.clone());
        basis.push(r);
    }
    Ok(RawFrame {
        e1,
        e2,
        normals,
        pivots: chosen,
        coeffs,
    })
}

fn to_vec(v: &[f64]) -> DVector<f64> {
    DVector::from_column_slice(v)
}

/// Orthonormal adapted frame at a chart point, with connection data.
#[derive(Clone, Debug)]
pub struct FrameData {
    pub point: [f64; 2],
    pub position: DVector<f64>,
    pub tangent: [DVector<f64>; 2],
    pub normals: Vec<DVector<f64>>,
    /// Standard basis indices used to seed the normal frame, in order.
    pub pivots: Vec<usize>,
    /// Induced metric in the chart basis.
    pub metric: Matrix2<f64>,
    /// `e_k = chart_coeffs[k][0] ∂_u + chart_coeffs[k][1] ∂_v`.
    pub chart_coeffs: [[f64; 2]; 2],
    /// `ω₁₂(e_k) = ⟨D_{e_k} e₁, e₂⟩` for k = 1, 2.
    pub omega12: [f64; 2],
    /// `normal_connection[k][(β, α)] = ⟨D_{e_k} ξ_β, ξ_α⟩`.
    pub normal_connection: [DMatrix<f64>; 2],
}

impl FrameData {
    pub fn codimension(&self) -> usize {
        self.normals.len()
    }

    /// The frame with `(e₁, e₂)` rotated by `angle`; connection data is dropped.
    pub fn rotate_tangent(&self, angle: f64) -> FrameData {
        let (s, c) = angle.sin_cos();
        let mut out = self.clone();
        out.tangent = [
            &self.tangent[0] * c + &self.tangent[1] * s,
            &self.tangent[1] * c - &self.tangent[0] * s,
        ];
        let [k1, k2] = self.chart_coeffs;
        out.chart_coeffs = [
            [c * k1[0] + s * k2[0], c * k1[1] + s * k2[1]],
            [c * k2[0] - s * k1[0], c * k2[1] - s * k1[1]],
        ];
        out.omega12 = [f64::NAN; 2];
        let q = self.codimension();
        out.normal_connection = [DMatrix::from_element(q, q, f64::NAN), DMatrix::from_element(q, q, f64::NAN)];
        out
    }

    /// Max |G − I| for the Gram matrix of `{X, e₁, e₂, ξ…}`.
    pub fn orthonormality_residual(&self) -> f64 {
        let mut all = vec![&self.position, &self.tangent[0], &self.tangent[1]];
        all.extend(self.normals.iter());
        let mut worst: f64 = 0.0;
        for (i, a) in all.iter().enumerate() {
            for (j, b) in all.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((a.dot(b) - target).abs());
            }
        }
        worst
    }
}

/// Induced metric `g_ab = ⟨X_a, X_b⟩` from a jet of order ≥ 1.
pub fn metric(jet: &Jet) -> Matrix2<f64> {
    let xu = jet.derivative(1, 0);
    let xv = jet.derivative(0, 1);
    Matrix2::new(xu.dot(&xu), xu.dot(&xv), xu.dot(&xv), xv.dot(&xv))
}

/// Christoffel symbols `Γ^c_ab = g^{cd} ⟨X_ab, X_d⟩`, indexed `[c][a][b]`.
pub fn christoffel(jet: &Jet) -> Result<[[[f64; 2]; 2]; 2]> {
    let g = metric(jet);
    let ginv = g
        .try_inverse()
        .ok_or_else(|| Error::Frame("singular metric".into()))?;
    let first = [jet.derivative(1, 0), jet.derivative(0, 1)];
    let xab = [
        [jet.derivative(2, 0), jet.derivative(1, 1)],
        [jet.derivative(1, 1), jet.derivative(0, 2)],
    ];
    let mut gamma = [[[0.0; 2]; 2]; 2];
    for c in 0..2 {
        for a in 0..2 {
            for b in 0..2 {
                gamma[c][a][b] = (0..2).map(|d| ginv[(c, d)] * xab[a][b].dot(&first[d])).sum();
            }
        }
    }
    Ok(gamma)
}

/// `Δ_M X = g^{ab}(X_ab − Γ^c_ab X_c)` from a jet of order ≥ 2.
pub fn laplace_beltrami_position(jet: &Jet) -> Result<DVector<f64>> {
    let g = metric(jet);
    let ginv = g
        .try_inverse()
        .ok_or_else(|| Error::Frame("singular metric".into()))?;
    let gamma = christoffel(jet)?;
    let first = [jet.derivative(1, 0), jet.derivative(0, 1)];
    let xab = [
        [jet.derivative(2, 0), jet.derivative(1, 1)],
        [jet.derivative(1, 1), jet.derivative(0, 2)],
    ];
    let mut out = DVector::zeros(jet.ambient_dim());
    for a in 0..2 {
        for b in 0..2 {
            let mut term = xab[a][b].clone();
            for c in 0..2 {
                term -= &first[c] * gamma[c][a][b];
            }
            out += term * ginv[(a, b)];
        }
    }
    Ok(out)
}

/// Frame without connection data, replaying `pivots` when given.
pub fn frame_with_pivots(jet: &Jet, pivots: Option<&[usize]>) -> Result<FrameData> {
    let x: Vec<f64> = jet.position().iter().copied().collect();
    let xu: Vec<f64> = jet.derivative(1, 0).iter().copied().collect();
    let xv: Vec<f64> = jet.derivative(0, 1).iter().copied().collect();
    let raw = orthonormalize(&x, &xu, &xv, pivots)?;
    let q = raw.normals.len();
    Ok(FrameData {
        point: jet.point,
        position: to_vec(&x),
        tangent: [to_vec(&raw.e1), to_vec(&raw.e2)],
        normals: raw.normals.iter().map(|n| to_vec(n)).collect(),
        pivots: raw.pivots,
        metric: metric(jet),
        chart_coeffs: raw.coeffs,
        omega12: [f64::NAN; 2],
        normal_connection: [DMatrix::from_element(q, q, f64::NAN), DMatrix::from_element(q, q, f64::NAN)],
    })
}

/// Full adapted frame with connection coefficients; needs a jet of order ≥ 2.
pub fn adapted_frame(jet: &Jet) -> Result<FrameData> {
    if jet.order < 2 {
        return Err(Error::Domain(format!("adapted frame needs an order-2 jet, got {}", jet.order)));
    }
    let mut frame = frame_with_pivots(jet, None)?;
    let lift = |i: usize, j: usize| -> Vec<Dual> {
        let base = jet.derivative(i, j);
        let du = jet.derivative(i + 1, j);
        let dv = jet.derivative(i, j + 1);
        (0..base.len())
            .map(|k| Dual {
                v: base[k],
                d: [du[k], dv[k]],
            })
            .collect()
    };
    let raw = orthonormalize(&lift(0, 0), &lift(1, 0), &lift(0, 1), Some(&frame.pivots))?;
    let q = raw.normals.len();
    let deriv = |v: &[Dual], a: usize| -> Vec<f64> { v.iter().map(|x| x.d[a]).collect() };
    let value = |v: &[Dual]| -> Vec<f64> { v.iter().map(|x| x.v).collect() };
    let e2 = value(&raw.e2);
    let normals: Vec<Vec<f64>> = raw.normals.iter().map(|n| value(n)).collect();
    // connection along the chart directions ∂_u, ∂_v
    let mut w12 = [0.0; 2];
    let mut wn = [DMatrix::zeros(q, q), DMatrix::zeros(q, q)];
    for a in 0..2 {
        let de1 = deriv(&raw.e1, a);
        w12[a] = dot(&de1, &e2);
        for beta in 0..q {
            let dxi = deriv(&raw.normals[beta], a);
            for alpha in 0..q {
                wn[a][(beta, alpha)] = dot(&dxi, &normals[alpha]);
            }
        }
    }
    let c = frame.chart_coeffs;
    for k in 0..2 {
        frame.omega12[k] = c[k][0] * w12[0] + c[k][1] * w12[1];
        frame.normal_connection[k] = &wn[0] * c[k][0] + &wn[1] * c[k][1];
    }
    Ok(frame)
}
