//! Second fundamental form and its first covariant derivative.

use nalgebra::DVector;

use super::frame::{adapted_frame, frame_with_pivots, FrameData};
use super::jet::Jet;
use super::spec::ImmersionSpec;
use crate::error::Result;
use crate::numeric::richardson;

/// `a = (h₁₁^α)`, `b = (h₁₂^α)` in an adapted frame.
#[derive(Clone, Debug, PartialEq)]
pub struct ShapePair {
    pub a: DVector<f64>,
    pub b: DVector<f64>,
    /// `h₂₂^α`, which equals `−a` up to the minimality residual.
    pub h22: DVector<f64>,
    /// max_α |h₁₁^α + h₂₂^α|.
    pub minimality_residual: f64,
}

impl ShapePair {
    pub fn from_ab(a: DVector<f64>, b: DVector<f64>) -> Self {
        let h22 = -&a;
        ShapePair {
            a,
            b,
            h22,
            minimality_residual: 0.0,
        }
    }

    pub fn codimension(&self) -> usize {
        self.a.len()
    }

    /// |h|² summed over all four index pairs.
    pub fn squared_norm(&self) -> f64 {
        self.a.norm_squared() + 2.0 * self.b.norm_squared() + self.h22.norm_squared()
    }

    /// The components `[h₁₁, h₁₂, h₂₂]` flattened, normal index fastest.
    fn flat(&self) -> Vec<f64> {
        self.a.iter().chain(self.b.iter()).chain(self.h22.iter()).copied().collect()
    }
}

/// `h_ij^α = c_i^a c_j^b ⟨X_ab, ξ_α⟩` for a frame built at the jet's point.
pub fn second_fundamental_form(jet: &Jet, frame: &FrameData) -> ShapePair {
    let xab = [
        [jet.derivative(2, 0), jet.derivative(1, 1)],
        [jet.derivative(1, 1), jet.derivative(0, 2)],
    ];
    let q = frame.codimension();
    let c = frame.chart_coeffs;
    let mut h = [DVector::zeros(q), DVector::zeros(q), DVector::zeros(q)];
    for (slot, (i, j)) in [(0usize, 0usize), (0, 1), (1, 1)].into_iter().enumerate() {
        for (alpha, xi) in frame.normals.iter().enumerate() {
            let mut v = 0.0;
            for a in 0..2 {
                for b in 0..2 {
                    v += c[i][a] * c[j][b] * xab[a][b].dot(xi);
                }
            }
            h[slot][alpha] = v;
        }
    }
    let [a, b, h22] = h;
    let minimality_residual = (&a + &h22).amax();
    ShapePair {
        a,
        b,
        h22,
        minimality_residual,
    }
}

/// The shape pair at `point`, in the frame seeded by `pivots`.
pub fn shape_with_pivots(
    spec: &ImmersionSpec,
    point: [f64; 2],
    pivots: &[usize],
    pole_margin: f64,
) -> Result<ShapePair> {
    let jet = spec.eval_jet(point, 2, pole_margin)?;
    let frame = frame_with_pivots(&jet, Some(pivots))?;
    Ok(second_fundamental_form(&jet, &frame))
}

/// `h_ijk^α` in the normal form of a Codazzi-symmetric, trace-free tensor.
#[derive(Clone, Debug)]
pub struct CovariantGradH {
    /// `h₁₁₁^α`.
    pub a1: DVector<f64>,
    /// `h₁₁₂^α`.
    pub a2: DVector<f64>,
    /// max |h_ijk − h_ikj| over all index triples.
    pub codazzi_residual: f64,
    /// max |h₁₁k + h₂₂k|.
    pub trace_residual: f64,
    /// max of |h₁₂₁ − a₂| and |h₁₂₂ + a₁|.
    pub alias_residual: f64,
    /// Richardson disagreement of the chart derivatives of h.
    pub extrapolation_error: f64,
    /// Σ |h_ijk|² over all eight index triples.
    pub b1_full: f64,
}

impl CovariantGradH {
    /// `B₁ = 4(|a₁|² + |a₂|²)`.
    pub fn b1(&self) -> f64 {
        4.0 * (self.a1.norm_squared() + self.a2.norm_squared())
    }

    /// The largest of the Codazzi, trace and alias residuals.
    pub fn symmetry_residual(&self) -> f64 {
        self.codazzi_residual
            .max(self.trace_residual)
            .max(self.alias_residual)
    }
}

/// `h_ijk` from Richardson-extrapolated chart derivatives of `h_ij` plus
/// connection terms; `step` is the coarsest difference step.
pub fn covariant_grad_h(
    spec: &ImmersionSpec,
    point: [f64; 2],
    step: f64,
    pole_margin: f64,
) -> Result<CovariantGradH> {
    let jet = spec.eval_jet(point, 2, pole_margin)?;
    let frame = adapted_frame(&jet)?;
    let centre = second_fundamental_form(&jet, &frame);
    grad_from_frame(spec, &frame, &centre, step, pole_margin)
}

pub(crate) fn grad_from_frame(
    spec: &ImmersionSpec,
    frame: &FrameData,
    centre: &ShapePair,
    step: f64,
    pole_margin: f64,
) -> Result<CovariantGradH> {
    let q = frame.codimension();
    let pivots = &frame.pivots;
    let point = frame.point;
    let diff = richardson(step, |h| {
        let mut out = Vec::with_capacity(6 * q);
        for dir in 0..2 {
            let mut plus = point;
            let mut minus = point;
            plus[dir] += h;
            minus[dir] -= h;
            let fp = shape_with_pivots(spec, plus, pivots, pole_margin)?.flat();
            let fm = shape_with_pivots(spec, minus, pivots, pole_margin)?.flat();
            out.extend(fp.iter().zip(&fm).map(|(p, m)| (p - m) / (2.0 * h)));
        }
        Ok::<_, crate::error::Error>(out)
    })?;
    // chart derivative ∂_a h_ij^α
    let dh = |a: usize, i: usize, j: usize, alpha: usize| -> f64 {
        let slot = match (i, j) {
            (0, 0) => 0,
            (1, 1) => 2,
            _ => 1,
        };
        diff.value[a * 3 * q + slot * q + alpha]
    };
    let h = |i: usize, j: usize, alpha: usize| -> f64 {
        match (i, j) {
            (0, 0) => centre.a[alpha],
            (1, 1) => centre.h22[alpha],
            _ => centre.b[alpha],
        }
    };
    let c = frame.chart_coeffs;
    // ω_mi(e_k) with ω₁₁ = ω₂₂ = 0, ω₂₁ = −ω₁₂
    let omega = |m: usize, i: usize, k: usize| -> f64 {
        match (m, i) {
            (0, 1) => frame.omega12[k],
            (1, 0) => -frame.omega12[k],
            _ => 0.0,
        }
    };
    let mut hijk = vec![[[[0.0; 2]; 2]; 2]; q];
    for alpha in 0..q {
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let mut v = c[k][0] * dh(0, i, j, alpha) + c[k][1] * dh(1, i, j, alpha);
                    for m in 0..2 {
                        v += h(m, j, alpha) * omega(m, i, k) + h(i, m, alpha) * omega(m, j, k);
                    }
                    for beta in 0..q {
                        v += h(i, j, beta) * frame.normal_connection[k][(beta, alpha)];
                    }
                    hijk[alpha][i][j][k] = v;
                }
            }
        }
    }
    let mut codazzi: f64 = 0.0;
    let mut trace: f64 = 0.0;
    let mut alias: f64 = 0.0;
    let mut full = 0.0;
    for t in &hijk {
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    codazzi = codazzi.max((t[i][j][k] - t[i][k][j]).abs());
                    full += t[i][j][k] * t[i][j][k];
                }
            }
        }
        for k in 0..2 {
            trace = trace.max((t[0][0][k] + t[1][1][k]).abs());
        }
        alias = alias
            .max((t[0][1][0] - t[0][0][1]).abs())
            .max((t[0][1][1] + t[0][0][0]).abs());
    }
    Ok(CovariantGradH {
        a1: DVector::from_iterator(q, hijk.iter().map(|t| t[0][0][0])),
        a2: DVector::from_iterator(q, hijk.iter().map(|t| t[0][0][1])),
        codazzi_residual: codazzi,
        trace_residual: trace,
        alias_residual: alias,
        extrapolation_error: diff.error,
        b1_full: full,
    })
}
