//! Pointwise invariants of the second fundamental form, each computed by two
//! independent routes where possible, and the two routes to B₁.

use nalgebra::{DMatrix, Matrix2, SymmetricEigen};

use crate::error::{Error, Result};
use crate::numeric::richardson;
use crate::surface::frame::{adapted_frame, christoffel, FrameData};
use crate::surface::shape::{grad_from_frame, shape_with_pivots, second_fundamental_form, CovariantGradH, ShapePair};
use crate::surface::spec::ImmersionSpec;
use crate::tolerances::Tolerances;

/// `A = (⟨S_α, S_β⟩)` for shape matrices `S_α = [[a^α, b^α], [b^α, −a^α]]`.
#[derive(Clone, Debug)]
pub struct FundamentalMatrix {
    pub matrix: DMatrix<f64>,
    /// max entrywise |2aaᵀ + 2bbᵀ − Gram|.
    pub residual: f64,
}

impl FundamentalMatrix {
    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }
}

fn shape_matrices(sp: &ShapePair) -> Vec<Matrix2<f64>> {
    sp.a.iter()
        .zip(sp.b.iter())
        .map(|(&a, &b)| Matrix2::new(a, b, b, -a))
        .collect()
}

pub fn fundamental_matrix(sp: &ShapePair) -> FundamentalMatrix {
    let outer = (&sp.a * sp.a.transpose() + &sp.b * sp.b.transpose()) * 2.0;
    let mats = shape_matrices(sp);
    let q = mats.len();
    let gram = DMatrix::from_fn(q, q, |i, j| mats[i].dot(&mats[j]));
    let residual = (&outer - &gram).amax();
    FundamentalMatrix {
        matrix: outer,
        residual,
    }
}

/// Σ over ordered pairs of ‖[S_α, S_β]‖².
pub fn commutator_rho0(sp: &ShapePair) -> f64 {
    let mats = shape_matrices(sp);
    let mut sum = 0.0;
    for x in &mats {
        for y in &mats {
            sum += (x * y - y * x).norm_squared();
        }
    }
    sum
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointInvariants {
    /// S = |h|² = 2(|a|² + |b|²).
    pub s: f64,
    pub norm_a2: f64,
    /// ρ₀⊥ from the closed form 16|a|²|b|² − 16⟨a,b⟩².
    pub rho0: f64,
    /// ρ₀⊥ from the commutators of the shape matrices.
    pub rho0_commutator: f64,
    pub rho_perp: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    /// The two largest eigenvalues of A from a dense eigensolver.
    pub lambda1_eig: f64,
    pub lambda2_eig: f64,
    /// max |λ_k| for k ≥ 3 from the eigensolver.
    pub lambda_rest: f64,
    /// S + λ₂.
    pub u: f64,
    pub t: f64,
    pub k: f64,
    pub ddvv_slack: f64,
    pub hopf_re: f64,
    pub hopf_im: f64,
    /// |ρ₀(commutator) − ρ₀(closed)|.
    pub rho0_residual: f64,
    /// max |λ_i(closed) − λ_i(eigensolver)|, i = 1, 2.
    pub lambda_residual: f64,
    /// |tr A − S|.
    pub trace_residual: f64,
    /// |2S² − ρ₀ − 2|A|²|.
    pub norm_residual: f64,
    /// |u − (3 − t)S/2|.
    pub u_residual: f64,
    /// Entrywise outer-product vs Gram residual of A.
    pub gram_residual: f64,
}

pub fn point_invariants(sp: &ShapePair, ddvv_tol: f64) -> Result<PointInvariants> {
    let aa = sp.a.norm_squared();
    let bb = sp.b.norm_squared();
    let ab = sp.a.dot(&sp.b);
    let s = 2.0 * (aa + bb);
    let fm = fundamental_matrix(sp);
    let norm_a2 = fm.matrix.norm_squared();
    let rho0 = 16.0 * aa * bb - 16.0 * ab * ab;
    let rho0_commutator = commutator_rho0(sp);
    let ddvv_slack = s * s - rho0;
    if ddvv_slack < -ddvv_tol * s.abs().max(1.0).powi(2) {
        return Err(Error::InvariantViolation(format!(
            "DDVV slack S² − ρ₀⊥ = {ddvv_slack:.3e} with S = {s}"
        )));
    }
    // ½√(S² − ρ₀) without cancellation
    let half_root = ((aa - bb).powi(2) + 4.0 * ab * ab).sqrt();
    let lambda1 = s / 2.0 + half_root;
    let lambda2 = if lambda1 > 0.0 { (rho0.max(0.0) / 4.0) / lambda1 } else { 0.0 };
    let t = if s < 1e-12 { 1.0 } else { (2.0 * half_root / s).min(1.0) };
    let u = s + lambda2;

    let q = sp.codimension();
    let mut eig: Vec<f64> = SymmetricEigen::new(fm.matrix.clone()).eigenvalues.iter().copied().collect();
    eig.sort_by(|x, y| y.total_cmp(x));
    let lambda1_eig = eig.first().copied().unwrap_or(0.0);
    let lambda2_eig = if q >= 2 { eig[1] } else { 0.0 };
    let lambda_rest = eig.iter().skip(2).fold(0.0f64, |m, v| m.max(v.abs()));

    Ok(PointInvariants {
        s,
        norm_a2,
        rho0,
        rho0_commutator,
        rho_perp: rho0.max(0.0).sqrt() / 2.0,
        lambda1,
        lambda2,
        lambda1_eig,
        lambda2_eig,
        lambda_rest,
        u,
        t,
        k: (2.0 - s) / 2.0,
        ddvv_slack,
        hopf_re: aa - bb,
        hopf_im: -2.0 * ab,
        rho0_residual: (rho0_commutator - rho0).abs(),
        lambda_residual: (lambda1 - lambda1_eig).abs().max((lambda2 - lambda2_eig).abs()),
        trace_residual: (fm.trace() - s).abs(),
        norm_residual: (2.0 * s * s - rho0 - 2.0 * norm_a2).abs(),
        u_residual: if s > 1e-12 { (u - (3.0 - t) * s / 2.0).abs() } else { 0.0 },
        gram_residual: fm.residual,
    })
}

/// Laplace–Beltrami of the scalar field S at the frame's point, with the
/// Richardson disagreement.
pub fn laplacian_of_s(
    spec: &ImmersionSpec,
    frame: &FrameData,
    gamma: &[[[f64; 2]; 2]; 2],
    centre_s: f64,
    step: f64,
    pole_margin: f64,
) -> Result<(f64, f64)> {
    let ginv = frame
        .metric
        .try_inverse()
        .ok_or_else(|| Error::Frame("singular metric".into()))?;
    let p = frame.point;
    let s_at = |du: f64, dv: f64| -> Result<f64> {
        let sp = shape_with_pivots(spec, [p[0] + du, p[1] + dv], &frame.pivots, pole_margin)?;
        Ok(2.0 * (sp.a.norm_squared() + sp.b.norm_squared()))
    };
    let est = richardson(step, |h| {
        let (up, um) = (s_at(h, 0.0)?, s_at(-h, 0.0)?);
        let (vp, vm) = (s_at(0.0, h)?, s_at(0.0, -h)?);
        let mixed = s_at(h, h)? - s_at(h, -h)? - s_at(-h, h)? + s_at(-h, -h)?;
        let first = [(up - um) / (2.0 * h), (vp - vm) / (2.0 * h)];
        let second = [
            [(up - 2.0 * centre_s + um) / (h * h), mixed / (4.0 * h * h)],
            [mixed / (4.0 * h * h), (vp - 2.0 * centre_s + vm) / (h * h)],
        ];
        let mut lap = 0.0;
        for a in 0..2 {
            for b in 0..2 {
                let conn: f64 = (0..2).map(|c| gamma[c][a][b] * first[c]).sum();
                lap += ginv[(a, b)] * (second[a][b] - conn);
            }
        }
        Ok::<_, Error>(vec![lap])
    })?;
    Ok((est.value[0], est.error))
}

/// B₁ from the Simons identity: ½ΔS − 2S + |A|² + ρ₀⊥.
pub fn simons_b1(laplacian_s: f64, inv: &PointInvariants) -> f64 {
    0.5 * laplacian_s - 2.0 * inv.s + inv.norm_a2 + inv.rho0
}

/// Which trust checks a node failed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct NodeFlags {
    pub minimality: bool,
    pub codazzi: bool,
    pub extrapolation: bool,
    pub b1_cross: bool,
}

impl NodeFlags {
    pub fn any(&self) -> bool {
        self.minimality || self.codazzi || self.extrapolation || self.b1_cross
    }
}

/// Everything the pipeline measures at one chart point.
#[derive(Clone, Debug)]
pub struct NodeSample {
    pub point: [f64; 2],
    /// √det g in the chart basis.
    pub area_element: f64,
    pub shape: ShapePair,
    pub inv: PointInvariants,
    pub grad: CovariantGradH,
    pub laplacian_s: f64,
    pub laplacian_error: f64,
    pub b1_simons: f64,
    /// 4(|a₁|² + |a₂|²).
    pub b1_direct: f64,
    pub b1_cross: f64,
    pub flags: NodeFlags,
}

pub fn evaluate_node(spec: &ImmersionSpec, point: [f64; 2], tol: &Tolerances) -> Result<NodeSample> {
    let jet = spec.eval_jet(point, 2, tol.pole_margin)?;
    let frame = adapted_frame(&jet)?;
    let shape = second_fundamental_form(&jet, &frame);
    let inv = point_invariants(&shape, tol.ddvv)?;
    let gamma = christoffel(&jet)?;
    let (laplacian_s, laplacian_error) = laplacian_of_s(spec, &frame, &gamma, inv.s, tol.laplacian_step, tol.pole_margin)?;
    let grad = grad_from_frame(spec, &frame, &shape, tol.grad_step, tol.pole_margin)?;
    let b1_simons = simons_b1(laplacian_s, &inv);
    let b1_direct = grad.b1();
    let b1_cross = (b1_simons - b1_direct).abs();
    let flags = NodeFlags {
        minimality: shape.minimality_residual > tol.minimality,
        codazzi: grad.symmetry_residual() > tol.codazzi,
        extrapolation: laplacian_error > tol.extrapolation,
        b1_cross: b1_cross > tol.b1_cross,
    };
    Ok(NodeSample {
        point,
        area_element: frame.metric.determinant().max(0.0).sqrt(),
        shape,
        inv,
        grad,
        laplacian_s,
        laplacian_error,
        b1_simons,
        b1_direct,
        b1_cross,
        flags,
    })
}

/// |B₁(Simons) − 4(|a₁|² + |a₂|²)| at one point.
pub fn b1_cross_check(spec: &ImmersionSpec, point: [f64; 2], tol: &Tolerances) -> Result<f64> {
    Ok(evaluate_node(spec, point, tol)?.b1_cross)
}
