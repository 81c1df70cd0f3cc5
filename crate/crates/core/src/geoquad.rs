//! Tensor-product quadrature on the chart and the integral identities.
//!
//! Sphere charts use Gauss–Legendre nodes in cos θ times uniform φ; torus
//! charts use the uniform (trapezoidal) rule in both angles. Sums are
//! compensated and taken in node order, so results do not depend on how node
//! evaluation was scheduled.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::invariants::{evaluate_node, NodeSample};
use crate::numeric::{gauss_legendre, neumaier_sum};
use crate::surface::frame::metric;
use crate::surface::spec::{Chart, ImmersionSpec};
use crate::tolerances::Tolerances;

#[derive(Clone, Debug)]
pub struct QuadratureGrid {
    pub chart: Chart,
    pub resolution: [usize; 2],
    pub nodes: Vec<[f64; 2]>,
    /// Parameter-space weights, including the 1/sin θ of the cos θ substitution.
    pub weights: Vec<f64>,
    /// √det g at each node.
    pub area_elements: Vec<f64>,
}

impl QuadratureGrid {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// The weight of node `i` against the area measure.
    pub fn area_weight(&self, i: usize) -> f64 {
        self.weights[i] * self.area_elements[i]
    }

    pub fn area(&self) -> f64 {
        neumaier_sum((0..self.len()).map(|i| self.area_weight(i)))
    }
}

pub fn build_grid(spec: &ImmersionSpec, resolution: [usize; 2], tol: &Tolerances) -> Result<QuadratureGrid> {
    if resolution[0] < 8 || resolution[1] < 8 {
        return Err(Error::Config(format!(
            "resolution {}x{} is below 8 per axis",
            resolution[0], resolution[1]
        )));
    }
    let [n1, n2] = resolution;
    let mut nodes = Vec::with_capacity(n1 * n2);
    let mut weights = Vec::with_capacity(n1 * n2);
    match spec.chart {
        Chart::Sphere => {
            let (z, w) = gauss_legendre(n1);
            let dphi = 2.0 * PI / n2 as f64;
            // descending z gives ascending θ
            for i in (0..n1).rev() {
                let theta = z[i].acos();
                let sin = (1.0 - z[i] * z[i]).sqrt();
                for j in 0..n2 {
                    nodes.push([theta, j as f64 * dphi]);
                    weights.push(w[i] * dphi / sin);
                }
            }
        }
        Chart::Torus => {
            let du = 2.0 * PI / n1 as f64;
            let dv = 2.0 * PI / n2 as f64;
            for i in 0..n1 {
                for j in 0..n2 {
                    nodes.push([i as f64 * du, j as f64 * dv]);
                    weights.push(du * dv);
                }
            }
        }
    }
    let area_elements = nodes
        .iter()
        .enumerate()
        .map(|(index, &p)| {
            let jet = spec.eval_jet(p, 1, tol.pole_margin).map_err(|e| node_error(index, p, e))?;
            Ok(metric(&jet).determinant().max(0.0).sqrt())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(QuadratureGrid {
        chart: spec.chart,
        resolution,
        nodes,
        weights,
        area_elements,
    })
}

fn node_error(index: usize, p: [f64; 2], e: Error) -> Error {
    Error::Node {
        index,
        u: p[0],
        v: p[1],
        source: Box::new(e),
    }
}

/// Σ w·√det g·field over nodes, compensated, in node order.
pub fn integrate(field: &[f64], grid: &QuadratureGrid) -> f64 {
    assert_eq!(field.len(), grid.len(), "field has one value per node");
    neumaier_sum(field.iter().enumerate().map(|(i, f)| grid.area_weight(i) * f))
}

/// Integrates a field evaluated on demand; the lowest-index failing node is reported.
pub fn integrate_with(grid: &QuadratureGrid, f: impl Fn([f64; 2]) -> Result<f64> + Sync) -> Result<f64> {
    let values = grid
        .nodes
        .par_iter()
        .enumerate()
        .map(|(i, &p)| f(p).map_err(|e| node_error(i, p, e)))
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(integrate(&values, grid))
}

/// Runs the full per-node pipeline over the grid on the current rayon pool.
pub fn sample_grid(spec: &ImmersionSpec, grid: &QuadratureGrid, tol: &Tolerances) -> Result<Vec<NodeSample>> {
    grid.nodes
        .par_iter()
        .enumerate()
        .map(|(i, &p)| evaluate_node(spec, p, tol).map_err(|e| node_error(i, p, e)))
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

/// min, max and area-weighted mean of a field.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldStats {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

impl FieldStats {
    pub fn spread(&self) -> f64 {
        self.max - self.min
    }
}

pub fn field_stats(values: &[f64], grid: &QuadratureGrid) -> FieldStats {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    FieldStats {
        min,
        max,
        mean: integrate(values, grid) / grid.area(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntegralReport {
    pub area: f64,
    pub integral_k: f64,
    /// ∫K − 2πχ.
    pub gauss_bonnet_residual: f64,
    pub integral_s: f64,
    pub integral_laplacian_s: f64,
    /// ∫[S(3S−4) − (S−2λ₂)²].
    pub gap1_lhs: f64,
    /// 2∫B₁ with B₁ = 4(|a₁|² + |a₂|²).
    pub gap1_rhs: f64,
    pub gap1_residual: f64,
    /// ∫[S(3S−4)(3S−5) + ½(16−9S)(S−2λ₂)²].
    pub gap2_form1: f64,
    /// ∫[(S/2)(S−2)(9S−20) + 2(ρ⊥)²(9S−16)].
    pub gap2_form2: f64,
    pub integral_rho_perp_sq: f64,
    /// 1 + √(1 + ∫(ρ⊥)²/Area).
    pub bound_445: f64,
    pub mean_u: f64,
    pub max_u: f64,
    pub min_rho_perp: f64,
}

pub fn integral_report(
    spec: &ImmersionSpec,
    grid: &QuadratureGrid,
    samples: &[NodeSample],
    tol: &Tolerances,
) -> Result<IntegralReport> {
    let field = |f: &dyn Fn(&NodeSample) -> f64| -> Vec<f64> { samples.iter().map(f).collect() };
    let int = |f: &dyn Fn(&NodeSample) -> f64| integrate(&field(f), grid);

    let area = grid.area();
    let integral_k = int(&|n| n.inv.k);
    let gap_sq = |n: &NodeSample| (n.inv.s - 2.0 * n.inv.lambda2).powi(2);
    let gap1_lhs = int(&|n| n.inv.s * (3.0 * n.inv.s - 4.0) - gap_sq(n));
    let gap1_rhs = 2.0 * int(&|n| n.b1_direct);
    let gap2_form1 = int(&|n| {
        let s = n.inv.s;
        s * (3.0 * s - 4.0) * (3.0 * s - 5.0) + 0.5 * (16.0 - 9.0 * s) * gap_sq(n)
    });
    let gap2_form2 = int(&|n| {
        let s = n.inv.s;
        0.5 * s * (s - 2.0) * (9.0 * s - 20.0) + 2.0 * n.inv.rho_perp.powi(2) * (9.0 * s - 16.0)
    });
    let integral_rho_perp_sq = int(&|n| n.inv.rho_perp.powi(2));
    let u = field(&|n| n.inv.u);
    let u_stats = field_stats(&u, grid);

    for (what, value) in [("first gap integrand", gap1_lhs), ("second gap integrand", gap2_form1)] {
        if value / area < -tol.nonneg {
            return Err(Error::InvariantViolation(format!(
                "{what} integrates to {value:.6e} (per area {:.3e}) on {}",
                value / area,
                spec.name
            )));
        }
    }

    Ok(IntegralReport {
        area,
        integral_k,
        gauss_bonnet_residual: integral_k - 2.0 * PI * spec.euler_char as f64,
        integral_s: int(&|n| n.inv.s),
        integral_laplacian_s: int(&|n| n.laplacian_s),
        gap1_lhs,
        gap1_rhs,
        gap1_residual: (gap1_lhs - gap1_rhs).abs(),
        gap2_form1,
        gap2_form2,
        integral_rho_perp_sq,
        bound_445: 1.0 + (1.0 + integral_rho_perp_sq / area).sqrt(),
        mean_u: u_stats.mean,
        max_u: u_stats.max,
        min_rho_perp: samples.iter().map(|n| n.inv.rho_perp).fold(f64::INFINITY, f64::min),
    })
}
