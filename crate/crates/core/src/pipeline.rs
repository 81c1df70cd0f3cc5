//! End-to-end evaluation of one surface: grid, per-node invariants,
//! integrals and the gap certificate.

use crate::error::{Error, Result};
use crate::gaps::{certify, Fields, GapCertificate};
use crate::geoquad::{build_grid, integral_report, sample_grid, IntegralReport, QuadratureGrid};
use crate::invariants::NodeSample;
use crate::surface::load_immersion;
use crate::surface::spec::ImmersionSpec;
use crate::tolerances::Tolerances;

/// Cross-route residuals are compared against this, relative to 1 + S².
const CROSS_ROUTE: f64 = 1e-10;

/// How many nodes failed each trust check, and the worst residuals seen.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrustSummary {
    pub nodes: usize,
    pub flagged: usize,
    pub minimality: usize,
    pub codazzi: usize,
    pub extrapolation: usize,
    pub b1_cross: usize,
    pub max_minimality_residual: f64,
    pub max_codazzi_residual: f64,
    pub max_laplacian_error: f64,
    pub max_b1_cross: f64,
    pub max_rho0_residual: f64,
    pub max_lambda_residual: f64,
    pub max_lambda_rest: f64,
    pub max_u_residual: f64,
    pub max_norm_residual: f64,
    pub max_gram_residual: f64,
    pub min_ddvv_slack: f64,
}

impl TrustSummary {
    pub fn from_samples(samples: &[NodeSample]) -> Self {
        let mut t = TrustSummary {
            nodes: samples.len(),
            min_ddvv_slack: f64::INFINITY,
            ..Default::default()
        };
        for n in samples {
            let f = n.flags;
            t.flagged += f.any() as usize;
            t.minimality += f.minimality as usize;
            t.codazzi += f.codazzi as usize;
            t.extrapolation += f.extrapolation as usize;
            t.b1_cross += f.b1_cross as usize;
            t.max_minimality_residual = t.max_minimality_residual.max(n.shape.minimality_residual);
            t.max_codazzi_residual = t.max_codazzi_residual.max(n.grad.symmetry_residual());
            t.max_laplacian_error = t.max_laplacian_error.max(n.laplacian_error);
            t.max_b1_cross = t.max_b1_cross.max(n.b1_cross);
            t.max_rho0_residual = t.max_rho0_residual.max(n.inv.rho0_residual);
            t.max_lambda_residual = t.max_lambda_residual.max(n.inv.lambda_residual);
            t.max_lambda_rest = t.max_lambda_rest.max(n.inv.lambda_rest);
            t.max_u_residual = t.max_u_residual.max(n.inv.u_residual);
            t.max_norm_residual = t.max_norm_residual.max(n.inv.norm_residual);
            t.max_gram_residual = t.max_gram_residual.max(n.inv.gram_residual);
            t.min_ddvv_slack = t.min_ddvv_slack.min(n.inv.ddvv_slack);
        }
        t
    }

    pub fn flagged_fraction(&self) -> f64 {
        if self.nodes == 0 {
            0.0
        } else {
            self.flagged as f64 / self.nodes as f64
        }
    }
}

fn check_cross_routes(spec: &ImmersionSpec, samples: &[NodeSample]) -> Result<()> {
    for (i, n) in samples.iter().enumerate() {
        let scale = 1.0 + n.inv.s * n.inv.s;
        let checks = [
            ("commutator vs closed-form ρ₀⊥", n.inv.rho0_residual),
            ("closed-form vs eigensolver λ", n.inv.lambda_residual),
            ("eigenvalues beyond the second", n.inv.lambda_rest),
            ("u = (3 − t)S/2", n.inv.u_residual),
            ("2S² = ρ₀⊥ + 2|A|²", n.inv.norm_residual),
            ("tr A = S", n.inv.trace_residual),
            ("A outer-product vs Gram form", n.inv.gram_residual),
        ];
        for (what, r) in checks {
            if !(r <= CROSS_ROUTE * scale) {
                return Err(Error::Node {
                    index: i,
                    u: n.point[0],
                    v: n.point[1],
                    source: Box::new(Error::InvariantViolation(format!(
                        "{what} residual {r:.3e} on {}",
                        spec.name
                    ))),
                });
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct SurfaceRun {
    /// The selector the surface was loaded from (catalog name or path).
    pub source: String,
    pub spec: ImmersionSpec,
    pub grid: QuadratureGrid,
    pub samples: Vec<NodeSample>,
    pub fields: Fields,
    pub integrals: IntegralReport,
    pub certificate: GapCertificate,
    pub trust: TrustSummary,
}

/// Evaluates one surface on the current rayon pool.
pub fn run_surface(source: &str, spec: ImmersionSpec, resolution: [usize; 2], tol: &Tolerances) -> Result<SurfaceRun> {
    let grid = build_grid(&spec, resolution, tol)?;
    let samples = sample_grid(&spec, &grid, tol)?;
    check_cross_routes(&spec, &samples)?;
    let integrals = integral_report(&spec, &grid, &samples, tol)?;
    let fields = Fields::from_samples(&samples);
    let certificate = certify(&spec, &fields, &integrals, tol);
    let trust = TrustSummary::from_samples(&samples);
    Ok(SurfaceRun {
        source: source.to_string(),
        spec,
        grid,
        samples,
        fields,
        integrals,
        certificate,
        trust,
    })
}

/// Outcome of a multi-surface verify: the runs that completed, the process
/// exit code and one diagnostic line per problem.
#[derive(Clone, Debug)]
pub struct Verification {
    pub runs: Vec<SurfaceRun>,
    pub exit_code: i32,
    pub diagnostics: Vec<String>,
}

/// Loads and evaluates each source in order, stopping at the first error.
/// Exit code 1 on a violated certificate, 3 when a surface has more flagged
/// nodes than `tol.flag_budget` allows, otherwise the error's own code.
pub fn verify_sources(sources: &[String], resolution: [usize; 2], tol: &Tolerances) -> Verification {
    let mut runs = Vec::new();
    let mut diagnostics = Vec::new();
    let mut exit_code = 0;
    for source in sources {
        match load_immersion(source, tol).and_then(|spec| run_surface(source, spec, resolution, tol)) {
            Ok(run) => runs.push(run),
            Err(e) => {
                diagnostics.push(format!("{source}: {e}"));
                exit_code = e.exit_code();
                break;
            }
        }
    }
    if exit_code == 0 {
        for run in &runs {
            for v in run.certificate.violations() {
                diagnostics.push(format!(
                    "{}: {} violated (margin {:.3e}; measured {:?})",
                    run.spec.name, v.theorem, v.margin, v.measured
                ));
                exit_code = 1;
            }
        }
    }
    if exit_code == 0 {
        for run in &runs {
            if run.trust.flagged_fraction() > tol.flag_budget {
                diagnostics.push(format!(
                    "{}: {} of {} nodes flagged as numerically untrusted",
                    run.spec.name, run.trust.flagged, run.trust.nodes
                ));
                exit_code = 3;
            }
        }
    }
    Verification {
        runs,
        exit_code,
        diagnostics,
    }
}
