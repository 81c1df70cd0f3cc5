//! Run reports as a key-value tree with fixed field order and fixed number
//! formatting, written as JSON.
//!
//! Floats are printed with 17 significant digits in scientific notation and
//! non-finite values as `null`, so identical runs give identical bytes.

use std::fmt::Write as _;

use crate::gaps::{CertEntry, GapCertificate};
use crate::geoquad::{field_stats, FieldStats, IntegralReport};
use crate::lemmas::IdentitySuite;
use crate::pipeline::{SurfaceRun, TrustSummary};
use crate::tolerances::Tolerances;

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Null,
    Bool(bool),
    Int(i64),
    Num(f64),
    Str(String),
    Arr(Vec<Node>),
    Obj(Vec<(String, Node)>),
}

impl From<f64> for Node {
    fn from(x: f64) -> Self {
        Node::Num(x)
    }
}

impl From<bool> for Node {
    fn from(x: bool) -> Self {
        Node::Bool(x)
    }
}

impl From<usize> for Node {
    fn from(x: usize) -> Self {
        Node::Int(x as i64)
    }
}

impl From<i32> for Node {
    fn from(x: i32) -> Self {
        Node::Int(x as i64)
    }
}

impl From<&str> for Node {
    fn from(x: &str) -> Self {
        Node::Str(x.to_string())
    }
}

impl From<String> for Node {
    fn from(x: String) -> Self {
        Node::Str(x)
    }
}

impl<T: Into<Node>> From<Option<T>> for Node {
    fn from(x: Option<T>) -> Self {
        x.map_or(Node::Null, Into::into)
    }
}

/// Builder for objects that keeps insertion order.
#[derive(Default)]
pub struct Obj(Vec<(String, Node)>);

impl Obj {
    pub fn new() -> Self {
        Obj(Vec::new())
    }

    pub fn field(mut self, key: &str, value: impl Into<Node>) -> Self {
        self.0.push((key.to_string(), value.into()));
        self
    }

    pub fn build(self) -> Node {
        Node::Obj(self.0)
    }
}

pub fn format_number(x: f64) -> String {
    if x.is_finite() {
        format!("{:.16e}", x + 0.0)
    } else {
        "null".to_string()
    }
}

fn quote(s: &str) -> String {
    serde_json::to_string(s).expect("string serialization cannot fail")
}

impl Node {
    pub fn get(&self, key: &str) -> Option<&Node> {
        match self {
            Node::Obj(fields) => fields.iter().find(|(k, _)| k == key).map(|(_, v)| v),
            _ => None,
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Node::Num(x) => Some(*x),
            Node::Int(i) => Some(*i as f64),
            _ => None,
        }
    }

    /// Pretty JSON with two-space indentation and a trailing newline.
    pub fn to_json(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, 0);
        out.push('\n');
        out
    }

    fn write(&self, out: &mut String, depth: usize) {
        let pad = |out: &mut String, d: usize| {
            for _ in 0..d {
                out.push_str("  ");
            }
        };
        match self {
            Node::Null => out.push_str("null"),
            Node::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Node::Int(i) => {
                let _ = write!(out, "{i}");
            }
            Node::Num(x) => out.push_str(&format_number(*x)),
            Node::Str(s) => out.push_str(&quote(s)),
            Node::Arr(items) if items.is_empty() => out.push_str("[]"),
            Node::Obj(fields) if fields.is_empty() => out.push_str("{}"),
            Node::Arr(items) => {
                // short scalar arrays stay on one line
                if items.len() <= 4 && items.iter().all(|i| !matches!(i, Node::Arr(_) | Node::Obj(_))) {
                    out.push('[');
                    for (k, item) in items.iter().enumerate() {
                        if k > 0 {
                            out.push_str(", ");
                        }
                        item.write(out, depth);
                    }
                    out.push(']');
                    return;
                }
                out.push_str("[\n");
                for (k, item) in items.iter().enumerate() {
                    pad(out, depth + 1);
                    item.write(out, depth + 1);
                    out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
                }
                pad(out, depth);
                out.push(']');
            }
            Node::Obj(fields) => {
                out.push_str("{\n");
                for (k, (key, value)) in fields.iter().enumerate() {
                    pad(out, depth + 1);
                    out.push_str(&quote(key));
                    out.push_str(": ");
                    value.write(out, depth + 1);
                    out.push_str(if k + 1 < fields.len() { ",\n" } else { "\n" });
                }
                pad(out, depth);
                out.push('}');
            }
        }
    }
}

fn stats_node(s: &FieldStats) -> Node {
    Obj::new().field("min", s.min).field("max", s.max).field("mean", s.mean).build()
}

fn tolerances_node(tol: &Tolerances) -> Node {
    Node::Obj(tol.entries().into_iter().map(|(k, v)| (k.to_string(), Node::Num(v))).collect())
}

fn integrals_node(r: &IntegralReport) -> Node {
    Obj::new()
        .field("area", r.area)
        .field("integral_K", r.integral_k)
        .field("gauss_bonnet_residual", r.gauss_bonnet_residual)
        .field("integral_S", r.integral_s)
        .field("integral_laplacian_S", r.integral_laplacian_s)
        .field("gap1_lhs", r.gap1_lhs)
        .field("gap1_rhs", r.gap1_rhs)
        .field("gap1_residual", r.gap1_residual)
        .field("gap2_form1", r.gap2_form1)
        .field("gap2_form2", r.gap2_form2)
        .field("integral_rho_perp_sq", r.integral_rho_perp_sq)
        .field("bound_445", r.bound_445)
        .field("mean_u", r.mean_u)
        .field("max_u", r.max_u)
        .field("min_rho_perp", r.min_rho_perp)
        .build()
}

fn trust_node(t: &TrustSummary) -> Node {
    Obj::new()
        .field("nodes", t.nodes)
        .field("flagged", t.flagged)
        .field("flagged_fraction", t.flagged_fraction())
        .field(
            "flag_counts",
            Obj::new()
                .field("minimality", t.minimality)
                .field("codazzi", t.codazzi)
                .field("extrapolation", t.extrapolation)
                .field("b1_cross", t.b1_cross)
                .build(),
        )
        .field("max_minimality_residual", t.max_minimality_residual)
        .field("max_codazzi_residual", t.max_codazzi_residual)
        .field("max_laplacian_error", t.max_laplacian_error)
        .field("max_b1_cross", t.max_b1_cross)
        .field("max_rho0_residual", t.max_rho0_residual)
        .field("max_lambda_residual", t.max_lambda_residual)
        .field("max_lambda_rest", t.max_lambda_rest)
        .field("max_u_residual", t.max_u_residual)
        .field("max_norm_residual", t.max_norm_residual)
        .field("max_gram_residual", t.max_gram_residual)
        .field("min_ddvv_slack", t.min_ddvv_slack)
        .build()
}

fn entry_node(e: &CertEntry) -> Node {
    Obj::new()
        .field("theorem", e.theorem)
        .field("hypothesis", e.hypothesis.as_str())
        .field("hypothesis_holds", e.hypothesis_holds)
        .field("conclusion", e.conclusion.as_str())
        .field(
            "measured",
            Node::Obj(e.measured.iter().map(|(k, v)| (k.to_string(), Node::Num(*v))).collect()),
        )
        .field("margin", e.margin)
        .field("verdict", e.verdict.as_str())
        .field("note", e.note.clone())
        .build()
}

pub fn certificate_node(c: &GapCertificate) -> Node {
    Node::Arr(c.entries.iter().map(entry_node).collect())
}

fn points_node(run: &SurfaceRun) -> Node {
    Node::Arr(
        run.samples
            .iter()
            .map(|n| {
                Obj::new()
                    .field("coords", Node::Arr(vec![n.point[0].into(), n.point[1].into()]))
                    .field("S", n.inv.s)
                    .field("normA2", n.inv.norm_a2)
                    .field("rho0", n.inv.rho0)
                    .field("rho_perp", n.inv.rho_perp)
                    .field("lambda1", n.inv.lambda1)
                    .field("lambda2", n.inv.lambda2)
                    .field("u", n.inv.u)
                    .field("t", n.inv.t)
                    .field("K", n.inv.k)
                    .field("b1_simons", n.b1_simons)
                    .field("b1_direct", n.b1_direct)
                    .field("ddvv_slack", n.inv.ddvv_slack)
                    .field("hopf_re", n.inv.hopf_re)
                    .field("hopf_im", n.inv.hopf_im)
                    .field("flagged", n.flags.any())
                    .build()
            })
            .collect(),
    )
}

pub fn surface_node(run: &SurfaceRun, with_points: bool) -> Node {
    let spec = &run.spec;
    let mut fields: Vec<(String, Node)> = run
        .fields
        .stats(&run.grid)
        .iter()
        .map(|(k, s)| (k.to_string(), stats_node(s)))
        .collect();
    let extra = |f: fn(&crate::invariants::NodeSample) -> f64| -> Node {
        let v: Vec<f64> = run.samples.iter().map(f).collect();
        stats_node(&field_stats(&v, &run.grid))
    };
    fields.push(("b1_simons".into(), extra(|n| n.b1_simons)));
    fields.push(("b1_direct".into(), extra(|n| n.b1_direct)));
    fields.push(("laplacian_S".into(), extra(|n| n.laplacian_s)));

    let mut obj = Obj::new()
        .field("name", spec.name.as_str())
        .field("source", run.source.as_str())
        .field("chart", spec.chart.as_str())
        .field("ambient_dim", spec.ambient_dim)
        .field("codimension", spec.codimension())
        .field("euler_char", spec.euler_char)
        .field(
            "grid",
            Obj::new()
                .field(
                    "resolution",
                    Node::Arr(vec![run.grid.resolution[0].into(), run.grid.resolution[1].into()]),
                )
                .field("nodes", run.grid.len())
                .build(),
        )
        .field("trust", trust_node(&run.trust))
        .field("fields", Node::Obj(fields))
        .field("integrals", integrals_node(&run.integrals))
        .field("certificate", certificate_node(&run.certificate));
    if with_points {
        obj = obj.field("points", points_node(run));
    }
    obj.build()
}

/// Configuration echoed into a verify report. The worker count is left out
/// so reports do not depend on it.
pub struct VerifyEcho<'a> {
    pub surfaces: &'a [String],
    pub resolution: [usize; 2],
    pub tolerances: &'a Tolerances,
    pub points: bool,
}

pub fn verify_report(echo: &VerifyEcho, runs: &[SurfaceRun], exit_code: i32, diagnostics: &[String]) -> Node {
    Obj::new()
        .field("tool", "minimal-gap-lab")
        .field("version", env!("CARGO_PKG_VERSION"))
        .field("command", "verify")
        .field(
            "config",
            Obj::new()
                .field("surfaces", Node::Arr(echo.surfaces.iter().map(|s| s.as_str().into()).collect()))
                .field(
                    "resolution",
                    Node::Arr(vec![echo.resolution[0].into(), echo.resolution[1].into()]),
                )
                .field("tolerances", tolerances_node(echo.tolerances))
                .field("points", echo.points)
                .build(),
        )
        .field("surfaces", Node::Arr(runs.iter().map(|r| surface_node(r, echo.points)).collect()))
        .field(
            "status",
            Obj::new()
                .field("exit_code", exit_code)
                .field("diagnostics", Node::Arr(diagnostics.iter().map(|d| d.as_str().into()).collect()))
                .build(),
        )
        .build()
}

pub fn identities_report(suite: &IdentitySuite, exit_code: i32) -> Node {
    let reports = suite
        .reports
        .iter()
        .map(|r| {
            Obj::new()
                .field("group", r.group.name())
                .field("name", r.name.as_str())
                .field("q", r.q)
                .field("verdict", r.verdict.as_str())
                .field("residual", r.residual.as_ref().map(|p| p.to_string()))
                .field("note", r.note.clone())
                .build()
        })
        .collect();
    Obj::new()
        .field("tool", "minimal-gap-lab")
        .field("version", env!("CARGO_PKG_VERSION"))
        .field("command", "identities")
        .field("config", Obj::new().field("qmax", suite.qmax).build())
        .field("reports", Node::Arr(reports))
        .field(
            "status",
            Obj::new()
                .field("all_proved", suite.all_proved())
                .field("exit_code", exit_code)
                .build(),
        )
        .build()
}
