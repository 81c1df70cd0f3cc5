//! Analytic immersion specs: parsing, canonical serialization, validation and
//! exact jet evaluation.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::jet::{Jet, Taylor2, MAX_ORDER};
use crate::error::{Error, Result};
use crate::tolerances::Tolerances;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chart {
    /// Spherical coordinates (θ, φ) on the unit 2-sphere.
    Sphere,
    /// Angles (u, v) on the flat torus.
    Torus,
}

impl Chart {
    pub fn as_str(self) -> &'static str {
        match self {
            Chart::Sphere => "sphere",
            Chart::Torus => "torus",
        }
    }

    pub fn euler_char(self) -> i32 {
        match self {
            Chart::Sphere => 2,
            Chart::Torus => 0,
        }
    }
}

/// `coeff · x^i y^j z^k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonomialTerm {
    pub coeff: f64,
    pub exps: [u32; 3],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrigKind {
    Cos,
    Sin,
}

/// `coeff · cos(m u + n v)` or `coeff · sin(m u + n v)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrigTerm {
    pub coeff: f64,
    #[serde(rename = "type")]
    pub kind: TrigKind,
    pub freq: [i32; 2],
}

#[derive(Clone, Debug, PartialEq)]
pub enum Components {
    Sphere(Vec<Vec<MonomialTerm>>),
    Torus(Vec<Vec<TrigTerm>>),
}

impl Components {
    pub fn len(&self) -> usize {
        match self {
            Components::Sphere(c) => c.len(),
            Components::Torus(c) => c.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A validated analytic immersion of a closed surface into the unit sphere.
#[derive(Clone, Debug, PartialEq)]
pub struct ImmersionSpec {
    pub name: String,
    pub chart: Chart,
    pub ambient_dim: usize,
    pub euler_char: i32,
    pub components: Components,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    name: String,
    chart: Chart,
    ambient_dim: usize,
    euler_char: i32,
    components: Vec<Vec<RawTerm>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    coeff: f64,
    #[serde(default)]
    exps: Option<[u32; 3]>,
    #[serde(default, rename = "type")]
    kind: Option<TrigKind>,
    #[serde(default)]
    freq: Option<[i32; 2]>,
}

fn field(path: String, message: impl Into<String>) -> Error {
    Error::SpecField {
        path,
        message: message.into(),
    }
}

impl ImmersionSpec {
    /// Parses spec text without numeric validation; `origin` labels errors.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let raw: RawSpec = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            Error::Parse {
                path: format!("{origin}: {path}"),
                line: inner.line(),
                column: inner.column(),
                message: inner.to_string(),
            }
        })?;
        Self::from_raw(raw)
    }

    fn from_raw(raw: RawSpec) -> Result<Self> {
        if raw.name.trim().is_empty() {
            return Err(field("name".into(), "must be non-empty"));
        }
        if raw.ambient_dim < 4 {
            return Err(field(
                "ambient_dim".into(),
                format!("{} is below 4; codimension must be at least 1", raw.ambient_dim),
            ));
        }
        if raw.components.len() != raw.ambient_dim {
            return Err(field(
                "components".into(),
                format!("has {} entries, ambient_dim is {}", raw.components.len(), raw.ambient_dim),
            ));
        }
        if raw.euler_char != raw.chart.euler_char() {
            return Err(field(
                "euler_char".into(),
                format!(
                    "{} does not match the {} chart (expected {})",
                    raw.euler_char,
                    raw.chart.as_str(),
                    raw.chart.euler_char()
                ),
            ));
        }
        let components = match raw.chart {
            Chart::Sphere => {
                let mut out = Vec::with_capacity(raw.components.len());
                for (c, terms) in raw.components.into_iter().enumerate() {
                    let mut comp = Vec::with_capacity(terms.len());
                    for (t, term) in terms.into_iter().enumerate() {
                        let at = format!("components[{c}][{t}]");
                        if term.kind.is_some() || term.freq.is_some() {
                            return Err(field(at, "sphere terms take `exps`, not `type`/`freq`"));
                        }
                        let exps = term.exps.ok_or_else(|| field(format!("{at}.exps"), "missing"))?;
                        if exps.iter().sum::<u32>() > 32 {
                            return Err(field(format!("{at}.exps"), "total degree above 32"));
                        }
                        check_coeff(term.coeff, &at)?;
                        comp.push(MonomialTerm {
                            coeff: term.coeff,
                            exps,
                        });
                    }
                    out.push(comp);
                }
                Components::Sphere(out)
            }
            Chart::Torus => {
                let mut out = Vec::with_capacity(raw.components.len());
                for (c, terms) in raw.components.into_iter().enumerate() {
                    let mut comp = Vec::with_capacity(terms.len());
                    for (t, term) in terms.into_iter().enumerate() {
                        let at = format!("components[{c}][{t}]");
                        if term.exps.is_some() {
                            return Err(field(at, "torus terms take `type`/`freq`, not `exps`"));
                        }
                        let kind = term.kind.ok_or_else(|| field(format!("{at}.type"), "missing"))?;
                        let freq = term.freq.ok_or_else(|| field(format!("{at}.freq"), "missing"))?;
                        check_coeff(term.coeff, &at)?;
                        comp.push(TrigTerm {
                            coeff: term.coeff,
                            kind,
                            freq,
                        });
                    }
                    out.push(comp);
                }
                Components::Torus(out)
            }
        };
        Ok(ImmersionSpec {
            name: raw.name,
            chart: raw.chart,
            ambient_dim: raw.ambient_dim,
            euler_char: raw.euler_char,
            components,
        })
    }

    /// Reads, parses and validates a spec file.
    pub fn from_file(path: &Path, tol: &Tolerances) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let spec = Self::parse(&text, &path.display().to_string())?;
        spec.validate(tol)?;
        Ok(spec)
    }

    /// The canonical text form: JSON with fixed key order and one component per line.
    pub fn to_canonical(&self) -> String {
        let lines: Vec<String> = match &self.components {
            Components::Sphere(c) => c.iter().map(|t| compact(t)).collect(),
            Components::Torus(c) => c.iter().map(|t| compact(t)).collect(),
        };
        format!(
            "{{\n  \"name\": {},\n  \"chart\": \"{}\",\n  \"ambient_dim\": {},\n  \"euler_char\": {},\n  \"components\": [\n    {}\n  ]\n}}\n",
            compact(&self.name),
            self.chart.as_str(),
            self.ambient_dim,
            self.euler_char,
            lines.join(",\n    ")
        )
    }

    pub fn codimension(&self) -> usize {
        self.ambient_dim - 3
    }

    /// Parameter ranges of the chart: (θ, φ) or (u, v).
    pub fn domain(&self) -> [(f64, f64); 2] {
        use std::f64::consts::PI;
        match self.chart {
            Chart::Sphere => [(0.0, PI), (0.0, 2.0 * PI)],
            Chart::Torus => [(0.0, 2.0 * PI), (0.0, 2.0 * PI)],
        }
    }

    /// Exact derivatives of every component up to `order` at a chart point.
    pub fn eval_jet(&self, point: [f64; 2], order: usize, pole_margin: f64) -> Result<Jet> {
        if order > MAX_ORDER {
            return Err(Error::Domain(format!("jet order {order} exceeds {MAX_ORDER}")));
        }
        if !(point[0].is_finite() && point[1].is_finite()) {
            return Err(Error::Domain(format!("non-finite chart point {point:?}")));
        }
        let comps = match &self.components {
            Components::Sphere(comps) => {
                let theta = point[0];
                if theta < pole_margin || theta > std::f64::consts::PI - pole_margin {
                    return Err(Error::Domain(format!(
                        "θ = {theta} is within the pole margin {pole_margin}"
                    )));
                }
                let (st, ct) = Taylor2::variable(theta, 0, order).sin_cos();
                let (sp, cp) = Taylor2::variable(point[1], 1, order).sin_cos();
                let xyz = [st * cp, st * sp, ct];
                let max_exp = comps
                    .iter()
                    .flatten()
                    .flat_map(|t| t.exps)
                    .max()
                    .unwrap_or(0) as usize;
                let powers: Vec<Vec<Taylor2>> = xyz
                    .iter()
                    .map(|&b| {
                        let mut p = vec![Taylor2::constant(1.0, order)];
                        for k in 1..=max_exp {
                            p.push(p[k - 1] * b);
                        }
                        p
                    })
                    .collect();
                comps
                    .iter()
                    .map(|terms| {
                        terms.iter().fold(Taylor2::constant(0.0, order), |acc, t| {
                            let [i, j, k] = t.exps;
                            acc + (powers[0][i as usize] * powers[1][j as usize] * powers[2][k as usize])
                                .scale(t.coeff)
                        })
                    })
                    .collect()
            }
            Components::Torus(comps) => {
                let u = Taylor2::variable(point[0], 0, order);
                let v = Taylor2::variable(point[1], 1, order);
                comps
                    .iter()
                    .map(|terms| {
                        terms.iter().fold(Taylor2::constant(0.0, order), |acc, t| {
                            let arg = u.scale(t.freq[0] as f64) + v.scale(t.freq[1] as f64);
                            let (s, c) = arg.sin_cos();
                            let f = match t.kind {
                                TrigKind::Cos => c,
                                TrigKind::Sin => s,
                            };
                            acc + f.scale(t.coeff)
                        })
                    })
                    .collect()
            }
        };
        Ok(Jet {
            point,
            order,
            comps,
        })
    }

    /// Sample points used to validate a spec: an `n × n` grid of cell centres.
    pub fn sample_points(&self, n: usize) -> Vec<[f64; 2]> {
        let [(a0, a1), (b0, b1)] = self.domain();
        let mut pts = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let s = (i as f64 + 0.5) / n as f64;
                let r = (j as f64 + 0.5) / n as f64;
                pts.push([a0 + (a1 - a0) * s, b0 + (b1 - b0) * r]);
            }
        }
        pts
    }

    /// max |Σ X_i² − 1| over an `n × n` sample grid.
    pub fn unit_image_residual(&self, n: usize, tol: &Tolerances) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for p in self.sample_points(n) {
            let x = self.eval_jet(p, 0, tol.pole_margin)?.position();
            worst = worst.max((x.norm_squared() - 1.0).abs());
        }
        Ok(worst)
    }

    /// Checks the image lies in the unit sphere and the immersion is minimal.
    pub fn validate(&self, tol: &Tolerances) -> Result<()> {
        let unit = self.unit_image_residual(16, tol)?;
        if !(unit <= tol.unit_image) {
            return Err(Error::SpecRejected {
                name: self.name.clone(),
                check: "unit image |X|² − 1",
                max_residual: unit,
                threshold: tol.unit_image,
            });
        }
        let mut minimal: f64 = 0.0;
        for p in self.sample_points(6) {
            let jet = self.eval_jet(p, 2, tol.pole_margin)?;
            let frame = super::frame::adapted_frame(&jet)?;
            let shape = super::shape::second_fundamental_form(&jet, &frame);
            minimal = minimal.max(shape.minimality_residual);
        }
        if !(minimal <= tol.minimality) {
            return Err(Error::SpecRejected {
                name: self.name.clone(),
                check: "minimality |h11 + h22|",
                max_residual: minimal,
                threshold: tol.minimality,
            });
        }
        Ok(())
    }
}

fn compact<T: Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string(value).expect("spec serialization cannot fail")
}

fn check_coeff(c: f64, at: &str) -> Result<()> {
    if c.is_finite() {
        Ok(())
    } else {
        Err(field(format!("{at}.coeff"), "must be finite"))
    }
}

impl fmt::Display for ImmersionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ({} chart, ambient R^{}, q = {}, χ = {})",
            self.name,
            self.chart.as_str(),
            self.ambient_dim,
            self.codimension(),
            self.euler_char
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TORUS: &str = r#"{
        "name": "t", "chart": "torus", "ambient_dim": 4, "euler_char": 0,
        "components": [
            [{"coeff": 0.7071067811865476, "type": "cos", "freq": [1, 0]}],
            [{"coeff": 0.7071067811865476, "type": "sin", "freq": [1, 0]}],
            [{"coeff": 0.7071067811865476, "type": "cos", "freq": [0, 1]}],
            [{"coeff": 0.7071067811865476, "type": "sin", "freq": [0, 1]}]
        ]
    }"#;

    #[test]
    fn parses_and_roundtrips() {
        let spec = ImmersionSpec::parse(TORUS, "inline").unwrap();
        assert_eq!(spec.codimension(), 1);
        let canon = spec.to_canonical();
        let again = ImmersionSpec::parse(&canon, "canon").unwrap();
        assert_eq!(spec, again);
        assert_eq!(canon, again.to_canonical());
        spec.validate(&Tolerances::default()).unwrap();
    }

    #[test]
    fn parse_error_names_the_field() {
        let bad = TORUS.replace("\"freq\": [0, 1]}],\n            [{\"coeff\": 0.7071067811865476, \"type\": \"sin\"", "\"freq\": [0, 1]}],\n            [{\"coeff\": 0.7071067811865476, \"type\": \"tan\"");
        match ImmersionSpec::parse(&bad, "x") {
            Err(Error::Parse { path, line, .. }) => {
                assert!(path.contains("components[3][0].type"), "{path}");
                assert!(line > 1);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn euler_char_must_match_chart() {
        let bad = TORUS.replace("\"euler_char\": 0", "\"euler_char\": 2");
        assert!(matches!(
            ImmersionSpec::parse(&bad, "x"),
            Err(Error::SpecField { path, .. }) if path == "euler_char"
        ));
    }

    #[test]
    fn pole_margin_enforced() {
        let spec = crate::surface::catalog::lookup("veronese").unwrap();
        assert!(matches!(spec.eval_jet([1e-4, 0.0], 2, 1e-3), Err(Error::Domain(_))));
        assert!(spec.eval_jet([2e-3, 0.0], 2, 1e-3).is_ok());
    }
}
