//! Numeric thresholds used across the pipeline, with their defaults.
//!
//! Every threshold can be overridden from the command line as `key=value`;
//! the effective set is echoed into each run report.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Tolerances {
    /// max |Σ X_i² − 1| at validation samples.
    pub unit_image: f64,
    /// max |h_11 + h_22| at validation samples.
    pub minimality: f64,
    /// Codazzi, trace and alias residuals of the third-order coefficients.
    pub codazzi: f64,
    /// Disagreement between Richardson levels of the Laplacian of S.
    pub extrapolation: f64,
    /// |B₁(Simons) − B₁(direct)| per node.
    pub b1_cross: f64,
    /// Allowed negative DDVV slack S² − ρ₀⊥.
    pub ddvv: f64,
    /// Relative spread (max − min)/(1 + max|·|) below which a field is constant.
    pub constancy: f64,
    /// max ρ⊥ below which the normal bundle counts as flat.
    pub flat_normal: f64,
    /// Area-normalized nonnegativity slack for the integral formulas.
    pub nonneg: f64,
    /// Slack allowed when comparing a measured extreme with a theorem's bound.
    pub bound: f64,
    /// Minimum distance of a sphere-chart point from the poles, in radians.
    pub pole_margin: f64,
    /// Fraction of flagged nodes tolerated before the run is distrusted.
    pub flag_budget: f64,
    /// Base step of the Richardson stencil for h_ijk.
    pub grad_step: f64,
    /// Base step of the Richardson stencil for the Laplacian of S.
    pub laplacian_step: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            unit_image: 1e-12,
            minimality: 1e-8,
            codazzi: 1e-6,
            extrapolation: 1e-4,
            b1_cross: 1e-4,
            ddvv: 1e-10,
            constancy: 1e-8,
            flat_normal: 1e-8,
            nonneg: 1e-6,
            bound: 1e-8,
            pole_margin: 1e-3,
            flag_budget: 0.01,
            grad_step: 1e-4,
            laplacian_step: 1e-3,
        }
    }
}

impl Tolerances {
    /// Keys in report order.
    pub const KEYS: [&'static str; 14] = [
        "unit_image",
        "minimality",
        "codazzi",
        "extrapolation",
        "b1_cross",
        "ddvv",
        "constancy",
        "flat_normal",
        "nonneg",
        "bound",
        "pole_margin",
        "flag_budget",
        "grad_step",
        "laplacian_step",
    ];

    fn slot(&mut self, key: &str) -> Option<&mut f64> {
        Some(match key {
            "unit_image" => &mut self.unit_image,
            "minimality" => &mut self.minimality,
            "codazzi" => &mut self.codazzi,
            "extrapolation" => &mut self.extrapolation,
            "b1_cross" => &mut self.b1_cross,
            "ddvv" => &mut self.ddvv,
            "constancy" => &mut self.constancy,
            "flat_normal" => &mut self.flat_normal,
            "nonneg" => &mut self.nonneg,
            "bound" => &mut self.bound,
            "pole_margin" => &mut self.pole_margin,
            "flag_budget" => &mut self.flag_budget,
            "grad_step" => &mut self.grad_step,
            "laplacian_step" => &mut self.laplacian_step,
            _ => return None,
        })
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.clone().slot(key).map(|v| *v)
    }

    /// Applies one `key=value` override.
    pub fn apply(&mut self, spec: &str) -> Result<()> {
        let (key, value) = spec
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("tolerance override `{spec}` is not key=value")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("tolerance `{key}` has non-numeric value `{value}`")))?;
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::Config(format!("tolerance `{key}` must be positive and finite")));
        }
        let slot = self
            .slot(key.trim())
            .ok_or_else(|| Error::Config(format!("unknown tolerance key `{key}`")))?;
        *slot = value;
        Ok(())
    }

    pub fn entries(&self) -> Vec<(&'static str, f64)> {
        Self::KEYS.iter().map(|k| (*k, self.get(k).unwrap())).collect()
    }
}
