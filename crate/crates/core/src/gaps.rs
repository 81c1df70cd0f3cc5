//! Closed-form constants, threshold functions, pinching roots and per-surface
//! gap certificates.
//!
//! Certificates encode each rigidity theorem as a hypothesis → conclusion
//! check on measured fields. A "consistent" verdict means the theorem was not
//! falsified at the sampled resolution.

use std::f64::consts::PI;
use std::io::Write;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::geoquad::{field_stats, FieldStats, IntegralReport, QuadratureGrid};
use crate::invariants::NodeSample;
use crate::ratpoly::{rat, Rational};
use crate::surface::spec::{Chart, ImmersionSpec};
use crate::tolerances::Tolerances;

/// Left endpoint of the threshold domain, where the discriminant vanishes.
pub fn tau_star() -> f64 {
    (9.0 + 3.0 * 5f64.sqrt()).sqrt() / 4.0
}

/// The common value of both thresholds at `tau_star()`, in closed form.
pub fn threshold_at_tau_star() -> f64 {
    let r5 = 5f64.sqrt();
    (30.0 + 2.0 * r5) / 11.0 - (15.0 + r5) * (9.0 + 3.0 * r5).sqrt() / 66.0
}

#[derive(Clone, Debug, PartialEq)]
pub struct CalabiConstants {
    pub s: u32,
    pub r: f64,
    pub k: f64,
    /// Squared norm of the second fundamental form, 2/r² − 2K.
    pub s_norm: f64,
    pub u: f64,
    /// N in S^N.
    pub ambient_dim: u32,
    pub area: f64,
    /// `(K, S, u)` as exact rationals when r = 1.
    pub exact: Option<(Rational, Rational, Rational)>,
}

pub fn calabi_constants(s: u32, r: f64) -> Result<CalabiConstants> {
    if s < 1 || !(r > 0.0 && r.is_finite()) {
        return Err(Error::Domain(format!("Calabi constants need s ≥ 1 and r > 0, got s = {s}, r = {r}")));
    }
    let sf = s as f64;
    let k = 2.0 / (sf * (sf + 1.0) * r * r);
    let s_norm = 2.0 / (r * r) - 2.0 * k;
    let exact = (r == 1.0).then(|| {
        let k = rat(2, s as i64 * (s as i64 + 1));
        let sn = rat(2, 1) - &k * rat(2, 1);
        let u = &sn * rat(3, 2);
        (k, sn, u)
    });
    let (k, s_norm) = match &exact {
        Some((k, sn, _)) => (k.to_f64().unwrap(), sn.to_f64().unwrap()),
        None => (k, s_norm),
    };
    Ok(CalabiConstants {
        s,
        r,
        k,
        s_norm,
        u: 1.5 * s_norm,
        ambient_dim: 2 * s,
        area: 4.0 * PI / k,
        exact,
    })
}

/// Values of the threshold functions at one τ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Thresholds {
    pub tau: f64,
    pub t_a: f64,
    pub t_b: f64,
    pub hat_a: f64,
    pub hat_b: f64,
    pub sigma: f64,
}

pub fn threshold_t(tau: f64) -> Result<Thresholds> {
    if !(tau >= tau_star() && tau <= 1.0) {
        return Err(Error::Domain(format!(
            "τ = {tau} lies outside [τ*, 1] = [{:.17}, 1]; the discriminant (8τ² − 9/2)² − 45/4 must be nonnegative",
            tau_star()
        )));
    }
    let t2 = tau * tau;
    let denom = 18.0 - 9.0 * t2;
    // clamp roundoff at the left endpoint
    let disc = ((8.0 * t2 - 4.5).powi(2) - 11.25).max(0.0);
    let root = disc.sqrt() / denom;
    let centre = (27.0 - 8.0 * t2) / denom;
    let scale = (3.0 - tau) / 2.0;
    let t_a = centre + root;
    let t_b = centre - root;
    Ok(Thresholds {
        tau,
        t_a,
        t_b,
        hat_a: scale * t_a,
        hat_b: scale * t_b,
        sigma: (3.0 - tau) * root,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PinchingRoots {
    pub gamma: f64,
    pub s0: f64,
    pub s0_prime: f64,
    /// (40 + 12γ)/(18 + 9γ).
    pub gamma_bound: f64,
}

/// Roots of 9S² + (9γ/2 − 20)S − 8γ = 0 by the cancellation-free formula.
pub fn pinching_roots(gamma: f64) -> Result<PinchingRoots> {
    if !(0.0..=4.0).contains(&gamma) {
        return Err(Error::Domain(format!("γ = {gamma} lies outside [0, 4]")));
    }
    let b = 4.5 * gamma - 20.0;
    let c = -8.0 * gamma;
    let disc = b * b - 36.0 * c;
    // b < 0 on the domain, so −b + √disc never cancels
    let q = (-b + disc.sqrt()) / 2.0;
    Ok(PinchingRoots {
        gamma,
        s0: q / 9.0,
        s0_prime: c / q,
        gamma_bound: (40.0 + 12.0 * gamma) / (18.0 + 9.0 * gamma),
    })
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| {
        if i + 1 == n {
            hi
        } else {
            lo + (hi - lo) * i as f64 / (n - 1) as f64
        }
    })
}

pub fn threshold_table(tau_min: f64, tau_max: f64, points: usize) -> Result<Vec<Thresholds>> {
    if points < 2 {
        return Err(Error::Config(format!("τ grid needs at least 2 points, got {points}")));
    }
    if tau_max < tau_min {
        return Err(Error::Config(format!("τ range [{tau_min}, {tau_max}] is empty")));
    }
    linspace(tau_min, tau_max, points).map(threshold_t).collect()
}

pub fn pinching_table(points: usize) -> Result<Vec<PinchingRoots>> {
    if points < 2 {
        return Err(Error::Config(format!("γ grid needs at least 2 points, got {points}")));
    }
    linspace(0.0, 4.0, points).map(pinching_roots).collect()
}

/// Monotonicity and sign checks on a τ table; returns one message per failure.
pub fn check_threshold_table(rows: &[Thresholds]) -> Vec<String> {
    let mut failures = Vec::new();
    for w in rows.windows(2) {
        if w[1].hat_a - w[0].hat_a < -1e-12 {
            failures.push(format!("T̂_A decreases between τ = {} and {}", w[0].tau, w[1].tau));
        }
        if w[1].hat_b - w[0].hat_b > 1e-12 {
            failures.push(format!("T̂_B increases between τ = {} and {}", w[0].tau, w[1].tau));
        }
    }
    for r in rows {
        if r.sigma < 0.0 || (r.hat_a - r.hat_b - r.sigma).abs() > 1e-12 {
            failures.push(format!("σ mismatch at τ = {}", r.tau));
        }
    }
    failures
}

/// Root and endpoint checks on a γ table.
pub fn check_pinching_table(rows: &[PinchingRoots]) -> Vec<String> {
    let mut failures = Vec::new();
    for r in rows {
        let residual = 9.0 * r.s0 * r.s0 + (4.5 * r.gamma - 20.0) * r.s0 - 8.0 * r.gamma;
        if residual.abs() > 1e-10 {
            failures.push(format!("S0 residual {residual:.3e} at γ = {}", r.gamma));
        }
        if r.s0 < 2.0 - 1e-12 || r.s0_prime > 0.0 {
            failures.push(format!("root ordering S0 ≥ 2 ≥ 0 ≥ S0' fails at γ = {}", r.gamma));
        }
    }
    for w in rows.windows(2) {
        if w[1].s0 - w[0].s0 > 1e-12 {
            failures.push(format!("S0 increases between γ = {} and {}", w[0].gamma, w[1].gamma));
        }
    }
    failures
}

fn csv_number(x: f64) -> String {
    format!("{:.16e}", x + 0.0)
}

pub fn write_threshold_csv<W: Write>(out: W, rows: &[Thresholds]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(["tau", "T_A", "T_B", "hat_T_A", "hat_T_B", "sigma"]).map_err(csv_err)?;
    for r in rows {
        w.write_record([r.tau, r.t_a, r.t_b, r.hat_a, r.hat_b, r.sigma].map(csv_number))
            .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_pinching_csv<W: Write>(out: W, rows: &[PinchingRoots]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(["gamma", "S0", "S0_prime", "gamma_bound"]).map_err(csv_err)?;
    for r in rows {
        w.write_record([r.gamma, r.s0, r.s0_prime, r.gamma_bound].map(csv_number))
            .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Consistent,
    Violated,
    Inapplicable,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Consistent => "consistent",
            Verdict::Violated => "violated",
            Verdict::Inapplicable => "inapplicable",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CertEntry {
    pub theorem: &'static str,
    pub hypothesis: String,
    pub hypothesis_holds: bool,
    pub conclusion: String,
    pub measured: Vec<(&'static str, f64)>,
    /// Measured quantity minus the asserted bound; NaN when no bound applies.
    pub margin: f64,
    pub verdict: Verdict,
    pub note: Option<String>,
}

impl CertEntry {
    fn new(theorem: &'static str, hypothesis: impl Into<String>, conclusion: impl Into<String>) -> Self {
        CertEntry {
            theorem,
            hypothesis: hypothesis.into(),
            hypothesis_holds: false,
            conclusion: conclusion.into(),
            measured: Vec::new(),
            margin: f64::NAN,
            verdict: Verdict::Inapplicable,
            note: None,
        }
    }

    fn measure(mut self, items: &[(&'static str, f64)]) -> Self {
        self.measured.extend_from_slice(items);
        self
    }

    fn inapplicable(mut self, note: impl Into<String>) -> Self {
        self.hypothesis_holds = false;
        self.verdict = Verdict::Inapplicable;
        self.note = Some(note.into());
        self
    }

    fn decide(mut self, conclusion_holds: bool, margin: f64) -> Self {
        self.hypothesis_holds = true;
        self.margin = margin;
        self.verdict = if conclusion_holds {
            Verdict::Consistent
        } else {
            Verdict::Violated
        };
        self
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GapCertificate {
    pub surface: String,
    pub entries: Vec<CertEntry>,
}

impl GapCertificate {
    pub fn violations(&self) -> impl Iterator<Item = &CertEntry> {
        self.entries.iter().filter(|e| e.verdict == Verdict::Violated)
    }

    pub fn entry(&self, theorem: &str) -> Option<&CertEntry> {
        self.entries.iter().find(|e| e.theorem == theorem)
    }
}

/// Per-node field values a certificate reads.
#[derive(Clone, Debug, Default)]
pub struct Fields {
    pub s: Vec<f64>,
    pub u: Vec<f64>,
    pub k: Vec<f64>,
    pub t: Vec<f64>,
    pub rho_perp: Vec<f64>,
    pub lambda1: Vec<f64>,
    pub lambda2: Vec<f64>,
    pub hopf_re: Vec<f64>,
    pub hopf_im: Vec<f64>,
}

impl Fields {
    pub fn from_samples(samples: &[NodeSample]) -> Self {
        let f = |g: fn(&NodeSample) -> f64| samples.iter().map(g).collect();
        Fields {
            s: f(|n| n.inv.s),
            u: f(|n| n.inv.u),
            k: f(|n| n.inv.k),
            t: f(|n| n.inv.t),
            rho_perp: f(|n| n.inv.rho_perp),
            lambda1: f(|n| n.inv.lambda1),
            lambda2: f(|n| n.inv.lambda2),
            hopf_re: f(|n| n.inv.hopf_re),
            hopf_im: f(|n| n.inv.hopf_im),
        }
    }

    pub fn stats(&self, grid: &QuadratureGrid) -> Vec<(&'static str, FieldStats)> {
        vec![
            ("S", field_stats(&self.s, grid)),
            ("u", field_stats(&self.u, grid)),
            ("K", field_stats(&self.k, grid)),
            ("t", field_stats(&self.t, grid)),
            ("rho_perp", field_stats(&self.rho_perp, grid)),
            ("lambda1", field_stats(&self.lambda1, grid)),
            ("lambda2", field_stats(&self.lambda2, grid)),
            ("hopf_re", field_stats(&self.hopf_re, grid)),
            ("hopf_im", field_stats(&self.hopf_im, grid)),
        ]
    }
}

fn min_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::INFINITY, f64::min)
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// (max − min) < tol·(1 + max|·|).
pub fn is_constant(v: &[f64], tol: f64) -> bool {
    max_of(v) - min_of(v) < tol * (1.0 + max_abs(v))
}

/// S(s) = 2 − 2K(s) of the Calabi sphere of degree s.
fn calabi_s(s: u32) -> f64 {
    let sf = s as f64;
    2.0 * (sf - 1.0) * (sf + 2.0) / (sf * (sf + 1.0))
}

fn check_ab(f: &Fields, tol: &Tolerances) -> CertEntry {
    let e = CertEntry::new(
        "ab",
        "M is a 2-sphere",
        "|a|² = |b|² = S/4, ⟨a,b⟩ = 0 and λ₁ = λ₂ = S/2 everywhere",
    );
    let dev_l: Vec<f64> = f.lambda1.iter().zip(&f.lambda2).map(|(a, b)| a - b).collect();
    let worst = max_abs(&f.hopf_re).max(max_abs(&f.hopf_im)).max(max_abs(&dev_l));
    e.measure(&[
        ("max_abs_hopf_re", max_abs(&f.hopf_re)),
        ("max_abs_hopf_im", max_abs(&f.hopf_im)),
        ("max_abs_lambda1_minus_lambda2", max_abs(&dev_l)),
    ])
    .decide(worst < tol.bound, tol.bound - worst)
}

fn check_main1_1(f: &Fields, tol: &Tolerances) -> CertEntry {
    let e = CertEntry::new(
        "main1.1",
        "S + λ₂ is constant",
        "K is constant and M is a Calabi sphere, S = 2(s−1)(s+2)/(s(s+1))",
    );
    let spread = max_of(&f.u) - min_of(&f.u);
    let e = e.measure(&[("u_spread", spread)]);
    if !is_constant(&f.u, tol.constancy) {
        return e.inapplicable("S + λ₂ is not constant");
    }
    let s_mean = f.s.iter().sum::<f64>() / f.s.len() as f64;
    let degree = (1..=64u32)
        .min_by(|a, b| (calabi_s(*a) - s_mean).abs().total_cmp(&(calabi_s(*b) - s_mean).abs()))
        .unwrap();
    let dev = (calabi_s(degree) - s_mean).abs();
    let holds = is_constant(&f.k, tol.constancy) && dev < tol.bound;
    e.measure(&[
        ("K_spread", max_of(&f.k) - min_of(&f.k)),
        ("calabi_degree", degree as f64),
        ("abs_S_minus_calabi_S", dev),
    ])
    .decide(holds, tol.bound - dev)
}

fn check_main1_2(f: &Fields, q: usize, tol: &Tolerances) -> CertEntry {
    let e = CertEntry::new("main1.2", "S + λ₂ > 2 everywhere", "max (S + λ₂) ≥ 5/2");
    let min_u = min_of(&f.u);
    let max_u = max_of(&f.u);
    let e = e.measure(&[("min_u", min_u), ("max_u", max_u)]);
    if !(min_u > 2.0 + tol.bound) {
        return e.inapplicable("min (S + λ₂) does not exceed 2");
    }
    let margin = max_u - 2.5;
    let e = e.decide(margin >= -tol.bound, margin);
    if margin.abs() < tol.bound {
        // equality forces q = 4 and K = 1/6
        let k_dev = max_abs(&f.k.iter().map(|k| k - 1.0 / 6.0).collect::<Vec<_>>());
        let e = e.measure(&[("codimension", q as f64), ("max_abs_K_minus_1_6", k_dev)]);
        let ok = q == 4 && k_dev < tol.bound;
        CertEntry {
            verdict: if ok { Verdict::Consistent } else { Verdict::Violated },
            ..e
        }
        .with_note("equality attained: requires q = 4 and K = 1/6")
    } else {
        e
    }
}

fn check_simon_window(f: &Fields, tol: &Tolerances) -> CertEntry {
    let e = CertEntry::new("simongap2", "4/3 ≤ S ≤ 5/3 everywhere", "S ≡ 4/3 or S ≡ 5/3");
    let (lo, hi) = (min_of(&f.s), max_of(&f.s));
    let e = e.measure(&[("min_S", lo), ("max_S", hi)]);
    if !(lo >= 4.0 / 3.0 - tol.bound && hi <= 5.0 / 3.0 + tol.bound) {
        return e.inapplicable("S leaves the window [4/3, 5/3]");
    }
    let dev = [4.0 / 3.0, 5.0 / 3.0]
        .iter()
        .map(|c| (lo - c).abs().max((hi - c).abs()))
        .fold(f64::INFINITY, f64::min);
    e.decide(dev < tol.bound, tol.bound - dev)
}

fn check_main4(f: &Fields, tol: &Tolerances) -> CertEntry {
    let e = CertEntry::new(
        "main4",
        "universal cover is not a 2-sphere",
        "max u ≥ 8/3, or max u ≥ 3 − √(1 − min (ρ⊥)²) with min ρ⊥ ≤ 1",
    );
    let max_u = max_of(&f.u);
    let min_rho = min_of(&f.rho_perp);
    let first = max_u - 8.0 / 3.0;
    let second = if min_rho <= 1.0 {
        max_u - (3.0 - (1.0 - min_rho * min_rho).sqrt())
    } else {
        f64::NEG_INFINITY
    };
    let margin = first.max(second);
    e.measure(&[("max_u", max_u), ("min_rho_perp", min_rho)])
        .decide(margin >= -tol.bound, margin)
}

fn check_main4_5(f: &Fields, report: &IntegralReport, tol: &Tolerances) -> CertEntry {
    let e = CertEntry::new(
        "main4.5",
        "universal cover is not a 2-sphere",
        "max u ≥ 1 + √(1 + ∫(ρ⊥)²/Area)",
    );
    let max_u = max_of(&f.u);
    let margin = max_u - report.bound_445;
    e.measure(&[("max_u", max_u), ("bound_445", report.bound_445)])
        .decide(margin >= -tol.bound, margin)
}

fn check_main5_1(f: &Fields, chart: Chart, tol: &Tolerances) -> CertEntry {
    let e = CertEntry::new(
        "main5.1",
        "2 ≤ S ≤ S0(γ) and ρ⊥ ≤ ½√(γ|K|) for some 0 ≤ γ ≤ 4",
        "S ≡ 2 and M is the Clifford torus",
    );
    // smallest admissible γ; S0 decreases in γ so it is the best choice
    let mut gamma: f64 = 0.0;
    for (rho, k) in f.rho_perp.iter().zip(&f.k) {
        let need = 4.0 * rho * rho;
        if need <= tol.flat_normal {
            continue;
        }
        gamma = gamma.max(if k.abs() > 0.0 { need / k.abs() } else { f64::INFINITY });
    }
    let (lo, hi) = (min_of(&f.s), max_of(&f.s));
    let e = e.measure(&[("gamma", gamma), ("min_S", lo), ("max_S", hi)]);
    if gamma > 4.0 {
        return e.inapplicable("no γ ≤ 4 bounds ρ⊥ by ½√(γ|K|)");
    }
    let roots = pinching_roots(gamma).expect("γ checked to lie in [0, 4]");
    let e = e.measure(&[("S0", roots.s0)]);
    if !(lo >= 2.0 - tol.bound && hi <= roots.s0 + tol.bound) {
        return e.inapplicable("S leaves [2, S0(γ)]");
    }
    let dev = (lo - 2.0).abs().max((hi - 2.0).abs());
    e.decide(dev < tol.bound && chart == Chart::Torus, tol.bound - dev)
}

/// The strict-u pinching certificate, evaluated on arbitrary field values.
pub fn check_main5_2(s: &[f64], u: &[f64], rho_perp: &[f64], tol: &Tolerances) -> CertEntry {
    let e = CertEntry::new(
        "main5.2",
        "u > 2 and ρ⊥ ≤ ½√((u − 2)γS) for some 0 ≤ γ ≤ 2/3",
        "max u ≥ max S > (40 + 12γ)/(18 + 9γ)",
    );
    let min_u = min_of(u);
    if !(min_u > 2.0 + tol.bound) {
        return e.measure(&[("min_u", min_u)]).inapplicable("min u does not exceed 2");
    }
    let mut gamma: f64 = 0.0;
    for ((s, u), rho) in s.iter().zip(u).zip(rho_perp) {
        let need = 4.0 * rho * rho;
        if need > 0.0 {
            gamma = gamma.max(need / ((u - 2.0) * s));
        }
    }
    let e = e.measure(&[("min_u", min_u), ("gamma", gamma)]);
    if gamma > 2.0 / 3.0 {
        return e.inapplicable("no γ ≤ 2/3 bounds ρ⊥");
    }
    let bound = (40.0 + 12.0 * gamma) / (18.0 + 9.0 * gamma);
    let (max_u, max_s) = (max_of(u), max_of(s));
    let margin = (max_s - bound).min(max_u - max_s);
    e.measure(&[("max_u", max_u), ("max_S", max_s), ("gamma_bound", bound)])
        .decide(max_u >= max_s - tol.bound && max_s > bound - tol.bound, margin)
}

fn check_main6_1(f: &Fields, euler_char: i32, area: f64, tol: &Tolerances) -> CertEntry {
    let e = CertEntry::new(
        "main6.1",
        "ρ⊥ ≥ ½√(1 − τ²)S with τ = max t",
        "max u ≥ (3 − τ)(1 − 2πχ/Area)",
    );
    let tau = max_of(&f.t).clamp(0.0, 1.0);
    let bound = (3.0 - tau) * (1.0 - 2.0 * PI * euler_char as f64 / area);
    let max_u = max_of(&f.u);
    let margin = max_u - bound;
    e.measure(&[("tau", tau), ("max_u", max_u), ("bound", bound)])
        .decide(margin >= -tol.bound, margin)
}

fn check_main6_2(f: &Fields, tol: &Tolerances) -> CertEntry {
    let e = CertEntry::new(
        "main6.2",
        "ρ⊥ ≤ ½√(1 − τ²)S and u > T̂_B(τ) with τ = min t ≥ τ*",
        "max u ≥ T̂_A(τ)",
    );
    let tau = min_of(&f.t).min(1.0);
    let min_u = min_of(&f.u);
    let e = e.measure(&[("tau", tau), ("min_u", min_u)]);
    let Ok(th) = threshold_t(tau) else {
        return e.inapplicable("min t lies below τ*");
    };
    let e = e.measure(&[("hat_T_B", th.hat_b), ("hat_T_A", th.hat_a)]);
    if !(min_u > th.hat_b + tol.bound) {
        return e.inapplicable("min u does not exceed T̂_B(τ)");
    }
    let margin = max_of(&f.u) - th.hat_a;
    e.decide(margin >= -tol.bound, margin)
}

fn check_main6_flat(f: &Fields, tol: &Tolerances) -> CertEntry {
    let e = CertEntry::new("main6.flat", "normal bundle flat and u > 2", "max u > 20/9");
    let max_rho = max_of(&f.rho_perp);
    let min_u = min_of(&f.u);
    let e = e.measure(&[("max_rho_perp", max_rho), ("min_u", min_u)]);
    if !(max_rho < tol.flat_normal) {
        return e.inapplicable("normal bundle is not flat");
    }
    if !(min_u > 2.0 + tol.bound) {
        return e.inapplicable("min u does not exceed 2");
    }
    let margin = max_of(&f.u) - 20.0 / 9.0;
    e.decide(margin > -tol.bound, margin)
}

fn check_bryant(f: &Fields, tol: &Tolerances) -> CertEntry {
    let e = CertEntry::new("bryant", "S is constant", "S ≤ 2 (no minimal surface has S ≡ const > 2)");
    let e = e.measure(&[("min_S", min_of(&f.s)), ("max_S", max_of(&f.s))]);
    if !is_constant(&f.s, tol.constancy) {
        return e.inapplicable("S is not constant");
    }
    let margin = 2.0 - max_of(&f.s);
    e.decide(margin >= -tol.bound, margin)
}

/// Evaluates every theorem's hypothesis on the measured fields.
pub fn certify(spec: &ImmersionSpec, fields: &Fields, report: &IntegralReport, tol: &Tolerances) -> GapCertificate {
    let sphere = spec.chart == Chart::Sphere;
    let q = spec.codimension();
    let mut entries = Vec::new();
    let not_sphere = "universal cover is a 2-sphere";
    let only_sphere = "M is not a 2-sphere";
    if sphere {
        entries.push(check_ab(fields, tol));
        entries.push(check_main1_1(fields, tol));
        entries.push(check_main1_2(fields, q, tol));
        entries.push(check_simon_window(fields, tol));
        entries.push(CertEntry::new("main4", "universal cover is not a 2-sphere", "").inapplicable(not_sphere));
        entries.push(CertEntry::new("main4.5", "universal cover is not a 2-sphere", "").inapplicable(not_sphere));
    } else {
        for id in ["ab", "main1.1", "main1.2", "simongap2"] {
            entries.push(CertEntry::new(id, "M is a 2-sphere", "").inapplicable(only_sphere));
        }
        entries.push(check_main4(fields, tol));
        entries.push(check_main4_5(fields, report, tol));
    }
    entries.push(check_main5_1(fields, spec.chart, tol));
    entries.push(
        check_main5_2(&fields.s, &fields.u, &fields.rho_perp, tol)
            .with_note("synthetic-only coverage: catalog surfaces never satisfy the hypothesis"),
    );
    entries.push(check_main6_1(fields, spec.euler_char, report.area, tol));
    entries.push(check_main6_2(fields, tol));
    entries.push(check_main6_flat(fields, tol));
    entries.push(check_bryant(fields, tol));
    GapCertificate {
        surface: spec.name.clone(),
        entries,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn calabi_exact_values() {
        let c = calabi_constants(3, 1.0).unwrap();
        let (k, s, u) = c.exact.clone().unwrap();
        assert_eq!((k, s, u), (rat(1, 6), rat(5, 3), rat(5, 2)));
        assert_eq!(c.ambient_dim, 6);
        assert!((c.area - 24.0 * PI).abs() < 1e-12);
        assert_eq!(calabi_constants(1, 1.0).unwrap().s_norm, 0.0);
        assert!(calabi_constants(0, 1.0).is_err());
    }

    #[test]
    fn thresholds_at_one() {
        let t = threshold_t(1.0).unwrap();
        assert!((t.hat_a - 20.0 / 9.0).abs() < 1e-14);
        assert!((t.hat_b - 2.0).abs() < 1e-14);
        assert!(threshold_t(0.9).is_err());
    }

    #[test]
    fn pinching_endpoints() {
        let r = pinching_roots(4.0).unwrap();
        assert_eq!(r.s0, 2.0);
        let r = pinching_roots(0.0).unwrap();
        assert!((r.s0 - 20.0 / 9.0).abs() < 1e-15);
        assert_eq!(r.s0_prime, 0.0);
        assert_eq!(pinching_roots(2.0 / 3.0).unwrap().gamma_bound, 2.0);
        assert!(pinching_roots(4.1).is_err());
    }

    #[test]
    fn main5_2_synthetic() {
        let tol = Tolerances::default();
        // flat normal bundle, γ = 0: needs max S > 40/18
        let s = vec![2.3, 2.25, 2.4];
        let u = s.clone();
        let rho = vec![0.0; 3];
        assert_eq!(check_main5_2(&s, &u, &rho, &tol).verdict, Verdict::Consistent);
        let s_low = vec![2.1, 2.1];
        assert_eq!(check_main5_2(&s_low, &s_low, &[0.0, 0.0], &tol).verdict, Verdict::Violated);
        assert_eq!(check_main5_2(&[1.0], &[1.5], &[0.0], &tol).verdict, Verdict::Inapplicable);
    }
}
