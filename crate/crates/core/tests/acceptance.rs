//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines always reach the output.

use std::f64::consts::PI;
use std::process::Command;
use std::time::Instant;

use minimal_gap_lab::gaps::{pinching_roots, tau_star, threshold_t, threshold_table};
use minimal_gap_lab::invariants::point_invariants;
use minimal_gap_lab::lemmas::{run_suite, IdentityGroup};
use minimal_gap_lab::pipeline::{run_surface, SurfaceRun};
use minimal_gap_lab::surface::catalog::{lookup, ENTRIES};
use minimal_gap_lab::surface::ShapePair;
use minimal_gap_lab::tolerances::Tolerances;
use nalgebra::{DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn close(x: f64, want: f64, tol: f64) -> bool {
    (x - want).abs() <= tol
}

struct Catalog {
    runs: Vec<SurfaceRun>,
}

impl Catalog {
    fn load() -> Result<Self, String> {
        let tol = Tolerances::default();
        let mut runs = Vec::new();
        for e in &ENTRIES {
            let spec = lookup(e.name).map_err(|e| e.to_string())?;
            runs.push(run_surface(e.name, spec, [64, 128], &tol).map_err(|err| format!("{}: {err}", e.name))?);
        }
        Ok(Catalog { runs })
    }

    fn get(&self, name: &str) -> &SurfaceRun {
        self.runs.iter().find(|r| r.spec.name == name).expect("catalog surface")
    }
}

fn range(v: impl Iterator<Item = f64>) -> (f64, f64) {
    v.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)))
}

fn random_pairs(n: usize, seed: u64) -> Vec<ShapePair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let q = rng.gen_range(1..=8);
            let a = DVector::<f64>::from_fn(q, |_, _| rng.gen_range(-1.0..1.0));
            let b = DVector::<f64>::from_fn(q, |_, _| rng.gen_range(-1.0..1.0));
            ShapePair::from_ab(a, b)
        })
        .collect()
}

fn symbolic_suite() -> Outcome {
    let start = Instant::now();
    let suite = run_suite(6, None);
    let secs = start.elapsed().as_secs_f64();
    let count = |g: IdentityGroup, q: usize| {
        suite
            .reports
            .iter()
            .filter(|r| r.group == g && (r.q == Some(q) || r.q.is_none()))
            .count()
    };
    let mut shape_ok = true;
    for q in 1..=6 {
        shape_ok &= count(IdentityGroup::InvariantIdentities, q) == 4
            && count(IdentityGroup::EigenCharpoly, q) == 1
            && count(IdentityGroup::B2Decomposition, q) == 1
            && count(IdentityGroup::ThirdOrderContractions, q) == 3;
    }
    shape_ok &= suite.reports.iter().filter(|r| r.group == IdentityGroup::GapFactorizations).count() >= 3;
    ensure(
        suite.all_proved() && shape_ok && secs < 60.0,
        format!(
            "{} identities, {} failed, composition {}, {secs:.2} s",
            suite.reports.len(),
            suite.failures().count(),
            if shape_ok { "complete" } else { "INCOMPLETE" }
        ),
    )
}

fn eigenvalue_formula() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut worst_rest: f64 = 0.0;
    for sp in random_pairs(10_000, 101) {
        let inv = point_invariants(&sp, 1e-10).map_err(|e| e.to_string())?;
        let m = 2.0 * (&sp.a * sp.a.transpose() + &sp.b * sp.b.transpose());
        let mut eig: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
        eig.sort_by(|x, y| y.total_cmp(x));
        let e2 = eig.get(1).copied().unwrap_or(0.0);
        worst = worst.max((inv.lambda1 - eig[0]).abs() / inv.s).max((inv.lambda2 - e2).abs() / inv.s);
        worst_rest = worst_rest.max(eig.iter().skip(2).fold(0.0f64, |m, e| m.max(e.abs())) / inv.s);
    }
    ensure(
        worst < 1e-10 && worst_rest < 1e-10,
        format!("max relative λ error {worst:.2e}, max remaining |λ|/S {worst_rest:.2e}"),
    )
}

fn ddvv(cat: &Catalog) -> Outcome {
    let mut worst: f64 = f64::INFINITY;
    for sp in random_pairs(10_000, 202) {
        let inv = point_invariants(&sp, 1e-10).map_err(|e| e.to_string())?;
        worst = worst.min(inv.s * inv.s + 1e-10 - inv.rho0);
    }
    for run in &cat.runs {
        for n in &run.samples {
            worst = worst.min(n.inv.s * n.inv.s + 1e-10 - n.inv.rho0);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let mut equality: f64 = 0.0;
    for _ in 0..1000 {
        let q = rng.gen_range(2..=8);
        let a = DVector::<f64>::from_fn(q, |_, _| rng.gen_range(-1.0..1.0));
        let mut c = DVector::<f64>::from_fn(q, |_, _| rng.gen_range(-1.0..1.0));
        c -= &a * (a.dot(&c) / a.norm_squared());
        let scale = a.norm() / c.norm();
        let inv = point_invariants(&ShapePair::from_ab(a, c * scale), 1e-10).map_err(|e| e.to_string())?;
        equality = equality.max(inv.ddvv_slack.abs());
    }
    ensure(
        worst >= 0.0 && equality < 1e-12,
        format!("min (S² + 1e−10 − ρ₀) = {worst:.2e}, max equality-case slack {equality:.2e}"),
    )
}

fn catalog_regression(cat: &Catalog) -> Outcome {
    let mut failures = Vec::new();
    let mut check = |what: String, ok: bool| {
        if !ok {
            failures.push(what);
        }
    };
    let tol = 1e-6;
    let field = |run: &SurfaceRun, f: fn(&minimal_gap_lab::invariants::NodeSample) -> f64| {
        range(run.samples.iter().map(f))
    };
    let s_of = |n: &minimal_gap_lab::invariants::NodeSample| n.inv.s;
    let k_of = |n: &minimal_gap_lab::invariants::NodeSample| n.inv.k;
    let u_of = |n: &minimal_gap_lab::invariants::NodeSample| n.inv.u;
    let rho_of = |n: &minimal_gap_lab::invariants::NodeSample| n.inv.rho_perp;
    let identically = |(lo, hi): (f64, f64), want: f64, tol: f64| close(lo, want, tol) && close(hi, want, tol);

    let equator = cat.get("equator");
    check("equator S".into(), identically(field(equator, s_of), 0.0, tol));

    let clifford = cat.get("clifford");
    check("clifford S".into(), identically(field(clifford, s_of), 2.0, tol));
    check("clifford K".into(), identically(field(clifford, k_of), 0.0, tol));
    check("clifford area".into(), close(clifford.integrals.area, 2.0 * PI * PI, tol));
    check("clifford ρ⊥".into(), identically(field(clifford, rho_of), 0.0, tol));
    check("clifford u".into(), identically(field(clifford, u_of), 2.0, tol));

    let veronese = cat.get("veronese");
    check("veronese S".into(), identically(field(veronese, s_of), 4.0 / 3.0, tol));
    check("veronese K".into(), identically(field(veronese, k_of), 1.0 / 3.0, tol));
    check("veronese area".into(), close(veronese.integrals.area, 12.0 * PI, tol));
    check("veronese u".into(), identically(field(veronese, u_of), 2.0, tol));

    let calabi3 = cat.get("calabi3");
    check("calabi3 S".into(), identically(field(calabi3, s_of), 5.0 / 3.0, tol));
    check("calabi3 K".into(), identically(field(calabi3, k_of), 1.0 / 6.0, tol));
    check("calabi3 area".into(), close(calabi3.integrals.area, 24.0 * PI, tol));
    check("calabi3 u = 5/2 to 1e−8".into(), identically(field(calabi3, u_of), 2.5, 1e-8));

    let (u_lo, u_hi) = field(calabi3, u_of);
    ensure(
        failures.is_empty(),
        if failures.is_empty() {
            format!("all values within tolerance; calabi3 u ∈ [{u_lo:.15}, {u_hi:.15}]")
        } else {
            format!("failed: {}", failures.join(", "))
        },
    )
}

fn gauss_bonnet(cat: &Catalog) -> Outcome {
    let mut worst_gb: f64 = 0.0;
    let mut worst_lap: f64 = 0.0;
    let mut ok = true;
    for run in &cat.runs {
        let r = &run.integrals;
        let gb = r.gauss_bonnet_residual.abs() / (1.0 + r.integral_k.abs());
        worst_gb = worst_gb.max(gb);
        worst_lap = worst_lap.max(r.integral_laplacian_s.abs());
        ok &= gb < 1e-6 && r.integral_laplacian_s.abs() < 1e-6;
    }
    ensure(ok, format!("max relative Gauss–Bonnet residual {worst_gb:.2e}, max |∫ΔS| {worst_lap:.2e}"))
}

fn first_gap(cat: &Catalog) -> Outcome {
    let mut detail = Vec::new();
    let mut ok = true;
    for name in ["clifford", "veronese", "calabi3"] {
        let r = &cat.get(name).integrals;
        let rel = r.gap1_residual / r.gap1_lhs.abs().max(r.gap1_rhs.abs()).max(1.0);
        ok &= rel < 1e-4;
        detail.push(format!("{name} {rel:.1e}"));
    }
    let c3 = &cat.get("calabi3").integrals;
    let rel40 = (c3.gap1_lhs / (40.0 * PI) - 1.0).abs().max((c3.gap1_rhs / (40.0 * PI) - 1.0).abs());
    ok &= rel40 < 1e-4;
    ensure(ok, format!("relative residuals {}; calabi3 vs 40π {rel40:.1e}", detail.join(", ")))
}

fn second_gap(cat: &Catalog) -> Outcome {
    let mut ok = true;
    let mut worst_agree: f64 = 0.0;
    for run in &cat.runs {
        let r = &run.integrals;
        let rel = (r.gap2_form1 - r.gap2_form2).abs() / r.gap2_form1.abs().max(r.gap2_form2.abs()).max(1.0);
        worst_agree = worst_agree.max(rel);
        ok &= rel < 1e-6 && r.gap2_form1 / r.area >= -1e-6 && r.gap2_form2 / r.area >= -1e-6;
    }
    let mut zeros = Vec::new();
    for name in ["veronese", "calabi3"] {
        let r = &cat.get(name).integrals;
        let z = (r.gap2_form1 / r.area).abs().max((r.gap2_form2 / r.area).abs());
        ok &= z < 1e-5;
        zeros.push(format!("{name} {z:.1e}"));
    }
    ensure(
        ok,
        format!("max relative form disagreement {worst_agree:.1e}; per-area values {}", zeros.join(", ")),
    )
}

fn two_route_b1(cat: &Catalog) -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for run in &cat.runs {
        let good = run.samples.iter().filter(|n| (n.b1_simons - n.b1_direct).abs() < 1e-4).count();
        let frac = good as f64 / run.samples.len() as f64;
        ok &= frac >= 0.99;
        detail.push(format!("{} {:.2}%", run.spec.name, 100.0 * frac));
    }
    let c3 = cat.get("calabi3");
    let dev = c3
        .samples
        .iter()
        .map(|n| (n.b1_simons - 5.0 / 6.0).abs().max((n.b1_direct - 5.0 / 6.0).abs()))
        .fold(0.0f64, f64::max);
    ok &= dev < 1e-4;
    ensure(ok, format!("nodes agreeing: {}; calabi3 max |B₁ − 5/6| {dev:.1e}", detail.join(", ")))
}

fn thresholds() -> Outcome {
    let run = || -> Result<(bool, String), minimal_gap_lab::Error> {
        let one = threshold_t(1.0)?;
        let star = threshold_t(tau_star())?;
        let rows = threshold_table(tau_star(), 1.0, 10_000)?;
        let monotone = rows
            .windows(2)
            .all(|w| w[1].hat_a - w[0].hat_a >= -1e-12 && w[1].hat_b - w[0].hat_b <= 1e-12);
        let sigma = threshold_t(0.991)?.sigma;
        let (g0, g4) = (pinching_roots(0.0)?, pinching_roots(4.0)?);
        let ok = close(one.hat_a, 20.0 / 9.0, 1e-12)
            && close(one.hat_b, 2.0, 1e-12)
            && close(star.hat_a, star.hat_b, 1e-10)
            && monotone
            && sigma > 0.02
            && close(g0.s0, 20.0 / 9.0, 1e-12)
            && close(g4.s0, 2.0, 1e-12);
        Ok((
            ok,
            format!(
                "T̂_A(1) − 20/9 = {:.1e}, T̂_B(1) − 2 = {:.1e}, σ(τ*) = {:.1e}, monotone {monotone}, σ(0.991) = {sigma:.4}",
                one.hat_a - 20.0 / 9.0,
                one.hat_b - 2.0,
                star.hat_a - star.hat_b
            ),
        ))
    };
    match run() {
        Ok((ok, detail)) => ensure(ok, detail),
        Err(e) => Err(e.to_string()),
    }
}

fn clifford_bound(cat: &Catalog) -> Outcome {
    let r = &cat.get("clifford").integrals;
    ensure(
        close(r.bound_445, 2.0, 1e-8) && close(r.max_u, 2.0, 1e-8),
        format!("bound {:.15}, max u {:.15}", r.bound_445, r.max_u),
    )
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut reports = Vec::new();
    for workers in ["1", "8"] {
        let path = dir.path().join(format!("w{workers}.json"));
        let status = Command::new(env!("CARGO_BIN_EXE_minimal-gap-lab"))
            .args(["verify", "--surface", "calabi3", "--workers", workers, "--json"])
            .arg(&path)
            .output()
            .map_err(|e| e.to_string())?;
        if !status.status.success() {
            return Err(format!("verify exited with {:?}", status.status.code()));
        }
        reports.push(std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    ensure(
        reports[0] == reports[1],
        format!("{} bytes with 1 worker, {} bytes with 8", reports[0].len(), reports[1].len()),
    )
}

fn main() {
    let start = Instant::now();
    let catalog = Catalog::load();
    let with_catalog = |f: fn(&Catalog) -> Outcome| -> Outcome {
        match &catalog {
            Ok(c) => f(c),
            Err(e) => Err(format!("catalog run failed: {e}")),
        }
    };
    let results: Vec<(&str, Outcome)> = vec![
        ("symbolic suite", symbolic_suite()),
        ("eigenvalue formula", eigenvalue_formula()),
        ("DDVV", with_catalog(ddvv)),
        ("catalog regression", with_catalog(catalog_regression)),
        ("Gauss–Bonnet", with_catalog(gauss_bonnet)),
        ("first gap integral formula", with_catalog(first_gap)),
        ("second gap integral formula", with_catalog(second_gap)),
        ("two-route B₁", with_catalog(two_route_b1)),
        ("thresholds", thresholds()),
        ("clifford bound attained", with_catalog(clifford_bound)),
        ("determinism", determinism()),
    ];
    let mut failed = 0;
    for (i, (name, outcome)) in results.iter().enumerate() {
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed in {:.1} s",
        results.len() - failed,
        results.len(),
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
