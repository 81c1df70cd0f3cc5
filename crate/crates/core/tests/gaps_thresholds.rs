use minimal_gap_lab::gaps::{
    calabi_constants, certify, check_main5_2, pinching_roots, pinching_table, tau_star, threshold_at_tau_star,
    threshold_t, threshold_table, write_pinching_csv, write_threshold_csv, Fields, Verdict,
};
use minimal_gap_lab::geoquad::{build_grid, integral_report, sample_grid};
use minimal_gap_lab::ratpoly::rat;
use minimal_gap_lab::surface::catalog::{lookup, ENTRIES};
use minimal_gap_lab::tolerances::Tolerances;
use minimal_gap_lab::Error;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn threshold_endpoints() {
    let one = threshold_t(1.0).unwrap();
    assert!((one.hat_a - 20.0 / 9.0).abs() < 1e-12);
    assert!((one.hat_b - 2.0).abs() < 1e-12);
    let star = threshold_t(tau_star()).unwrap();
    assert!((star.hat_a - star.hat_b).abs() < 1e-10);
    assert!((star.hat_a - threshold_at_tau_star()).abs() < 1e-8);
    assert!(threshold_t(0.991).unwrap().sigma > 0.02);
    assert!(matches!(threshold_t(0.9), Err(Error::Domain(m)) if m.contains("discriminant")));
    assert!(threshold_t(1.0 + 1e-12).is_err());
}

#[test]
fn threshold_monotonicity_on_ten_thousand_points() {
    let rows = threshold_table(tau_star(), 1.0, 10_000).unwrap();
    for w in rows.windows(2) {
        assert!(w[1].hat_a - w[0].hat_a >= -1e-12);
        assert!(w[1].hat_b - w[0].hat_b <= 1e-12);
        assert!(w[1].sigma >= 0.0);
        assert!((w[1].hat_a - w[1].hat_b - w[1].sigma).abs() < 1e-12);
    }
    assert!(rows[1..].iter().all(|r| r.sigma > 0.0));
}

/// S(3S−4)(3S−5) + ½(16−9S)t²S² vanishes at both thresholds.
#[test]
fn factorization_link() {
    for row in threshold_table(tau_star(), 1.0, 500).unwrap() {
        let t = row.tau;
        for s in [row.t_a, row.t_b] {
            let p = s * (3.0 * s - 4.0) * (3.0 * s - 5.0) + 0.5 * (16.0 - 9.0 * s) * t * t * s * s;
            assert!(p.abs() < 1e-9, "τ = {t}, S = {s}: {p:e}");
        }
        // Vieta, against the displayed sum and product of roots
        let d = 18.0 - 9.0 * t * t;
        assert!((row.t_a + row.t_b - 2.0 * (27.0 - 8.0 * t * t) / d).abs() < 1e-12);
        assert!((row.t_a * row.t_b - 40.0 / d).abs() < 1e-12);
    }
}

#[test]
fn pinching_roots_and_endpoints() {
    let r0 = pinching_roots(0.0).unwrap();
    assert!((r0.s0 - 20.0 / 9.0).abs() < 1e-12 && r0.s0_prime == 0.0);
    let r4 = pinching_roots(4.0).unwrap();
    assert!((r4.s0 - 2.0).abs() < 1e-12);
    assert!((pinching_roots(2.0 / 3.0).unwrap().gamma_bound - 2.0).abs() < 1e-15);
    let rows = pinching_table(4001).unwrap();
    for r in &rows {
        let g = r.gamma;
        for s in [r.s0, r.s0_prime] {
            assert!((9.0 * s * s + (4.5 * g - 20.0) * s - 8.0 * g).abs() < 1e-10);
        }
        // the displayed closed form
        let closed = (40.0 - 9.0 * g + (81.0 * g * g + 432.0 * g + 1600.0).sqrt()) / 36.0;
        assert!((r.s0 - closed).abs() < 1e-12);
        assert!(r.s0 >= 2.0 - 1e-12 && r.s0_prime <= 0.0);
        if g > 0.0 {
            assert!(r.s0_prime < 0.0);
        }
    }
    for w in rows.windows(2) {
        assert!(w[1].s0 <= w[0].s0 + 1e-12);
    }
    assert!(pinching_roots(4.5).is_err() && pinching_roots(-0.1).is_err());
}

#[test]
fn calabi_constants_exact() {
    let c1 = calabi_constants(1, 1.0).unwrap();
    assert_eq!((c1.k, c1.s_norm), (1.0, 0.0));
    let c2 = calabi_constants(2, 1.0).unwrap();
    assert_eq!(c2.exact.as_ref().unwrap(), &(rat(1, 3), rat(4, 3), rat(2, 1)));
    assert_eq!(c2.ambient_dim, 4);
    let c3 = calabi_constants(3, 1.0).unwrap();
    assert_eq!(c3.exact.as_ref().unwrap(), &(rat(1, 6), rat(5, 3), rat(5, 2)));
    assert!((c3.area - 24.0 * std::f64::consts::PI).abs() < 1e-12);
    let mut last = calabi_constants(1, 1.0).unwrap();
    for s in 2..12 {
        let c = calabi_constants(s, 1.0).unwrap();
        assert!(c.k < last.k && c.s_norm > last.s_norm);
        last = c;
    }
    assert!(calabi_constants(0, 1.0).is_err() && calabi_constants(2, 0.0).is_err());
}

#[test]
fn csv_tables() {
    let mut buf = Vec::new();
    write_threshold_csv(&mut buf, &threshold_table(tau_star(), 1.0, 3).unwrap()).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "tau,T_A,T_B,hat_T_A,hat_T_B,sigma");
    assert_eq!(lines.len(), 4);
    assert!(!text.contains('\r'));
    assert_eq!(lines[1].split(',').nth(5).unwrap(), "0.0000000000000000e0");
    let mut buf = Vec::new();
    write_pinching_csv(&mut buf, &pinching_table(5).unwrap()).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(text.lines().next().unwrap(), "gamma,S0,S0_prime,gamma_bound");
    let last: Vec<f64> = text.lines().last().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(last[0], 4.0);
    assert!((last[1] - 2.0).abs() < 1e-12);
}

#[test]
fn no_catalog_surface_is_violated() {
    let tol = Tolerances::default();
    for e in &ENTRIES {
        let spec = lookup(e.name).unwrap();
        let grid = build_grid(&spec, [16, 32], &tol).unwrap();
        let samples = sample_grid(&spec, &grid, &tol).unwrap();
        let report = integral_report(&spec, &grid, &samples, &tol).unwrap();
        let cert = certify(&spec, &Fields::from_samples(&samples), &report, &tol);
        assert_eq!(cert.violations().count(), 0, "{}: {:?}", e.name, cert.violations().collect::<Vec<_>>());
        let entry = |id: &str| cert.entry(id).unwrap().verdict;
        match e.name {
            "calabi3" => {
                assert_eq!(entry("main1.1"), Verdict::Consistent);
                assert_eq!(entry("main1.2"), Verdict::Consistent);
            }
            "clifford" => {
                assert_eq!(entry("main5.1"), Verdict::Consistent);
                assert_eq!(entry("main6.flat"), Verdict::Inapplicable);
                assert_eq!(entry("main4.5"), Verdict::Consistent);
            }
            "veronese" => {
                assert_eq!(entry("main4"), Verdict::Inapplicable);
                assert_eq!(entry("main4.5"), Verdict::Inapplicable);
                assert_eq!(entry("simongap2"), Verdict::Consistent);
            }
            _ => {}
        }
        assert_eq!(entry("main5.2"), Verdict::Inapplicable);
    }
}

/// Synthetic fields for the branch no catalog surface reaches.
#[test]
fn main5_2_synthetic() {
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut consistent = 0;
    for _ in 0..2000 {
        let n = 50;
        let gamma: f64 = rng.gen_range(0.0..2.0 / 3.0);
        let s: Vec<f64> = (0..n).map(|_| rng.gen_range(2.0..2.6)).collect();
        let u: Vec<f64> = s.iter().map(|s| s + rng.gen_range(0.05..0.3)).collect();
        let rho: Vec<f64> = s
            .iter()
            .zip(&u)
            .map(|(s, u)| 0.5 * ((u - 2.0) * gamma * s).sqrt() * rng.gen_range(0.0..1.0))
            .collect();
        let e = check_main5_2(&s, &u, &rho, &tol);
        assert_ne!(e.verdict, Verdict::Violated);
        consistent += (e.verdict == Verdict::Consistent) as usize;
    }
    assert!(consistent > 1000);
    // a field that meets the hypothesis but not the conclusion is flagged
    let e = check_main5_2(&[2.01, 2.02], &[2.05, 2.06], &[0.0, 0.0], &tol);
    assert_eq!(e.verdict, Verdict::Violated);
}

proptest! {
    #[test]
    fn thresholds_are_ordered(tau in tau_star()..=1.0f64) {
        let t = threshold_t(tau).unwrap();
        prop_assert!(t.hat_a >= t.hat_b - 1e-12);
        prop_assert!(t.t_a >= t.t_b - 1e-12);
        prop_assert!(t.hat_b >= 2.0 - 1e-12 && t.hat_a <= 20.0 / 9.0 + 1e-12);
    }

    #[test]
    fn pinching_order(gamma in 0.0f64..=4.0) {
        let r = pinching_roots(gamma).unwrap();
        prop_assert!(r.s0 >= 2.0 - 1e-12);
        prop_assert!(r.s0_prime <= 0.0);
    }
}
