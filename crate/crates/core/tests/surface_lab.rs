use std::f64::consts::PI;

use minimal_gap_lab::surface::catalog::{lookup, ENTRIES};
use minimal_gap_lab::surface::frame::{adapted_frame, laplace_beltrami_position};
use minimal_gap_lab::surface::spec::ImmersionSpec;
use minimal_gap_lab::surface::{covariant_grad_h, load_immersion, second_fundamental_form};
use minimal_gap_lab::tolerances::Tolerances;
use minimal_gap_lab::Error;
use nalgebra::{DVector, Matrix2};

fn tol() -> Tolerances {
    Tolerances::default()
}

#[test]
fn every_catalog_entry_has_unit_image_on_64x64() {
    for e in &ENTRIES {
        let spec = lookup(e.name).unwrap();
        let r = spec.unit_image_residual(64, &tol()).unwrap();
        assert!(r < 1e-12, "{}: {r:e}", e.name);
    }
}

#[test]
fn catalog_dimensions() {
    let clifford = lookup("clifford").unwrap();
    assert_eq!((clifford.chart.as_str(), clifford.ambient_dim, clifford.codimension()), ("torus", 4, 1));
    assert_eq!(clifford.euler_char, 0);
    let veronese = lookup("veronese").unwrap();
    assert_eq!((veronese.chart.as_str(), veronese.ambient_dim, veronese.codimension()), ("sphere", 5, 2));
}

#[test]
fn clifford_tangent_lengths() {
    let spec = lookup("clifford").unwrap();
    let jet = spec.eval_jet([0.3, 1.9], 1, 1e-3).unwrap();
    assert!((jet.derivative(1, 0).norm() - 0.5f64.sqrt()).abs() < 1e-15);
    assert!((jet.derivative(0, 1).norm() - 0.5f64.sqrt()).abs() < 1e-15);
}

/// (a, b) turns by twice the tangent rotation angle; the invariants do not move.
#[test]
fn shape_pair_is_frame_covariant() {
    for name in ["veronese", "calabi3", "calabi4", "clifford"] {
        let spec = lookup(name).unwrap();
        for (k, p) in spec.sample_points(3).into_iter().enumerate() {
            let jet = spec.eval_jet(p, 2, 1e-3).unwrap();
            let frame = adapted_frame(&jet).unwrap();
            let base = second_fundamental_form(&jet, &frame);
            let theta = 0.37 + 0.5 * k as f64;
            let turned = second_fundamental_form(&jet, &frame.rotate_tangent(theta));
            let (s2, c2) = (2.0 * theta).sin_cos();
            let a = &base.a * c2 + &base.b * s2;
            let b = &base.b * c2 - &base.a * s2;
            assert!((&turned.a - a).amax() < 1e-10, "{name}");
            assert!((&turned.b - b).amax() < 1e-10, "{name}");
            let inv = |x: &DVector<f64>, y: &DVector<f64>| {
                [
                    x.norm_squared() + y.norm_squared(),
                    x.norm_squared() * y.norm_squared() - x.dot(y).powi(2),
                    (x.norm_squared() - y.norm_squared()).powi(2) + 4.0 * x.dot(y).powi(2),
                ]
            };
            let (i0, i1) = (inv(&base.a, &base.b), inv(&turned.a, &turned.b));
            for (u, v) in i0.iter().zip(&i1) {
                assert!((u - v).abs() < 1e-10, "{name}: {u} vs {v}");
            }
        }
    }
}

/// On the spheres the quartic differential vanishes: |a| = |b| and ⟨a,b⟩ = 0.
#[test]
fn sphere_shape_pairs_are_isotropic() {
    for name in ["equator", "veronese", "calabi3", "calabi4"] {
        let spec = lookup(name).unwrap();
        for p in spec.sample_points(12) {
            let jet = spec.eval_jet(p, 2, 1e-3).unwrap();
            let frame = adapted_frame(&jet).unwrap();
            assert!(frame.orthonormality_residual() < 1e-10);
            let sp = second_fundamental_form(&jet, &frame);
            assert!((sp.a.norm_squared() - sp.b.norm_squared()).abs() < 1e-8, "{name} at {p:?}");
            assert!(sp.a.dot(&sp.b).abs() < 1e-8, "{name} at {p:?}");
            assert!(sp.minimality_residual < 1e-8);
        }
    }
}

#[test]
fn clifford_hopf_differential_is_constant() {
    let spec = lookup("clifford").unwrap();
    let mut values = Vec::new();
    for p in spec.sample_points(10) {
        let jet = spec.eval_jet(p, 2, 1e-3).unwrap();
        let sp = second_fundamental_form(&jet, &adapted_frame(&jet).unwrap());
        values.push((sp.a.norm_squared() - sp.b.norm_squared(), sp.a.dot(&sp.b)));
    }
    let (r0, i0) = values[0];
    for (r, i) in values {
        assert!((r - r0).abs() < 1e-10 && (i - i0).abs() < 1e-10);
    }
}

#[test]
fn equator_is_totally_geodesic() {
    let spec = lookup("equator").unwrap();
    for p in spec.sample_points(5) {
        let jet = spec.eval_jet(p, 2, 1e-3).unwrap();
        let sp = second_fundamental_form(&jet, &adapted_frame(&jet).unwrap());
        assert!(sp.a.amax() < 1e-12 && sp.b.amax() < 1e-12);
    }
}

/// Divergence-form Laplace–Beltrami of the position by nested central
/// differences of point evaluations only.
fn fd_laplacian(spec: &ImmersionSpec, p: [f64; 2], h: f64) -> DVector<f64> {
    let x = |u: f64, v: f64| spec.eval_jet([u, v], 0, 1e-3).unwrap().position();
    let flux = |u: f64, v: f64| {
        let xu = (x(u + h, v) - x(u - h, v)) / (2.0 * h);
        let xv = (x(u, v + h) - x(u, v - h)) / (2.0 * h);
        let g = Matrix2::new(xu.dot(&xu), xu.dot(&xv), xu.dot(&xv), xv.dot(&xv));
        let sqrt_g = g.determinant().sqrt();
        let gi = g.try_inverse().unwrap();
        let fu = (&xu * gi[(0, 0)] + &xv * gi[(0, 1)]) * sqrt_g;
        let fv = (&xu * gi[(1, 0)] + &xv * gi[(1, 1)]) * sqrt_g;
        (fu, fv, sqrt_g)
    };
    let (_, _, sqrt_g) = flux(p[0], p[1]);
    let du = (flux(p[0] + h, p[1]).0 - flux(p[0] - h, p[1]).0) / (2.0 * h);
    let dv = (flux(p[0], p[1] + h).1 - flux(p[0], p[1] - h).1) / (2.0 * h);
    (du + dv) / sqrt_g
}

#[test]
fn veronese_position_is_an_eigenfunction() {
    let spec = lookup("veronese").unwrap();
    for p in [[0.4, 0.2], [1.1, 2.5], [2.3, 4.0], [PI / 2.0, 5.9]] {
        let jet = spec.eval_jet(p, 2, 1e-3).unwrap();
        let x = jet.position();
        let lap = laplace_beltrami_position(&jet).unwrap();
        assert!((&lap + &x * 2.0).amax() < 1e-9, "jet route at {p:?}");
        let fd = fd_laplacian(&spec, p, 1e-3);
        assert!((&fd + &x * 2.0).amax() < 1e-5, "oracle at {p:?}: {:e}", (&fd + &x * 2.0).amax());
    }
}

#[test]
fn third_order_values() {
    let t = tol();
    let clifford = lookup("clifford").unwrap();
    let g = covariant_grad_h(&clifford, [0.7, 2.1], t.grad_step, t.pole_margin).unwrap();
    assert!(g.b1() < 1e-10);
    let veronese = lookup("veronese").unwrap();
    let g = covariant_grad_h(&veronese, [1.0, 0.5], t.grad_step, t.pole_margin).unwrap();
    assert!(g.b1() < 1e-6 && g.codazzi_residual < 1e-6);
    let calabi3 = lookup("calabi3").unwrap();
    for p in [[0.8, 0.3], [2.0, 4.4]] {
        let g = covariant_grad_h(&calabi3, p, t.grad_step, t.pole_margin).unwrap();
        assert!((g.b1() - 5.0 / 6.0).abs() < 1e-5, "{}", g.b1());
        assert!(g.codazzi_residual < 1e-6);
    }
}

#[test]
fn pole_margin_is_a_domain_error() {
    let spec = lookup("veronese").unwrap();
    assert!(matches!(spec.eval_jet([1e-4, 0.0], 2, 1e-3), Err(Error::Domain(_))));
}

#[test]
fn spec_files_round_trip_and_load() {
    let dir = tempfile::tempdir().unwrap();
    for e in &ENTRIES {
        let spec = lookup(e.name).unwrap();
        let path = dir.path().join(format!("{}.json", e.name));
        std::fs::write(&path, spec.to_canonical()).unwrap();
        let loaded = load_immersion(path.to_str().unwrap(), &tol()).unwrap();
        assert_eq!(loaded.to_canonical(), spec.to_canonical());
    }
}

#[test]
fn fixture_spec_loads() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/clifford_scaled.json");
    let spec = load_immersion(path, &tol()).unwrap();
    assert_eq!(spec.codimension(), 1);
}

#[test]
fn non_unit_spec_is_rejected_with_residual() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/not_unit.json");
    match load_immersion(path, &tol()) {
        Err(Error::SpecRejected { max_residual, .. }) => assert!((max_residual - 0.21).abs() < 1e-9),
        other => panic!("{other:?}"),
    }
}

#[test]
fn non_minimal_spec_is_rejected() {
    // A small circle-product torus on S³ that is not the Clifford torus.
    let text = r#"{"name": "flat_torus", "chart": "torus", "ambient_dim": 4, "euler_char": 0,
      "components": [
        [{"coeff": 0.6, "type": "cos", "freq": [1, 0]}],
        [{"coeff": 0.6, "type": "sin", "freq": [1, 0]}],
        [{"coeff": 0.8, "type": "cos", "freq": [0, 1]}],
        [{"coeff": 0.8, "type": "sin", "freq": [0, 1]}]]}"#;
    let spec = ImmersionSpec::parse(text, "inline").unwrap();
    match spec.validate(&tol()) {
        Err(Error::SpecRejected { check, .. }) => assert!(check.starts_with("minimality")),
        other => panic!("{other:?}"),
    }
}

#[test]
fn parse_errors_cite_field_paths() {
    let bad_type = r#"{"name": "x", "chart": "torus", "ambient_dim": 4, "euler_char": 0,
      "components": [[{"coeff": 1.0, "type": "tan", "freq": [1, 0]}], [], [], []]}"#;
    let msg = ImmersionSpec::parse(bad_type, "f.json").unwrap_err().to_string();
    assert!(msg.contains("components[0][0].type"), "{msg}");

    let unknown = r#"{"name": "x", "chart": "sphere", "ambient_dim": 4, "euler_char": 2, "colour": 1,
      "components": [[], [], [], []]}"#;
    let msg = ImmersionSpec::parse(unknown, "f.json").unwrap_err().to_string();
    assert!(msg.contains("colour"), "{msg}");

    let mixed = r#"{"name": "x", "chart": "sphere", "ambient_dim": 4, "euler_char": 2,
      "components": [[{"coeff": 1.0, "type": "cos", "freq": [1, 0]}], [], [], []]}"#;
    let err = ImmersionSpec::parse(mixed, "f.json").unwrap_err();
    assert!(matches!(err, Error::SpecField { ref path, .. } if path == "components[0][0]"), "{err}");

    let truncated = "{\"name\": \"x\",\n \"chart\": ";
    assert!(matches!(
        ImmersionSpec::parse(truncated, "f.json"),
        Err(Error::Parse { line: 2, .. })
    ));
}

#[test]
fn unknown_catalog_name() {
    assert!(matches!(load_immersion("helicoid", &tol()), Err(Error::UnknownSurface(_))));
}
