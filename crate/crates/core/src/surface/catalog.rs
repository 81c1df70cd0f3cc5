//! Built-in minimal surfaces: Calabi spheres of degree 1..4 and the Clifford torus.

use std::f64::consts::FRAC_1_SQRT_2;

use super::harmonics::real_harmonics;
use super::spec::{Chart, Components, ImmersionSpec, TrigKind, TrigTerm};
use crate::error::{Error, Result};

pub struct CatalogEntry {
    pub name: &'static str,
    /// Harmonic degree of a Calabi sphere; `None` for the torus.
    pub degree: Option<usize>,
    pub summary: &'static str,
}

pub const ENTRIES: [CatalogEntry; 5] = [
    CatalogEntry {
        name: "equator",
        degree: Some(1),
        summary: "totally geodesic great 2-sphere in S^3, S = 0",
    },
    CatalogEntry {
        name: "veronese",
        degree: Some(2),
        summary: "Veronese surface in S^4, K = 1/3, S = 4/3",
    },
    CatalogEntry {
        name: "calabi3",
        degree: Some(3),
        summary: "Calabi sphere in S^6, K = 1/6, S = 5/3",
    },
    CatalogEntry {
        name: "calabi4",
        degree: Some(4),
        summary: "Calabi sphere in S^8, K = 1/10, S = 9/5",
    },
    CatalogEntry {
        name: "clifford",
        degree: None,
        summary: "Clifford torus S^1(1/√2) × S^1(1/√2) in S^3, S = 2",
    },
];

/// Degree-`s` harmonic sphere, padded with zero components up to ambient dimension 4.
pub fn calabi_sphere(name: &str, s: usize) -> ImmersionSpec {
    let mut comps = real_harmonics(s);
    while comps.len() < 4 {
        comps.push(Vec::new());
    }
    ImmersionSpec {
        name: name.to_string(),
        chart: Chart::Sphere,
        ambient_dim: comps.len(),
        euler_char: 2,
        components: Components::Sphere(comps),
    }
}

pub fn clifford_torus() -> ImmersionSpec {
    let term = |kind, freq| {
        vec![TrigTerm {
            coeff: FRAC_1_SQRT_2,
            kind,
            freq,
        }]
    };
    ImmersionSpec {
        name: "clifford".to_string(),
        chart: Chart::Torus,
        ambient_dim: 4,
        euler_char: 0,
        components: Components::Torus(vec![
            term(TrigKind::Cos, [1, 0]),
            term(TrigKind::Sin, [1, 0]),
            term(TrigKind::Cos, [0, 1]),
            term(TrigKind::Sin, [0, 1]),
        ]),
    }
}

/// Catalog specs are built in code and trusted; they are validated in tests.
pub fn lookup(name: &str) -> Result<ImmersionSpec> {
    let entry = ENTRIES
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownSurface(name.to_string()))?;
    Ok(match entry.degree {
        Some(s) => calabi_sphere(entry.name, s),
        None => clifford_torus(),
    })
}
