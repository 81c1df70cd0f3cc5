//! Symbolic verification of the algebraic identities satisfied by the second
//! fundamental form of a minimal surface in a sphere.
//!
//! Every check expands both sides of an identity as a [`RatPoly`] in the
//! components of the vectors `a = (h_11^α)`, `b = (h_12^α)` (and, for third
//! order identities, `a1 = (h_111^α)`, `a2 = (h_112^α)`) and decides equality
//! by an exact structural zero test. Square roots never appear: eigenvalue
//! statements are restated through their symmetric functions.

use rayon::prelude::*;

use crate::ratpoly::{rat, RatPoly, Rational};

/// Identity families reported by the suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IdentityGroup {
    InvariantIdentities,
    EigenCharpoly,
    B2Decomposition,
    ThirdOrderContractions,
    GapFactorizations,
}

impl IdentityGroup {
    pub const ALL: [IdentityGroup; 5] = [
        IdentityGroup::InvariantIdentities,
        IdentityGroup::EigenCharpoly,
        IdentityGroup::B2Decomposition,
        IdentityGroup::ThirdOrderContractions,
        IdentityGroup::GapFactorizations,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityGroup::InvariantIdentities => "invariant_identities",
            IdentityGroup::EigenCharpoly => "eigen_charpoly",
            IdentityGroup::B2Decomposition => "b2_decomposition",
            IdentityGroup::ThirdOrderContractions => "third_order_contractions",
            IdentityGroup::GapFactorizations => "gap_factorizations",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Proved,
    Failed,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Proved => "proved",
            Verdict::Failed => "failed",
        }
    }
}

/// Outcome of one identity check.
#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub group: IdentityGroup,
    pub name: String,
    /// Codimension, or `None` for identities in the scalar invariants only.
    pub q: Option<usize>,
    pub verdict: Verdict,
    /// Nonzero difference polynomial when the check failed.
    pub residual: Option<RatPoly>,
    pub note: Option<String>,
}

impl IdentityReport {
    fn from_residuals(
        group: IdentityGroup,
        name: &str,
        q: Option<usize>,
        residuals: Vec<RatPoly>,
    ) -> Self {
        let residual = residuals.into_iter().find(|r| !r.is_zero());
        IdentityReport {
            group,
            name: name.to_string(),
            q,
            verdict: if residual.is_some() {
                Verdict::Failed
            } else {
                Verdict::Proved
            },
            residual,
            note: None,
        }
    }

    pub fn proved(&self) -> bool {
        self.verdict == Verdict::Proved
    }
}

/// Adds `delta` to the left-hand side of the named identity. Used only to
/// exercise the failure path.
#[derive(Clone, Debug)]
pub struct FaultInjection {
    pub identity: String,
    pub delta: Rational,
}

fn perturb(lhs: RatPoly, name: &str, fault: Option<&FaultInjection>) -> RatPoly {
    match fault {
        Some(f) if f.identity == name => lhs + RatPoly::constant(f.delta.clone()),
        _ => lhs,
    }
}

fn c(n: i64, d: i64) -> RatPoly {
    RatPoly::constant(rat(n, d))
}

/// Symbolic vector in R^q whose components are ring variables.
#[derive(Clone, Debug)]
pub struct SymbolFamily {
    pub name: String,
    pub comps: Vec<RatPoly>,
}

impl SymbolFamily {
    /// Instantiates `name_1 .. name_q`.
    pub fn new(name: &str, q: usize) -> Self {
        SymbolFamily {
            name: name.to_string(),
            comps: (1..=q).map(|k| RatPoly::var(&format!("{name}_{k}"))).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }
}

fn dot(u: &[RatPoly], v: &[RatPoly]) -> RatPoly {
    u.iter()
        .zip(v)
        .fold(RatPoly::zero(), |acc, (x, y)| acc + x * y)
}

fn norm2(u: &[RatPoly]) -> RatPoly {
    dot(u, u)
}

type Mat2 = [[RatPoly; 2]; 2];

fn mat2_mul(x: &Mat2, y: &Mat2) -> Mat2 {
    std::array::from_fn(|i| std::array::from_fn(|j| &x[i][0] * &y[0][j] + &x[i][1] * &y[1][j]))
}

fn mat2_frob(x: &Mat2, y: &Mat2) -> RatPoly {
    let mut acc = RatPoly::zero();
    for i in 0..2 {
        for j in 0..2 {
            acc = acc + &x[i][j] * &y[i][j];
        }
    }
    acc
}

/// Second fundamental form of a minimal surface in normal form:
/// `h[i][j][α]`, with h_11 = a, h_12 = h_21 = b, h_22 = -a.
struct SecondForm {
    a: SymbolFamily,
    b: SymbolFamily,
    h: [[Vec<RatPoly>; 2]; 2],
}

impl SecondForm {
    fn new(q: usize) -> Self {
        let a = SymbolFamily::new("a", q);
        let b = SymbolFamily::new("b", q);
        let neg_a: Vec<RatPoly> = a.comps.iter().map(|x| -x).collect();
        let h = [
            [a.comps.clone(), b.comps.clone()],
            [b.comps.clone(), neg_a],
        ];
        SecondForm { a, b, h }
    }

    fn q(&self) -> usize {
        self.a.dim()
    }

    fn shape_matrix(&self, alpha: usize) -> Mat2 {
        std::array::from_fn(|i| std::array::from_fn(|j| self.h[i][j][alpha].clone()))
    }

    /// `S = 2(|a|^2 + |b|^2)`.
    fn s_closed(&self) -> RatPoly {
        (norm2(&self.a.comps) + norm2(&self.b.comps)).scale(&rat(2, 1))
    }

    /// `ρ₀⊥ = 16|a|²|b|² − 16⟨a,b⟩²`.
    fn rho0_closed(&self) -> RatPoly {
        let ab = dot(&self.a.comps, &self.b.comps);
        (norm2(&self.a.comps) * norm2(&self.b.comps) - &ab * &ab).scale(&rat(16, 1))
    }

    /// Gram matrix `⟨S_α, S_β⟩` from the shape matrices.
    fn gram(&self) -> Vec<Vec<RatPoly>> {
        let shapes: Vec<Mat2> = (0..self.q()).map(|k| self.shape_matrix(k)).collect();
        shapes
            .iter()
            .map(|sa| shapes.iter().map(|sb| mat2_frob(sa, sb)).collect())
            .collect()
    }

    /// Σ over ordered pairs of ‖[S_α, S_β]‖².
    fn rho0_commutators(&self) -> RatPoly {
        let shapes: Vec<Mat2> = (0..self.q()).map(|k| self.shape_matrix(k)).collect();
        let mut acc = RatPoly::zero();
        for sa in &shapes {
            for sb in &shapes {
                let ab = mat2_mul(sa, sb);
                let ba = mat2_mul(sb, sa);
                let comm: Mat2 = std::array::from_fn(|i| std::array::from_fn(|j| &ab[i][j] - &ba[i][j]));
                acc = acc + mat2_frob(&comm, &comm);
            }
        }
        acc
    }
}

/// Totally symmetric, trace-free third-order coefficients:
/// h_111 = a1, h_112 = a2, h_122 = -a1, h_222 = -a2 (and permutations).
struct ThirdForm {
    a1: SymbolFamily,
    a2: SymbolFamily,
    h: Vec<Vec<RatPoly>>, // indexed by bitmask i + 2j + 4k
}

impl ThirdForm {
    fn new(q: usize) -> Self {
        let a1 = SymbolFamily::new("a1", q);
        let a2 = SymbolFamily::new("a2", q);
        let mut h = Vec::with_capacity(8);
        for idx in 0..8usize {
            let ones = (idx & 1) + ((idx >> 1) & 1) + ((idx >> 2) & 1);
            let v: Vec<RatPoly> = match ones {
                0 => a1.comps.clone(),
                1 => a2.comps.clone(),
                2 => a1.comps.iter().map(|x| -x).collect(),
                _ => a2.comps.iter().map(|x| -x).collect(),
            };
            h.push(v);
        }
        ThirdForm { a1, a2, h }
    }

    fn at(&self, i: usize, j: usize, k: usize) -> &[RatPoly] {
        &self.h[i + 2 * j + 4 * k]
    }
}

/// The four pointwise identities relating S, |A|², ρ₀⊥ and |∇S|².
pub fn check_invariant_identities(q: usize, fault: Option<&FaultInjection>) -> Vec<IdentityReport> {
    assert!(q >= 1, "codimension must be positive");
    let g = IdentityGroup::InvariantIdentities;
    let sf = SecondForm::new(q);
    let (a, b) = (&sf.a.comps, &sf.b.comps);
    let gram = sf.gram();

    // |A|^2 from the Gram form, plus entrywise agreement with 2aa^T + 2bb^T.
    let mut entry_residuals = Vec::new();
    let mut norm_a2 = RatPoly::zero();
    for al in 0..q {
        for be in 0..q {
            let outer = (&a[al] * &a[be] + &b[al] * &b[be]).scale(&rat(2, 1));
            entry_residuals.push(&gram[al][be] - &outer);
            norm_a2 = norm_a2 + &gram[al][be] * &gram[al][be];
        }
    }
    let na = norm2(a);
    let nb = norm2(b);
    let ab = dot(a, b);
    let rhs = (&na * &na).scale(&rat(4, 1))
        + (&nb * &nb).scale(&rat(4, 1))
        + (&ab * &ab).scale(&rat(8, 1));
    let name = "normA2";
    let mut res = vec![perturb(norm_a2.clone(), name, fault) - rhs];
    res.extend(entry_residuals);
    let r1 = IdentityReport::from_residuals(g, name, Some(q), res);

    let rho0 = sf.rho0_commutators();
    let name = "rho0_perp";
    let r2 = IdentityReport::from_residuals(
        g,
        name,
        Some(q),
        vec![perturb(rho0.clone(), name, fault) - sf.rho0_closed()],
    );

    // |∇S|² with S_k = 2 Σ h_ij h_ijk.
    let tf = ThirdForm::new(q);
    let grad = grad_s(&sf, &tf);
    let lhs = &grad[0] * &grad[0] + &grad[1] * &grad[1];
    let name = "grad_S_squared";
    let r3 = IdentityReport::from_residuals(
        g,
        name,
        Some(q),
        vec![perturb(lhs, name, fault) - grad_s_squared_closed(&sf, &tf)],
    );

    // 2S^2 = ρ₀⊥ + 2|A|^2 with S the trace of the Gram matrix.
    let trace = (0..q).fold(RatPoly::zero(), |acc, k| acc + &gram[k][k]);
    let name = "two_S_squared";
    let lhs = (&trace * &trace).scale(&rat(2, 1));
    let r4 = IdentityReport::from_residuals(
        g,
        name,
        Some(q),
        vec![
            perturb(lhs, name, fault) - rho0 - norm_a2.scale(&rat(2, 1)),
            trace - sf.s_closed(),
        ],
    );
    vec![r1, r2, r3, r4]
}

fn grad_s(sf: &SecondForm, tf: &ThirdForm) -> [RatPoly; 2] {
    std::array::from_fn(|k| {
        let mut acc = RatPoly::zero();
        for i in 0..2 {
            for j in 0..2 {
                acc = acc + dot(&sf.h[i][j], tf.at(i, j, k));
            }
        }
        acc.scale(&rat(2, 1))
    })
}

fn grad_s_squared_closed(sf: &SecondForm, tf: &ThirdForm) -> RatPoly {
    let (a, b, a1, a2) = (&sf.a.comps, &sf.b.comps, &tf.a1.comps, &tf.a2.comps);
    let p = dot(a, a1);
    let qq = dot(b, a2);
    let r = dot(a, a2);
    let t = dot(b, a1);
    (&p * &p + &qq * &qq + &r * &r + &t * &t + (&p * &qq).scale(&rat(2, 1))
        - (&r * &t).scale(&rat(2, 1)))
    .scale(&rat(16, 1))
}

/// Determinant by cofactor expansion along rows, memoized on the set of
/// columns still available.
fn det(m: &[Vec<RatPoly>]) -> RatPoly {
    let n = m.len();
    if n == 0 {
        return c(1, 1);
    }
    let full = (1usize << n) - 1;
    // minors[mask] = det of rows (n - popcount(mask))..n restricted to columns in mask
    let mut minors: Vec<Option<RatPoly>> = vec![None; 1 << n];
    minors[0] = Some(c(1, 1));
    let mut masks: Vec<usize> = (1..=full).collect();
    masks.sort_by_key(|m| m.count_ones());
    for mask in masks {
        let row = n - mask.count_ones() as usize;
        let mut acc = RatPoly::zero();
        let mut sign_pos = true;
        for col in 0..n {
            if mask & (1 << col) == 0 {
                continue;
            }
            let sub = minors[mask & !(1 << col)].as_ref().unwrap();
            let term = &m[row][col] * sub;
            acc = if sign_pos { acc + term } else { acc - term };
            sign_pos = !sign_pos;
        }
        minors[mask] = Some(acc);
    }
    minors[full].take().unwrap()
}

/// `det(λI − A) = λ^{q−2}(λ² − Sλ + ρ₀⊥/4)` and the symmetric-function form
/// of the two nonzero eigenvalues.
pub fn check_eigen_charpoly(q: usize, fault: Option<&FaultInjection>) -> IdentityReport {
    assert!(q >= 1, "codimension must be positive");
    let sf = SecondForm::new(q);
    let (a, b) = (&sf.a.comps, &sf.b.comps);
    let lam = RatPoly::var("lambda");
    let mat: Vec<Vec<RatPoly>> = (0..q)
        .map(|i| {
            (0..q)
                .map(|j| {
                    let aij = (&a[i] * &a[j] + &b[i] * &b[j]).scale(&rat(2, 1));
                    if i == j {
                        &lam - &aij
                    } else {
                        -aij
                    }
                })
                .collect()
        })
        .collect();
    let name = "charpoly";
    let lhs = perturb(det(&mat), name, fault);
    let s = sf.s_closed();
    let rho0 = sf.rho0_closed();
    let quad = &lam * &lam - &s * &lam + rho0.scale(&rat(1, 4));
    let mut residuals = Vec::new();
    if q >= 2 {
        residuals.push(lhs - lam.pow(q as u32 - 2) * quad);
    } else {
        // λ^{-1}(λ² − Sλ + ρ₀⊥/4) with ρ₀⊥ ≡ 0 in codimension one.
        residuals.push(rho0.clone());
        residuals.push(lhs - (&lam - &s));
    }
    // Nonzero eigenvalues are those of J = 2[[|a|², ⟨a,b⟩], [⟨a,b⟩, |b|²]].
    let na = norm2(a);
    let nb = norm2(b);
    let ab = dot(a, b);
    let trace_j = (&na + &nb).scale(&rat(2, 1));
    let det_j = (&na * &nb - &ab * &ab).scale(&rat(4, 1));
    residuals.push(trace_j - &s);
    residuals.push(det_j - rho0.scale(&rat(1, 4)));
    IdentityReport::from_residuals(IdentityGroup::EigenCharpoly, name, Some(q), residuals)
}

/// `2(|Δa|² + |Δb|²) = S(2−S)² − ((8−5S)/4)ρ₀⊥` for the displayed Laplacians
/// `Δa = a(2−S) + 2b⟨a,b⟩ − 2a|b|²` and its mirror image.
pub fn check_b2_decomposition(q: usize, fault: Option<&FaultInjection>) -> IdentityReport {
    assert!(q >= 1, "codimension must be positive");
    let sf = SecondForm::new(q);
    let (a, b) = (&sf.a.comps, &sf.b.comps);
    let s = sf.s_closed();
    let na = norm2(a);
    let nb = norm2(b);
    let ab = dot(a, b);
    let two_minus_s = c(2, 1) - &s;
    let lap = |x: &[RatPoly], y: &[RatPoly], ny: &RatPoly| -> Vec<RatPoly> {
        x.iter()
            .zip(y)
            .map(|(xi, yi)| {
                xi * &two_minus_s + (yi * &ab).scale(&rat(2, 1)) - (xi * ny).scale(&rat(2, 1))
            })
            .collect()
    };
    let lap_a = lap(a, b, &nb);
    let lap_b = lap(b, a, &na);
    let name = "b2_laplacian_norm";
    let lhs = perturb((norm2(&lap_a) + norm2(&lap_b)).scale(&rat(2, 1)), name, fault);
    let rhs = &s * &two_minus_s * &two_minus_s
        - (c(8, 1) - s.scale(&rat(5, 1))) * sf.rho0_closed().scale(&rat(1, 4));
    IdentityReport::from_residuals(IdentityGroup::B2Decomposition, name, Some(q), vec![lhs - rhs])
}

/// Contractions of the third-order tensor h_ijk: the B₁ norm, the normal
/// curvature contraction, and the gradient of S.
pub fn check_third_order_contractions(
    q: usize,
    fault: Option<&FaultInjection>,
) -> Vec<IdentityReport> {
    assert!(q >= 1, "codimension must be positive");
    let g = IdentityGroup::ThirdOrderContractions;
    let sf = SecondForm::new(q);
    let tf = ThirdForm::new(q);
    let (a, b, a1, a2) = (&sf.a.comps, &sf.b.comps, &tf.a1.comps, &tf.a2.comps);

    // (i) B₁ = Σ (h_ijk^α)² = 4(|a1|² + |a2|²)
    let mut b1 = RatPoly::zero();
    for idx in 0..8 {
        b1 = b1 + norm2(&tf.h[idx]);
    }
    let name = "b1_norm";
    let r1 = IdentityReport::from_residuals(
        g,
        name,
        Some(q),
        vec![perturb(b1, name, fault) - (norm2(a1) + norm2(a2)).scale(&rat(4, 1))],
    );

    // (ii) 2 h_ijk^α h_ijm^β R⊥_{βαkm} with R⊥_{αβkl} = h_km^α h_ml^β − h_km^β h_ml^α
    let rperp = |al: usize, be: usize, k: usize, l: usize| -> RatPoly {
        let mut acc = RatPoly::zero();
        for m in 0..2 {
            acc = acc + &sf.h[k][m][al] * &sf.h[m][l][be] - &sf.h[k][m][be] * &sf.h[m][l][al];
        }
        acc
    };
    let mut contraction = RatPoly::zero();
    for k in 0..2 {
        for m in 0..2 {
            if k == m {
                continue;
            }
            for al in 0..q {
                for be in 0..q {
                    let r = rperp(be, al, k, m);
                    if r.is_zero() {
                        continue;
                    }
                    let mut hh = RatPoly::zero();
                    for i in 0..2 {
                        for j in 0..2 {
                            hh = hh + &tf.at(i, j, k)[al] * &tf.at(i, j, m)[be];
                        }
                    }
                    contraction = contraction + hh * r;
                }
            }
        }
    }
    let contraction = contraction.scale(&rat(2, 1));
    let closed = (dot(a, a2) * dot(b, a1) - dot(a, a1) * dot(b, a2)).scale(&rat(32, 1));
    let name = "normal_curvature_contraction";
    let r2 = IdentityReport::from_residuals(
        g,
        name,
        Some(q),
        vec![perturb(contraction, name, fault) - closed],
    );

    // (iii) S_1, S_2 closed forms and |∇S|² = S_1² + S_2²
    let grad = grad_s(&sf, &tf);
    let s1 = (dot(a, a1) + dot(b, a2)).scale(&rat(4, 1));
    let s2 = (dot(a, a2) - dot(b, a1)).scale(&rat(4, 1));
    let name = "grad_S_components";
    let lhs = perturb(&grad[0] * &grad[0] + &grad[1] * &grad[1], name, fault);
    let r3 = IdentityReport::from_residuals(
        g,
        name,
        Some(q),
        vec![
            &grad[0] - &s1,
            &grad[1] - &s2,
            lhs - grad_s_squared_closed(&sf, &tf),
        ],
    );
    vec![r1, r2, r3]
}

/// Scalar identities behind the integral formulas and the threshold
/// factorization, in the variables S, t and λ₂.
pub fn check_gap_factorizations(fault: Option<&FaultInjection>) -> Vec<IdentityReport> {
    let g = IdentityGroup::GapFactorizations;
    let s = RatPoly::var("S");
    let t = RatPoly::var("t");
    let l2 = RatPoly::var("lambda2");
    let d = &s - l2.scale(&rat(2, 1)); // S − 2λ₂

    // (S − 2λ₂)² = S² − ρ₀⊥ defines ρ₀⊥ in terms of λ₂; (ρ⊥)² = ρ₀⊥/4.
    let rho0 = &s * &s - &d * &d;
    let rho_perp2 = rho0.scale(&rat(1, 4));

    let form1 = |dd: &RatPoly| -> RatPoly {
        &s * (s.scale(&rat(3, 1)) - c(4, 1)) * (s.scale(&rat(3, 1)) - c(5, 1))
            + (c(16, 1) - s.scale(&rat(9, 1))) * dd.scale(&rat(1, 2))
    };

    // (i) first line of the second integral formula equals the second line.
    let name = "second_gap_forms";
    let lhs = perturb(form1(&(&d * &d)), name, fault);
    let form2 = s.scale(&rat(1, 2)) * (&s - c(2, 1)) * (s.scale(&rat(9, 1)) - c(20, 1))
        + rho_perp2.scale(&rat(2, 1)) * (s.scale(&rat(9, 1)) - c(16, 1));
    let r1 = IdentityReport::from_residuals(g, name, None, vec![lhs - form2]);

    // (ii) with (S − 2λ₂)² = t²S²: form1 = (S/2)(18 − 9t²)(S − T_B)(S − T_A),
    // cleared of the denominator 18 − 9t², plus the completed-square form.
    let name = "threshold_factorization";
    let t2 = &t * &t;
    let den = c(18, 1) - t2.scale(&rat(9, 1));
    let sum_num = (c(27, 1) - t2.scale(&rat(8, 1))).scale(&rat(2, 1));
    let cleared = &den * &s * &s - &sum_num * &s + c(40, 1);
    let lhs = perturb(form1(&(&t2 * &s * &s)).scale(&rat(2, 1)), name, fault);
    let half_sum = c(27, 1) - t2.scale(&rat(8, 1));
    let shifted = t2.scale(&rat(8, 1)) - c(9, 2);
    let completed = (&den * &s - &half_sum).pow(2) + c(45, 4) - &shifted * &shifted;
    let r2 = IdentityReport::from_residuals(
        g,
        name,
        None,
        vec![lhs - &s * &cleared, &den * &cleared - completed],
    );

    // (iii) S(3S−4) − (S−2λ₂)² = 2(|A|² + ρ₀⊥ − 2S) given 2S² = ρ₀⊥ + 2|A|².
    let name = "first_gap_pointwise";
    let norm_a2 = &s * &s - rho0.scale(&rat(1, 2));
    let lhs = perturb(&s * (s.scale(&rat(3, 1)) - c(4, 1)) - &d * &d, name, fault);
    let rhs = (norm_a2 + &rho0 - s.scale(&rat(2, 1))).scale(&rat(2, 1));
    let r3 = IdentityReport::from_residuals(g, name, None, vec![lhs - rhs]);

    // (iv) the integrated Laplacian contraction, read with ρ₀⊥ in the |A|²
    // substitution. The literal ρ⊥ reading is tested and recorded.
    let name = "integrated_contraction_substitution";
    let rp = RatPoly::var("rho_perp");
    let two_minus_s = c(2, 1) - &s;
    let norm_a2 = (&s * &s).scale(&rat(2, 1)) - &rho0;
    let lhs = perturb(
        &two_minus_s * (s.pow(2).scale(&rat(-3, 2)) + norm_a2.scale(&rat(1, 2)) + &rho0),
        name,
        fault,
    );
    let rhs = &two_minus_s * (s.pow(2).scale(&rat(-1, 2)) + rho0.scale(&rat(1, 2)));
    let mut r4 = IdentityReport::from_residuals(g, name, None, vec![lhs - &rhs]);
    let literal = &two_minus_s
        * (s.pow(2).scale(&rat(-3, 2))
            + ((&s * &s).scale(&rat(2, 1)) - &rp).scale(&rat(1, 2))
            + &rho0);
    // ρ⊥ is not polynomial in ρ₀⊥; substituting (ρ⊥)² = ρ₀⊥/4 for ρ⊥ is
    // enough to expose the mismatch.
    let literal_res = (literal - &rhs).substitute("rho_perp", &rho0.scale(&rat(1, 4)));
    r4.note = Some(if literal_res.is_zero() {
        "literal rho_perp reading also holds".to_string()
    } else {
        "verified with rho0_perp in (2S^2 - rho0_perp)/2; the printed rho_perp reading does not satisfy the identity".to_string()
    });
    vec![r1, r2, r3, r4]
}

/// All reports for one codimension, in fixed order.
pub fn check_all_for_q(q: usize, fault: Option<&FaultInjection>) -> Vec<IdentityReport> {
    let mut out = check_invariant_identities(q, fault);
    out.push(check_eigen_charpoly(q, fault));
    out.push(check_b2_decomposition(q, fault));
    out.extend(check_third_order_contractions(q, fault));
    out
}

/// Result of the full symbolic suite.
#[derive(Clone, Debug)]
pub struct IdentitySuite {
    pub qmax: usize,
    pub reports: Vec<IdentityReport>,
}

impl IdentitySuite {
    pub fn all_proved(&self) -> bool {
        self.reports.iter().all(IdentityReport::proved)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityReport> {
        self.reports.iter().filter(|r| !r.proved())
    }
}

/// Runs every check for q = 1..=qmax concurrently; the report order depends
/// only on `qmax`.
pub fn run_suite(qmax: usize, fault: Option<&FaultInjection>) -> IdentitySuite {
    assert!(qmax >= 1, "qmax must be positive");
    let per_q: Vec<Vec<IdentityReport>> = (1..=qmax)
        .into_par_iter()
        .map(|q| check_all_for_q(q, fault))
        .collect();
    let mut reports: Vec<IdentityReport> = per_q.into_iter().flatten().collect();
    reports.extend(check_gap_factorizations(fault));
    reports.sort_by_key(|r| (r.group, r.q));
    IdentitySuite { qmax, reports }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codimension_one_has_no_commutators() {
        let sf = SecondForm::new(1);
        assert!(sf.rho0_commutators().is_zero());
        assert!(sf.rho0_closed().is_zero());
        let reps = check_invariant_identities(1, None);
        assert_eq!(reps.len(), 4);
        assert!(reps.iter().all(IdentityReport::proved));
    }

    #[test]
    fn contraction_vanishes_in_codimension_one() {
        let reps = check_third_order_contractions(1, None);
        assert!(reps.iter().all(IdentityReport::proved));
    }

    #[test]
    fn determinant_of_small_matrix() {
        let m = vec![
            vec![c(2, 1), c(1, 1), c(0, 1)],
            vec![c(1, 1), c(3, 1), c(1, 1)],
            vec![c(0, 1), c(1, 1), c(4, 1)],
        ];
        // 2(12 − 1) − 1(4 − 0) = 18
        assert_eq!(det(&m), c(18, 1));
    }

    #[test]
    fn fault_injection_fails_named_identity() {
        let fault = FaultInjection {
            identity: "b2_laplacian_norm".into(),
            delta: rat(1, 7),
        };
        let rep = check_b2_decomposition(2, Some(&fault));
        assert_eq!(rep.verdict, Verdict::Failed);
        assert_eq!(rep.residual.unwrap(), c(1, 7));
        assert!(check_b2_decomposition(2, None).proved());
    }

    #[test]
    fn gap_factorizations_prove() {
        let reps = check_gap_factorizations(None);
        assert_eq!(reps.len(), 4);
        for r in &reps {
            assert!(r.proved(), "{} failed: {:?}", r.name, r.residual);
        }
        assert!(reps[3].note.as_deref().unwrap().contains("does not satisfy"));
    }
}
