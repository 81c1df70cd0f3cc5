//! Real spherical harmonics of fixed degree as polynomials in (x, y, z).
//!
//! For degree `s` and order `m`, the harmonic is proportional to
//! `(d^m P_s/dz^m)(z) · Re/Im (x + iy)^m`, which on the unit sphere equals the
//! associated Legendre function times `cos mφ` / `sin mφ`. The scaling used
//! here is `√(4π/(2s+1))` times the L²-orthonormal basis, so the squares of
//! all `2s+1` components sum to one on the unit sphere.

use super::spec::MonomialTerm;

fn legendre(s: usize) -> Vec<f64> {
    // coefficient vectors in ascending powers of z
    let mut prev = vec![1.0];
    if s == 0 {
        return prev;
    }
    let mut cur = vec![0.0, 1.0];
    for n in 1..s {
        let nf = n as f64;
        let mut next = vec![0.0; n + 2];
        for (k, c) in cur.iter().enumerate() {
            next[k + 1] += (2.0 * nf + 1.0) * c / (nf + 1.0);
        }
        for (k, c) in prev.iter().enumerate() {
            next[k] -= nf * c / (nf + 1.0);
        }
        prev = cur;
        cur = next;
    }
    cur
}

fn derivative(p: &[f64], m: usize) -> Vec<f64> {
    let mut p = p.to_vec();
    for _ in 0..m {
        if p.len() <= 1 {
            return vec![0.0];
        }
        p = p.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect();
    }
    p
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn factorial_ratio(s: usize, m: usize) -> f64 {
    // (s-m)! / (s+m)!
    ((s - m + 1)..=(s + m)).fold(1.0, |acc, k| acc / k as f64)
}

/// Components ordered as m = 0, then (cos m, sin m) for m = 1..=s.
pub fn real_harmonics(s: usize) -> Vec<Vec<MonomialTerm>> {
    let p = legendre(s);
    let mut comps = Vec::with_capacity(2 * s + 1);
    for m in 0..=s {
        let dz = derivative(&p, m);
        let norm = if m == 0 {
            1.0
        } else {
            (2.0 * factorial_ratio(s, m)).sqrt()
        };
        let mut re = Vec::new();
        let mut im = Vec::new();
        for k in 0..=m {
            let bin = binomial(m, k);
            // i^k: real for even k, imaginary for odd k
            let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
            for (j, c) in dz.iter().enumerate() {
                if *c == 0.0 {
                    continue;
                }
                let term = MonomialTerm {
                    coeff: norm * bin * sign * c,
                    exps: [(m - k) as u32, k as u32, j as u32],
                };
                if k % 2 == 0 {
                    re.push(term);
                } else {
                    im.push(term);
                }
            }
        }
        comps.push(re);
        if m > 0 {
            comps.push(im);
        }
    }
    comps
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(terms: &[MonomialTerm], p: [f64; 3]) -> f64 {
        terms
            .iter()
            .map(|t| {
                t.coeff
                    * p[0].powi(t.exps[0] as i32)
                    * p[1].powi(t.exps[1] as i32)
                    * p[2].powi(t.exps[2] as i32)
            })
            .sum()
    }

    #[test]
    fn legendre_p3() {
        // P3 = (5z^3 - 3z)/2
        let p = legendre(3);
        assert_eq!(p.len(), 4);
        assert!((p[1] + 1.5).abs() < 1e-15 && (p[3] - 2.5).abs() < 1e-15);
    }

    #[test]
    fn squares_sum_to_one() {
        for s in 1..=5 {
            let comps = real_harmonics(s);
            assert_eq!(comps.len(), 2 * s + 1);
            for &(th, ph) in &[(0.3, 0.1), (1.2, 2.5), (2.9, -1.0)] {
                let p = [f64::sin(th) * f64::cos(ph), f64::sin(th) * f64::sin(ph), f64::cos(th)];
                let sum: f64 = comps.iter().map(|c| eval(c, p).powi(2)).sum();
                assert!((sum - 1.0).abs() < 1e-13, "s={s} sum={sum}");
            }
        }
    }

    #[test]
    fn degree_one_is_the_identity_up_to_order() {
        let comps = real_harmonics(1);
        let p = [0.36, 0.48, 0.8];
        let vals: Vec<f64> = comps.iter().map(|c| eval(c, p)).collect();
        assert!((vals[0] - 0.8).abs() < 1e-15);
        assert!((vals[1] - 0.36).abs() < 1e-15);
        assert!((vals[2] - 0.48).abs() < 1e-15);
    }
}
