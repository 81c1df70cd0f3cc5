//! Exact sparse multivariate polynomials over the rationals.
//!
//! Terms live in a `BTreeMap` keyed by exponent vectors ordered graded
//! lexicographically, and zero coefficients are never stored. Two polynomials
//! over the same variable list are therefore equal iff their maps are equal,
//! and identity testing reduces to checking for an empty map.
//!
//! Variable lists are kept sorted and deduplicated. Combining polynomials over
//! different variable lists first lifts both into the union of the names.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational coefficient, always in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Builds `num/den` as an exact rational.
pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Exponent multi-index, one entry per ring variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Binary operation selector for [`combine`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CombineOp {
    Add,
    Sub,
    Mul,
}

/// Exact multivariate polynomial with rational coefficients.
#[derive(Clone)]
pub struct RatPoly {
    vars: Arc<[String]>,
    terms: BTreeMap<Monomial, Rational>,
}

impl RatPoly {
    /// The zero polynomial over no variables.
    pub fn zero() -> Self {
        RatPoly {
            vars: Arc::from(Vec::<String>::new()),
            terms: BTreeMap::new(),
        }
    }

    /// A constant polynomial over no variables.
    pub fn constant(c: Rational) -> Self {
        RatPoly::constant_in(c, Arc::from(Vec::<String>::new()))
    }

    /// A single variable `name`.
    pub fn var(name: &str) -> Self {
        RatPoly::monomial(rat(1, 1), &[(name, 1)])
    }

    /// `coeff * Π name^exp`. Repeated names multiply.
    pub fn monomial(coeff: Rational, factors: &[(&str, u32)]) -> Self {
        let mut names: Vec<String> = factors.iter().map(|(n, _)| n.to_string()).collect();
        names.sort();
        names.dedup();
        let mut exps = vec![0u32; names.len()];
        for (n, e) in factors {
            let idx = names.binary_search_by(|v| v.as_str().cmp(n)).unwrap();
            exps[idx] += e;
        }
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(Monomial(exps), coeff);
        }
        RatPoly {
            vars: Arc::from(names),
            terms,
        }
    }

    /// Builds a polynomial from explicit terms over the given variable names.
    ///
    /// Names are sorted internally; exponent vectors are permuted to match.
    /// Panics if a term's exponent vector length differs from `vars.len()` or
    /// a name is repeated.
    pub fn from_terms<I>(vars: &[&str], terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut order: Vec<usize> = (0..vars.len()).collect();
        order.sort_by(|&i, &j| vars[i].cmp(vars[j]));
        let sorted: Vec<String> = order.iter().map(|&i| vars[i].to_string()).collect();
        assert!(
            sorted.windows(2).all(|w| w[0] != w[1]),
            "duplicate variable name"
        );
        let mut map: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (exps, c) in terms {
            assert_eq!(exps.len(), vars.len(), "exponent vector length mismatch");
            let permuted = Monomial(order.iter().map(|&i| exps[i]).collect());
            accumulate(&mut map, permuted, c);
        }
        RatPoly {
            vars: Arc::from(sorted),
            terms: map,
        }
    }

    fn constant_in(c: Rational, vars: Arc<[String]>) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(vars.len()), c);
        }
        RatPoly { vars, terms }
    }

    pub fn variables(&self) -> &[String] {
        &self.vars
    }

    /// Terms in descending graded-lex order (leading term first).
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Exact zero test: true iff no term survives canonicalization.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &Rational) -> RatPoly {
        if c.is_zero() {
            return RatPoly {
                vars: self.vars.clone(),
                terms: BTreeMap::new(),
            };
        }
        RatPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> RatPoly {
        let mut base = self.clone();
        let mut acc = RatPoly::constant_in(rat(1, 1), self.vars.clone());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact partial derivative. Differentiating by an absent variable gives 0.
    pub fn diff(&self, var: &str) -> RatPoly {
        let Some(idx) = self.vars.iter().position(|v| v == var) else {
            return RatPoly {
                vars: self.vars.clone(),
                terms: BTreeMap::new(),
            };
        };
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0[idx];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[idx] -= 1;
            accumulate(&mut terms, Monomial(exps), c * BigInt::from(e));
        }
        RatPoly {
            vars: self.vars.clone(),
            terms,
        }
    }

    /// Substitutes `value` for `var` and returns the result.
    pub fn substitute(&self, var: &str, value: &RatPoly) -> RatPoly {
        let Some(idx) = self.vars.iter().position(|v| v == var) else {
            return self.clone();
        };
        let max_e = self.terms.keys().map(|m| m.0[idx]).max().unwrap_or(0);
        let mut powers = vec![RatPoly::constant(rat(1, 1))];
        for k in 1..=max_e as usize {
            let next = &powers[k - 1] * value;
            powers.push(next);
        }
        let mut out = RatPoly::zero();
        for (m, c) in &self.terms {
            let mut exps = m.0.clone();
            let e = exps[idx] as usize;
            exps[idx] = 0;
            let mut rest = BTreeMap::new();
            rest.insert(Monomial(exps), c.clone());
            let rest = RatPoly {
                vars: self.vars.clone(),
                terms: rest,
            };
            out = &out + &(&rest * &powers[e]);
        }
        out
    }

    /// Exact evaluation; `value` maps each variable name to a rational.
    /// Missing variables evaluate as zero.
    pub fn eval<F>(&self, value: F) -> Rational
    where
        F: Fn(&str) -> Rational,
    {
        let point: Vec<Rational> = self.vars.iter().map(|v| value(v)).collect();
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Floating-point evaluation, for numeric cross-checks.
    pub fn eval_f64<F>(&self, value: F) -> f64
    where
        F: Fn(&str) -> f64,
    {
        let point: Vec<f64> = self.vars.iter().map(|v| value(v)).collect();
        self.terms
            .iter()
            .map(|(m, c)| {
                let c = c.to_f64().unwrap_or(f64::NAN);
                point
                    .iter()
                    .zip(&m.0)
                    .fold(c, |t, (x, &e)| t * x.powi(e as i32))
            })
            .sum()
    }

    /// Drops variables that appear in no term.
    pub fn trimmed(&self) -> RatPoly {
        let used: Vec<usize> = (0..self.vars.len())
            .filter(|&i| self.terms.keys().any(|m| m.0[i] > 0))
            .collect();
        if used.len() == self.vars.len() {
            return self.clone();
        }
        let vars: Vec<String> = used.iter().map(|&i| self.vars[i].clone()).collect();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (Monomial(used.iter().map(|&i| m.0[i]).collect()), c.clone()))
            .collect();
        RatPoly {
            vars: Arc::from(vars),
            terms,
        }
    }

    /// Debug dump: one term per line, `coeff  e1 e2 … en`, leading term first.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (m, c) in self.terms() {
            out.push_str(&c.to_string());
            out.push_str("  ");
            let exps: Vec<String> = m.0.iter().map(u32::to_string).collect();
            out.push_str(&exps.join(" "));
            out.push('\n');
        }
        out
    }

    fn lift(&self, vars: &Arc<[String]>) -> RatPoly {
        if Arc::ptr_eq(&self.vars, vars) || *self.vars == **vars {
            return RatPoly {
                vars: vars.clone(),
                terms: self.terms.clone(),
            };
        }
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.binary_search(v).expect("variable missing from union"))
            .collect();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut exps = vec![0u32; vars.len()];
                for (i, &e) in m.0.iter().enumerate() {
                    exps[map[i]] = e;
                }
                (Monomial(exps), c.clone())
            })
            .collect();
        RatPoly {
            vars: vars.clone(),
            terms,
        }
    }

    /// Brings both operands onto a common variable list.
    fn align(p: &RatPoly, q: &RatPoly) -> (Arc<[String]>, Option<(RatPoly, RatPoly)>) {
        if Arc::ptr_eq(&p.vars, &q.vars) || p.vars == q.vars {
            return (p.vars.clone(), None);
        }
        let mut union: Vec<String> = p.vars.iter().chain(q.vars.iter()).cloned().collect();
        union.sort();
        union.dedup();
        let union: Arc<[String]> = Arc::from(union);
        let lp = p.lift(&union);
        let lq = q.lift(&union);
        (union, Some((lp, lq)))
    }

    fn add_impl(p: &RatPoly, q: &RatPoly, negate: bool) -> RatPoly {
        let (vars, lifted) = RatPoly::align(p, q);
        let (p, q) = match &lifted {
            Some((a, b)) => (a, b),
            None => (p, q),
        };
        let mut terms = p.terms.clone();
        for (m, c) in &q.terms {
            let c = if negate { -c } else { c.clone() };
            accumulate(&mut terms, m.clone(), c);
        }
        RatPoly { vars, terms }
    }

    fn mul_impl(p: &RatPoly, q: &RatPoly) -> RatPoly {
        let (vars, lifted) = RatPoly::align(p, q);
        let (p, q) = match &lifted {
            Some((a, b)) => (a, b),
            None => (p, q),
        };
        let mut terms = BTreeMap::new();
        for (mp, cp) in &p.terms {
            for (mq, cq) in &q.terms {
                accumulate(&mut terms, mp.mul(mq), cp * cq);
            }
        }
        RatPoly { vars, terms }
    }
}

fn accumulate(map: &mut BTreeMap<Monomial, Rational>, m: Monomial, c: Rational) {
    use std::collections::btree_map::Entry;
    if c.is_zero() {
        return;
    }
    match map.entry(m) {
        Entry::Vacant(slot) => {
            slot.insert(c);
        }
        Entry::Occupied(mut slot) => {
            *slot.get_mut() += c;
            if slot.get().is_zero() {
                slot.remove();
            }
        }
    }
}

/// Exact `p op q`, aligning variables by name.
pub fn combine(p: &RatPoly, q: &RatPoly, op: CombineOp) -> RatPoly {
    match op {
        CombineOp::Add => RatPoly::add_impl(p, q, false),
        CombineOp::Sub => RatPoly::add_impl(p, q, true),
        CombineOp::Mul => RatPoly::mul_impl(p, q),
    }
}

impl PartialEq for RatPoly {
    fn eq(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }
}

impl Eq for RatPoly {}

impl From<Rational> for RatPoly {
    fn from(c: Rational) -> Self {
        RatPoly::constant(c)
    }
}

impl From<i64> for RatPoly {
    fn from(c: i64) -> Self {
        RatPoly::constant(rat(c, 1))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $op:expr) => {
        impl $trait<&RatPoly> for &RatPoly {
            type Output = RatPoly;
            fn $method(self, rhs: &RatPoly) -> RatPoly {
                combine(self, rhs, $op)
            }
        }
        impl $trait<RatPoly> for RatPoly {
            type Output = RatPoly;
            fn $method(self, rhs: RatPoly) -> RatPoly {
                combine(&self, &rhs, $op)
            }
        }
        impl $trait<&RatPoly> for RatPoly {
            type Output = RatPoly;
            fn $method(self, rhs: &RatPoly) -> RatPoly {
                combine(&self, rhs, $op)
            }
        }
        impl $trait<RatPoly> for &RatPoly {
            type Output = RatPoly;
            fn $method(self, rhs: RatPoly) -> RatPoly {
                combine(self, &rhs, $op)
            }
        }
    };
}

forward_binop!(Add, add, CombineOp::Add);
forward_binop!(Sub, sub, CombineOp::Sub);
forward_binop!(Mul, mul, CombineOp::Mul);

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        self.scale(&rat(-1, 1))
    }
}

impl Neg for RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        -&self
    }
}

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatPoly({self})")
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let factors: Vec<String> = m
                .0
                .iter()
                .zip(self.vars.iter())
                .filter(|(e, _)| **e > 0)
                .map(|(e, v)| if *e == 1 { v.clone() } else { format!("{v}^{e}") })
                .collect();
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{abs}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}
