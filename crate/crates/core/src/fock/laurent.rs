//! Multivariate Laurent polynomials in numbered variables z_0, z_1, ... with integer
//! coefficients, for correlation functions and determinant identities.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use smallvec::SmallVec;

use crate::algebra::Ring;
use crate::error::{Error, Result};
use crate::Rational;

/// Exponent vector with trailing zeros stripped, so every monomial has one key.
pub type Exponents = SmallVec<[i32; 8]>;

fn normalize(mut e: Exponents) -> Exponents {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

fn add_exponents(a: &Exponents, b: &Exponents) -> Exponents {
    let n = a.len().max(b.len());
    let e = (0..n).map(|i| a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)).collect();
    normalize(e)
}

fn checked(v: Option<i64>) -> i64 {
    v.expect("integer coefficient overflow in Laurent polynomial")
}

#[derive(Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    terms: HashMap<Exponents, i64>,
}

impl LaurentPoly {
    pub fn var(i: usize) -> LaurentPoly {
        LaurentPoly::monomial(&unit(i, 1), 1)
    }

    /// c · Π z_i^{e_i}.
    pub fn monomial(e: &[i32], c: i64) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        if c != 0 {
            p.terms.insert(normalize(e.iter().copied().collect()), c);
        }
        p
    }

    pub fn constant(c: i64) -> LaurentPoly {
        LaurentPoly::monomial(&[], c)
    }

    /// z_a - z_b.
    pub fn difference(a: usize, b: usize) -> LaurentPoly {
        &LaurentPoly::var(a) - &LaurentPoly::var(b)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &i64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[i32]) -> i64 {
        let key = normalize(e.iter().copied().collect());
        self.terms.get(&key).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, e: Exponents, c: i64) {
        if c == 0 {
            return;
        }
        let e = normalize(e);
        let slot = self.terms.entry(e.clone()).or_insert(0);
        *slot = checked(slot.checked_add(c));
        if *slot == 0 {
            self.terms.remove(&e);
        }
    }

    pub fn scale(&self, c: i64) -> LaurentPoly {
        if c == 0 {
            return LaurentPoly::zero();
        }
        LaurentPoly { terms: self.terms.iter().map(|(e, v)| (e.clone(), checked(v.checked_mul(c)))).collect() }
    }

    /// Multiplies by Π z_i^{e_i}.
    pub fn shift(&self, e: &[i32]) -> LaurentPoly {
        let s: Exponents = e.iter().copied().collect();
        LaurentPoly { terms: self.terms.iter().map(|(k, v)| (add_exponents(k, &s), *v)).collect() }
    }

    /// Keeps the terms whose exponents of z_0..z_{nvars-1} all lie in [lo, hi].
    pub fn in_box(&self, nvars: usize, lo: i32, hi: i32) -> LaurentPoly {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| (0..nvars).all(|i| (lo..=hi).contains(&e.get(i).copied().unwrap_or(0))))
                .map(|(e, v)| (e.clone(), *v))
                .collect(),
        }
    }

    /// Replaces z_i by z_{perm[i]}.
    pub fn permute_vars(&self, perm: &[usize]) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e, v) in &self.terms {
            let mut ne: Exponents = SmallVec::new();
            for (i, &x) in e.iter().enumerate() {
                let j = perm.get(i).copied().unwrap_or(i);
                if ne.len() <= j {
                    ne.resize(j + 1, 0);
                }
                ne[j] += x;
            }
            out.add_term(ne, *v);
        }
        out
    }

    /// Exact value at the given point; every variable with a negative power must be nonzero.
    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (e, v) in &self.terms {
            let mut t = Rational::from_integer((*v).into());
            for (i, &x) in e.iter().enumerate() {
                let p = point.get(i).ok_or_else(|| Error::Config(format!("no value for z{i}")))?;
                if x < 0 && p.is_zero() {
                    return Err(Error::ZeroDenominator(format!("z{i} = 0")));
                }
                t *= num_traits::pow::Pow::pow(p, x);
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Terms in exponent order, for deterministic output.
    pub fn sorted_terms(&self) -> Vec<(Exponents, i64)> {
        let mut v: Vec<_> = self.terms.iter().map(|(e, c)| (e.clone(), *c)).collect();
        v.sort();
        v
    }
}

fn unit(i: usize, e: i32) -> Exponents {
    let mut v: Exponents = SmallVec::from_elem(0, i + 1);
    v[i] = e;
    v
}

impl Zero for LaurentPoly {
    fn zero() -> Self {
        LaurentPoly { terms: HashMap::new() }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for LaurentPoly {
    fn one() -> Self {
        LaurentPoly::constant(1)
    }
}

impl Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;

    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, v) in &rhs.terms {
            out.add_term(e.clone(), *v);
        }
        out
    }
}

impl Sub<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;

    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, v) in &rhs.terms {
            out.add_term(e.clone(), checked(v.checked_neg()));
        }
        out
    }
}

impl Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, v1) in &self.terms {
            for (e2, v2) in &rhs.terms {
                out.add_term(add_exponents(e1, e2), checked(v1.checked_mul(*v2)));
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        self.scale(-1)
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;

    fn add(self, rhs: LaurentPoly) -> LaurentPoly {
        &self + &rhs
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;

    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl Ring for LaurentPoly {
    fn from_i64(v: i64) -> Self {
        LaurentPoly::constant(v)
    }

    fn try_inv(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, v) = self.terms.iter().next()?;
        if v.abs() != 1 {
            return None;
        }
        let ne: Exponents = e.iter().map(|x| -x).collect();
        Some(LaurentPoly::monomial(&ne, *v))
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }

    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.sorted_terms().iter().enumerate() {
            if n > 0 {
                write!(f, " {} ", if *c < 0 { '-' } else { '+' })?;
            } else if *c < 0 {
                write!(f, "-")?;
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, x)| **x != 0)
                .map(|(i, x)| if *x == 1 { format!("z{i}") } else { format!("z{i}^{x}") })
                .collect();
            match (c.abs(), mono.is_empty()) {
                (a, true) => write!(f, "{a}")?,
                (1, false) => write!(f, "{}", mono.join("*"))?,
                (a, false) => write!(f, "{a}*{}", mono.join("*"))?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A factor of a rational function expanded with the convention 1/(a-b) = Σ_{j≥0} b^j a^{-j-1}.
#[derive(Clone, Debug)]
pub enum Factor {
    Poly(LaurentPoly),
    /// 1/(z_a - z_b), expanded in powers of z_b/z_a.
    Cauchy(usize, usize),
}

/// Expands Π factors and keeps the terms whose exponents of z_0..z_{nvars-1} lie in [lo, hi].
/// Exact on that box: each series is cut at an index bound forced by the box, and partial
/// products are pruned only when the remaining factors cannot bring an exponent back inside.
pub fn expand_in_box(factors: &[Factor], nvars: usize, lo: i32, hi: i32) -> Result<LaurentPoly> {
    for f in factors {
        if let Factor::Cauchy(a, b) = f {
            if a == b || *a >= nvars || *b >= nvars {
                return Err(Error::Config(format!("bad expansion factor 1/(z{a}-z{b})")));
            }
        }
    }
    let jmax = series_bounds(factors, lo, hi)?;
    let contrib = |i: usize, v: usize| -> (i32, i32) {
        match &factors[i] {
            Factor::Poly(p) => poly_bounds(p, v),
            Factor::Cauchy(a, _) if *a == v => (-jmax[i] - 1, -1),
            Factor::Cauchy(_, b) if *b == v => (0, jmax[i]),
            Factor::Cauchy(..) => (0, 0),
        }
    };
    // rem[i][v]: bounds on what factors i.. can still add to the exponent of z_v
    let mut rem = vec![vec![(0i32, 0i32); nvars]; factors.len() + 1];
    for i in (0..factors.len()).rev() {
        for v in 0..nvars {
            let (a, b) = contrib(i, v);
            rem[i][v] = (rem[i + 1][v].0 + a, rem[i + 1][v].1 + b);
        }
    }
    let keep = |e: &Exponents, r: &[(i32, i32)]| {
        (0..nvars).all(|v| {
            let x = e.get(v).copied().unwrap_or(0);
            x + r[v].1 >= lo && x + r[v].0 <= hi
        })
    };
    let mut acc = LaurentPoly::one();
    for (i, f) in factors.iter().enumerate() {
        let step = match f {
            Factor::Poly(p) => p.clone(),
            Factor::Cauchy(a, b) => {
                let mut s = LaurentPoly::zero();
                for j in 0..=jmax[i] {
                    let mut e: Exponents = SmallVec::from_elem(0, (*a).max(*b) + 1);
                    e[*a] -= j + 1;
                    e[*b] += j;
                    s.add_term(e, 1);
                }
                s
            }
        };
        let mut next = LaurentPoly::zero();
        for (e1, v1) in &acc.terms {
            for (e2, v2) in &step.terms {
                let e = add_exponents(e1, e2);
                if keep(&e, &rem[i + 1]) {
                    next.add_term(e, checked(v1.checked_mul(*v2)));
                }
            }
        }
        acc = next;
    }
    Ok(acc.in_box(nvars, lo, hi))
}

fn poly_bounds(p: &LaurentPoly, v: usize) -> (i32, i32) {
    let xs = p.terms.keys().map(|e| e.get(v).copied().unwrap_or(0));
    xs.fold(None, |acc: Option<(i32, i32)>, x| Some(acc.map_or((x, x), |(a, b)| (a.min(x), b.max(x)))))
        .unwrap_or((0, 0))
}

/// Upper bounds on the summation index of every 1/(a-b) series beyond which no term can land
/// in the box, found by propagating the box constraints to a fixed point.
fn series_bounds(factors: &[Factor], lo: i32, hi: i32) -> Result<Vec<i32>> {
    let mut jb: Vec<Option<i32>> = factors.iter().map(|f| matches!(f, Factor::Poly(_)).then_some(0)).collect();
    loop {
        let mut changed = false;
        for (i, f) in factors.iter().enumerate() {
            let Factor::Cauchy(a, b) = f else { continue };
            // the lowest the other factors can push z_b, and the highest they can push z_a
            let mut min_b = Some(0i32);
            let mut max_a = Some(0i32);
            for (g, h) in factors.iter().enumerate() {
                if g == i {
                    continue;
                }
                let (lb, ub) = match h {
                    Factor::Poly(p) => (Some(poly_bounds(p, *b).0), Some(poly_bounds(p, *a).1)),
                    Factor::Cauchy(x, y) => (
                        if x == b { jb[g].map(|j| -j - 1) } else { Some(0) },
                        if y == a { jb[g] } else if x == a { Some(-1) } else { Some(0) },
                    ),
                };
                min_b = min_b.zip(lb).map(|(s, t)| s + t);
                max_a = max_a.zip(ub).map(|(s, t)| s + t);
            }
            let cands = [min_b.map(|m| hi - m), max_a.map(|m| m - 1 - lo)];
            let best = cands.iter().flatten().copied().min().map(|j| j.max(-1));
            if let Some(j) = best {
                if jb[i].map_or(true, |old| j < old) {
                    jb[i] = Some(j);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    jb.into_iter()
        .map(|j| j.ok_or_else(|| Error::Config("series expansion is not bounded by the box".into())))
        .collect()
}
