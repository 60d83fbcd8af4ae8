use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Zero};
use smallvec::SmallVec;

use super::ring::Ring;
use super::scalar::Scalar;
use super::var::{Family, VarId, Window};
use crate::error::AlgebraError;

/// Product of variable powers, kept sorted by variable with positive exponents.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(SmallVec<[(VarId, u32); 4]>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(SmallVec::new())
    }

    pub fn var(v: VarId) -> Monomial {
        Monomial(smallvec::smallvec![(v, 1)])
    }

    /// Builds from arbitrary (var, exp) pairs, merging repeats and dropping zero exponents.
    pub fn from_pairs<I: IntoIterator<Item = (VarId, u32)>>(pairs: I) -> Monomial {
        let mut v: SmallVec<[(VarId, u32); 4]> = pairs.into_iter().filter(|p| p.1 > 0).collect();
        v.sort_by_key(|p| p.0);
        let mut out: SmallVec<[(VarId, u32); 4]> = SmallVec::with_capacity(v.len());
        for (x, e) in v {
            match out.last_mut() {
                Some(last) if last.0 == x => last.1 += e,
                _ => out.push((x, e)),
            }
        }
        Monomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(VarId, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|p| p.1).sum()
    }

    pub fn degree_in(&self, family: Family) -> u32 {
        self.0.iter().filter(|p| p.0.family() == family).map(|p| p.1).sum()
    }

    pub fn exponent(&self, v: VarId) -> u32 {
        self.0.iter().find(|p| p.0 == v).map_or(0, |p| p.1)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// self / other when other divides self.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = SmallVec::new();
        let mut j = 0;
        for &(v, e) in self.0.iter() {
            if j < other.0.len() && other.0[j].0 < v {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == v {
                let f = other.0[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((v, e - f)),
                }
            } else {
                out.push((v, e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Pure lexicographic monomial order with c before d before e and lower index first.
    pub fn lex_cmp(&self, other: &Monomial) -> Ordering {
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            if a.0 != b.0 {
                return if a.0 < b.0 { Ordering::Greater } else { Ordering::Less };
            }
            if a.1 != b.1 {
                return a.1.cmp(&b.1);
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, (v, e)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Sparse polynomial over an exact scalar field in the indexed variables c_i, d_i, e_i.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly<S: Scalar> {
    terms: BTreeMap<Monomial, S>,
}

impl<S: Scalar> Poly<S> {
    pub fn constant(s: S) -> Self {
        let mut terms = BTreeMap::new();
        if !s.is_zero() {
            terms.insert(Monomial::one(), s);
        }
        Poly { terms }
    }

    pub fn from_i64(v: i64) -> Self {
        Poly::constant(S::from_i64(v))
    }

    pub fn var(v: VarId) -> Self {
        Poly::term(Monomial::var(v), S::one())
    }

    /// The variable x_i, or 0 when i lies outside the window.
    pub fn var_in(family: Family, index: i64, window: Window) -> Self {
        if window.contains(index) {
            Poly::var(VarId::new(family, index))
        } else {
            Poly::zero()
        }
    }

    pub fn term(m: Monomial, s: S) -> Self {
        let mut terms = BTreeMap::new();
        if !s.is_zero() {
            terms.insert(m, s);
        }
        Poly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, S)>>(iter: I) -> Self {
        let mut acc: HashMap<Monomial, S> = HashMap::new();
        for (m, s) in iter {
            accumulate(&mut acc, m, s);
        }
        Poly::from_map(acc)
    }

    fn from_map(acc: HashMap<Monomial, S>) -> Self {
        Poly {
            terms: acc.into_iter().filter(|(_, s)| !s.is_zero()).collect(),
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn constant_term(&self) -> S {
        self.coeff(&Monomial::one())
    }

    pub fn as_constant(&self) -> Option<S> {
        if self.is_constant() {
            Some(self.constant_term())
        } else {
            None
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn variables(&self) -> Vec<VarId> {
        let mut vs: Vec<VarId> = self
            .terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|p| p.0))
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn scale(&self, s: &S) -> Self {
        if s.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.clone() * s.clone())).collect(),
        }
    }

    /// Exact division by a nonzero scalar.
    pub fn div_scalar(&self, s: &S) -> Self {
        assert!(!s.is_zero(), "division of a polynomial by zero");
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.clone() / s.clone())).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, s: &S) -> Self {
        if s.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone() * s.clone())).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Poly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Applies a variable renaming; `None` sends the variable to 0.
    pub fn map_vars<F: Fn(VarId) -> Option<VarId>>(&self, f: F) -> Self {
        Poly::from_terms(self.terms.iter().filter_map(|(m, c)| {
            let mut pairs = Vec::with_capacity(m.factors().len());
            for &(v, e) in m.factors() {
                pairs.push((f(v)?, e));
            }
            Some((Monomial::from_pairs(pairs), c.clone()))
        }))
    }

    /// Keeps only the terms satisfying the predicate.
    pub fn filter_terms<F: Fn(&Monomial) -> bool>(&self, f: F) -> Self {
        Poly {
            terms: self.terms.iter().filter(|(m, _)| f(m)).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Sets every variable outside the window to zero.
    pub fn restrict(&self, window: Window) -> Self {
        self.filter_terms(|m| m.factors().iter().all(|p| window.contains(p.0.index())))
    }

    /// Exact evaluation at a full assignment.
    pub fn substitute(&self, assignment: &BTreeMap<VarId, S>) -> Result<S, AlgebraError> {
        let mut total = S::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.factors() {
                let x = assignment.get(&v).ok_or(AlgebraError::MissingVariable(v.to_string()))?;
                for _ in 0..e {
                    t = t * x.clone();
                }
            }
            total = total + t;
        }
        Ok(total)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &S)> {
        self.terms.iter().max_by(|a, b| a.0.lex_cmp(b.0))
    }

    /// Exact quotient self / d, or `None` when d does not divide self.
    pub fn div_exact(&self, d: &Poly<S>) -> Option<Poly<S>> {
        let (lm, lc) = d.leading_term()?;
        if let Some(c) = d.as_constant() {
            return Some(self.div_scalar(&c));
        }
        let mut rem = self.clone();
        let mut quot: HashMap<Monomial, S> = HashMap::new();
        while !rem.is_zero() {
            let (rm, rc) = rem.leading_term().map(|(m, c)| (m.clone(), c.clone()))?;
            let qm = rm.div(lm)?;
            let qc = rc / lc.clone();
            rem = &rem - &d.mul_monomial(&qm, &qc);
            accumulate(&mut quot, qm, qc);
        }
        Some(Poly::from_map(quot))
    }

    pub fn to_canonical_string(&self) -> String {
        self.to_string()
    }
}

fn accumulate<S: Scalar>(acc: &mut HashMap<Monomial, S>, m: Monomial, s: S) {
    match acc.get_mut(&m) {
        Some(c) => *c = c.clone() + s,
        None => {
            acc.insert(m, s);
        }
    }
}

impl<S: Scalar> fmt::Display for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{}", abs.to_canonical_string())?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", abs.to_canonical_string())?;
            }
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<S: Scalar> Zero for Poly<S> {
    fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<S: Scalar> One for Poly<S> {
    fn one() -> Self {
        Poly::constant(S::one())
    }
}

impl<S: Scalar> AddAssign<&Poly<S>> for Poly<S> {
    fn add_assign(&mut self, rhs: &Poly<S>) {
        for (m, c) in &rhs.terms {
            match self.terms.get_mut(m) {
                Some(x) => {
                    *x = x.clone() + c.clone();
                    if x.is_zero() {
                        self.terms.remove(m);
                    }
                }
                None => {
                    self.terms.insert(m.clone(), c.clone());
                }
            }
        }
    }
}

impl<S: Scalar> SubAssign<&Poly<S>> for Poly<S> {
    fn sub_assign(&mut self, rhs: &Poly<S>) {
        for (m, c) in &rhs.terms {
            match self.terms.get_mut(m) {
                Some(x) => {
                    *x = x.clone() - c.clone();
                    if x.is_zero() {
                        self.terms.remove(m);
                    }
                }
                None => {
                    self.terms.insert(m.clone(), -c.clone());
                }
            }
        }
    }
}

impl<S: Scalar> Add<&Poly<S>> for &Poly<S> {
    type Output = Poly<S>;
    fn add(self, rhs: &Poly<S>) -> Poly<S> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<S: Scalar> Sub<&Poly<S>> for &Poly<S> {
    type Output = Poly<S>;
    fn sub(self, rhs: &Poly<S>) -> Poly<S> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<S: Scalar> Mul<&Poly<S>> for &Poly<S> {
    type Output = Poly<S>;
    fn mul(self, rhs: &Poly<S>) -> Poly<S> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut acc: HashMap<Monomial, S> = HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                accumulate(&mut acc, ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        Poly::from_map(acc)
    }
}

impl<S: Scalar> Neg for &Poly<S> {
    type Output = Poly<S>;
    fn neg(self) -> Poly<S> {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl<S: Scalar> Add for Poly<S> {
    type Output = Poly<S>;
    fn add(mut self, rhs: Poly<S>) -> Poly<S> {
        self += &rhs;
        self
    }
}

impl<S: Scalar> Sub for Poly<S> {
    type Output = Poly<S>;
    fn sub(mut self, rhs: Poly<S>) -> Poly<S> {
        self -= &rhs;
        self
    }
}

impl<S: Scalar> Mul for Poly<S> {
    type Output = Poly<S>;
    fn mul(self, rhs: Poly<S>) -> Poly<S> {
        &self * &rhs
    }
}

impl<S: Scalar> Neg for Poly<S> {
    type Output = Poly<S>;
    fn neg(self) -> Poly<S> {
        -&self
    }
}

impl<S: Scalar> Ring for Poly<S> {
    fn from_i64(v: i64) -> Self {
        Poly::constant(S::from_i64(v))
    }

    fn try_inv(&self) -> Option<Self> {
        let c = self.as_constant()?;
        if c.is_zero() {
            None
        } else {
            Some(Poly::constant(S::one() / c))
        }
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

impl<S: Scalar> serde::Serialize for Poly<S> {
    fn serialize<Ser: serde::Serializer>(&self, serializer: Ser) -> Result<Ser::Ok, Ser::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// Convenience: the polynomial x_i for a family without window checks.
pub fn x<S: Scalar>(family: Family, index: i64) -> Poly<S> {
    Poly::var(VarId::new(family, index))
}
