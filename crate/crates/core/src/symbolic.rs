//! Laurent polynomials in hash-consed tau "atoms".
//!
//! Connection matrices are built from ratios of tau functions. Treating each distinct
//! nonconstant tau polynomial as an invertible indeterminate keeps h * (1/h) = 1 exact
//! without multivariate gcds; identities are then expanded back into polynomials only
//! after clearing a minimal denominator.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use smallvec::SmallVec;

use crate::algebra::{Ring, VarId};
use crate::error::{Error, Result};
use crate::{Poly, RatFunc, Rational};

pub type AtomId = u32;

/// Sorted (atom, nonzero exponent) pairs.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AtomMonomial(SmallVec<[(AtomId, i32); 4]>);

impl AtomMonomial {
    pub fn one() -> AtomMonomial {
        AtomMonomial(SmallVec::new())
    }

    pub fn atom(a: AtomId, e: i32) -> AtomMonomial {
        let mut v = SmallVec::new();
        if e != 0 {
            v.push((a, e));
        }
        AtomMonomial(v)
    }

    pub fn factors(&self) -> &[(AtomId, i32)] {
        &self.0
    }

    pub fn exponent(&self, a: AtomId) -> i32 {
        self.0.iter().find(|(b, _)| *b == a).map_or(0, |(_, e)| *e)
    }

    pub fn mul(&self, other: &AtomMonomial) -> AtomMonomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push(b[j]);
                j += 1;
            } else {
                let e = a[i].1 + b[j].1;
                if e != 0 {
                    out.push((a[i].0, e));
                }
                i += 1;
                j += 1;
            }
        }
        AtomMonomial(out)
    }

    pub fn inv(&self) -> AtomMonomial {
        AtomMonomial(self.0.iter().map(|(a, e)| (*a, -e)).collect())
    }
}

impl fmt::Debug for AtomMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> =
            self.0.iter().map(|(a, e)| if *e == 1 { format!("t{a}") } else { format!("t{a}^{e}") }).collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Rational-coefficient Laurent polynomial in atoms.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct TauExpr {
    terms: BTreeMap<AtomMonomial, Rational>,
}

impl TauExpr {
    pub fn constant(c: Rational) -> TauExpr {
        TauExpr::term(AtomMonomial::one(), c)
    }

    pub fn term(m: AtomMonomial, c: Rational) -> TauExpr {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        TauExpr { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&AtomMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&AtomMonomial::one()).cloned(),
            _ => None,
        }
    }

    fn accumulate(&mut self, m: AtomMonomial, c: Rational) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }
}

impl fmt::Debug for TauExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("{c}*{m:?}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Zero for TauExpr {
    fn zero() -> Self {
        TauExpr::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for TauExpr {
    fn one() -> Self {
        TauExpr::constant(Rational::one())
    }
}

impl Add for TauExpr {
    type Output = TauExpr;
    fn add(self, rhs: TauExpr) -> TauExpr {
        self.add_ref(&rhs)
    }
}

impl Sub for TauExpr {
    type Output = TauExpr;
    fn sub(self, rhs: TauExpr) -> TauExpr {
        self.sub_ref(&rhs)
    }
}

impl Mul for TauExpr {
    type Output = TauExpr;
    fn mul(self, rhs: TauExpr) -> TauExpr {
        self.mul_ref(&rhs)
    }
}

impl Neg for TauExpr {
    type Output = TauExpr;
    fn neg(mut self) -> TauExpr {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Ring for TauExpr {
    fn from_i64(v: i64) -> Self {
        TauExpr::constant(crate::q(v))
    }

    fn try_inv(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next()?;
        Some(TauExpr::term(m.inv(), c.recip()))
    }

    fn mul_ref(&self, other: &Self) -> Self {
        let mut out = TauExpr::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.accumulate(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    fn add_ref(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.accumulate(m.clone(), c.clone());
        }
        out
    }

    fn sub_ref(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.accumulate(m.clone(), -c.clone());
        }
        out
    }
}

/// Interning table: each distinct nonconstant polynomial becomes one atom.
#[derive(Default)]
pub struct AtomTable {
    polys: Vec<Poly>,
    index: HashMap<Poly, AtomId>,
}

impl AtomTable {
    pub fn new() -> AtomTable {
        AtomTable::default()
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn poly(&self, a: AtomId) -> &Poly {
        &self.polys[a as usize]
    }

    /// The polynomial as an expression: zero and constants stay scalars; atoms are
    /// normalized to a unit first coefficient so scalar multiples share an atom.
    pub fn intern(&mut self, p: &Poly) -> TauExpr {
        if let Some(c) = p.as_constant() {
            return TauExpr::constant(c);
        }
        let lead = p.terms().next().map(|(_, c)| c.clone()).expect("nonconstant");
        let normal = p.div_scalar(&lead);
        let id = match self.index.get(&normal) {
            Some(id) => *id,
            None => {
                let id = self.polys.len() as AtomId;
                self.polys.push(normal.clone());
                self.index.insert(normal, id);
                id
            }
        };
        TauExpr::term(AtomMonomial::atom(id, 1), lead)
    }

    /// ∏ num / ∏ den; zero numerator factors give 0, zero denominator factors are an error.
    pub fn ratio(&mut self, num: &[&Poly], den: &[&Poly]) -> Result<TauExpr> {
        if let Some(p) = den.iter().find(|p| p.is_zero()) {
            return Err(Error::ZeroDenominator(p.to_string()));
        }
        if num.iter().any(|p| p.is_zero()) {
            return Ok(TauExpr::zero());
        }
        let mut acc = TauExpr::one();
        for p in num {
            acc = acc.mul_ref(&self.intern(p));
        }
        for p in den {
            let inv = self.intern(p).try_inv().expect("nonzero monomial");
            acc = acc.mul_ref(&inv);
        }
        Ok(acc)
    }

    fn power(&self, a: AtomId, e: u32, cache: &mut HashMap<(AtomId, u32), Poly>) -> Poly {
        cache.entry((a, e)).or_insert_with(|| self.polys[a as usize].pow(e)).clone()
    }

    fn expand_monomial(&self, m: &AtomMonomial, cache: &mut HashMap<(AtomId, u32), Poly>) -> Poly {
        let mut acc = Poly::one();
        for (a, e) in m.factors() {
            assert!(*e >= 0, "expanding a negative atom power");
            acc = &acc * &self.power(*a, *e as u32, cache);
        }
        acc
    }

    /// Splits e = N / D with D the minimal atom monomial making N atom-polynomial, and
    /// atom factors common to every term removed from N. Returns (N, D) in atom form.
    pub fn clear(&self, e: &TauExpr) -> (TauExpr, AtomMonomial) {
        let mut low: BTreeMap<AtomId, i32> = BTreeMap::new();
        for m in e.terms.keys() {
            for (a, _) in m.factors() {
                low.insert(*a, 0);
            }
        }
        for (a, x) in low.iter_mut() {
            *x = e.terms.keys().map(|m| m.exponent(*a)).min().unwrap_or(0);
        }
        let shift = AtomMonomial(low.iter().filter(|(_, x)| **x != 0).map(|(a, x)| (*a, -x)).collect());
        let den = AtomMonomial(low.iter().filter(|(_, x)| **x < 0).map(|(a, x)| (*a, -x)).collect());
        let mut num = TauExpr::zero();
        for (m, c) in &e.terms {
            num.accumulate(m.mul(&shift), c.clone());
        }
        (num, den)
    }

    /// Polynomial numerator of e after clearing its minimal denominator; zero iff e = 0.
    pub fn cleared_numerator(&self, e: &TauExpr) -> Poly {
        let (num, _) = self.clear(e);
        let mut cache = HashMap::new();
        let mut acc = Poly::zero();
        for (m, c) in &num.terms {
            acc += &self.expand_monomial(m, &mut cache).scale(c);
        }
        acc
    }

    pub fn to_ratfunc(&self, e: &TauExpr) -> Result<RatFunc> {
        let mut low: BTreeMap<AtomId, i32> = BTreeMap::new();
        for m in e.terms.keys() {
            for (a, x) in m.factors() {
                let y = low.entry(*a).or_insert(0);
                *y = (*y).min(*x);
            }
        }
        let den = AtomMonomial(low.iter().filter(|(_, x)| **x < 0).map(|(a, x)| (*a, -x)).collect());
        let mut cache = HashMap::new();
        let mut num = Poly::zero();
        for (m, c) in &e.terms {
            num += &self.expand_monomial(&m.mul(&den), &mut cache).scale(c);
        }
        Ok(RatFunc::new(num, self.expand_monomial(&den, &mut cache))?)
    }

    pub fn evaluate(&self, e: &TauExpr, assignment: &BTreeMap<VarId, Rational>) -> Result<Rational> {
        let mut values: HashMap<AtomId, Rational> = HashMap::new();
        let mut acc = Rational::zero();
        for (m, c) in &e.terms {
            let mut t = c.clone();
            for (a, x) in m.factors() {
                let v = match values.get(a) {
                    Some(v) => v.clone(),
                    None => {
                        let v = self.polys[*a as usize].substitute(assignment)?;
                        values.insert(*a, v.clone());
                        v
                    }
                };
                if v.is_zero() {
                    if *x < 0 {
                        return Err(Error::TauVanishes);
                    }
                    t = Rational::zero();
                    break;
                }
                let p = pow_rational(&v, x.unsigned_abs());
                t = if *x > 0 { t * p } else { t / p };
            }
            acc += t;
        }
        Ok(acc)
    }
}

fn pow_rational(v: &Rational, e: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= v;
    }
    acc
}
