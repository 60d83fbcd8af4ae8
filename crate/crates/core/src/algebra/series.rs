use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::ring::Ring;
use crate::error::AlgebraError;

/// Laurent series in z with finitely many positive powers.
/// `trunc = Some(n)`: coefficients below z^{-n} are unknown; `None`: exact Laurent polynomial.
#[derive(Clone, PartialEq)]
pub struct LaurentSeries<R: Ring> {
    coeffs: BTreeMap<i64, R>,
    trunc: Option<i64>,
}

fn min_trunc(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

impl<R: Ring> LaurentSeries<R> {
    pub fn zero() -> Self {
        LaurentSeries { coeffs: BTreeMap::new(), trunc: None }
    }

    pub fn one() -> Self {
        LaurentSeries::monomial(R::one(), 0)
    }

    pub fn constant(r: R) -> Self {
        LaurentSeries::monomial(r, 0)
    }

    /// r z^e
    pub fn monomial(r: R, e: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if !r.is_zero() {
            coeffs.insert(e, r);
        }
        LaurentSeries { coeffs, trunc: None }
    }

    pub fn from_coeffs<I: IntoIterator<Item = (i64, R)>>(iter: I, trunc: Option<i64>) -> Self {
        let mut coeffs: BTreeMap<i64, R> = BTreeMap::new();
        for (e, r) in iter {
            if trunc.is_some_and(|n| e < -n) {
                continue;
            }
            let slot = coeffs.entry(e).or_insert_with(R::zero);
            *slot = slot.add_ref(&r);
        }
        coeffs.retain(|_, r| !r.is_zero());
        LaurentSeries { coeffs, trunc }
    }

    pub fn trunc(&self) -> Option<i64> {
        self.trunc
    }

    pub fn is_exact(&self) -> bool {
        self.trunc.is_none()
    }

    /// Forgets everything below z^{-n}.
    pub fn truncate(&self, n: i64) -> Self {
        let trunc = min_trunc(self.trunc, Some(n));
        let coeffs = self.coeffs.range(-n..).map(|(e, r)| (*e, r.clone())).collect();
        LaurentSeries { coeffs, trunc }
    }

    pub fn is_known(&self, e: i64) -> bool {
        self.trunc.is_none_or(|n| e >= -n)
    }

    /// Coefficient of z^e; zero when absent. Panics on unknown exponents.
    pub fn coeff(&self, e: i64) -> R {
        assert!(self.is_known(e), "coefficient z^{e} lies below the truncation");
        self.coeffs.get(&e).cloned().unwrap_or_else(R::zero)
    }

    pub fn known_coeff(&self, e: i64) -> Option<R> {
        if self.is_known(e) {
            Some(self.coeffs.get(&e).cloned().unwrap_or_else(R::zero))
        } else {
            None
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &R)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn scale(&self, r: &R) -> Self {
        LaurentSeries::from_coeffs(self.coeffs.iter().map(|(e, c)| (*e, c.mul_ref(r))), self.trunc)
    }

    /// Multiplication by z^m.
    pub fn shift(&self, m: i64) -> Self {
        LaurentSeries {
            coeffs: self.coeffs.iter().map(|(e, c)| (e + m, c.clone())).collect(),
            trunc: self.trunc.map(|n| n - m),
        }
    }

    pub fn map<R2: Ring, F: Fn(&R) -> R2>(&self, f: F) -> LaurentSeries<R2> {
        LaurentSeries::from_coeffs(self.coeffs.iter().map(|(e, c)| (*e, f(c))), self.trunc)
    }

    pub fn try_map<R2: Ring, E, F: Fn(&R) -> Result<R2, E>>(&self, f: F) -> Result<LaurentSeries<R2>, E> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for (e, c) in &self.coeffs {
            out.push((*e, f(c)?));
        }
        Ok(LaurentSeries::from_coeffs(out, self.trunc))
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        let trunc = min_trunc(self.trunc, other.trunc);
        let mut coeffs = self.coeffs.clone();
        for (e, c) in &other.coeffs {
            let slot = coeffs.entry(*e).or_insert_with(R::zero);
            *slot = slot.add_ref(c);
        }
        LaurentSeries::from_coeffs(coeffs, trunc)
    }

    pub fn neg_ref(&self) -> Self {
        LaurentSeries {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c.clone())).collect(),
            trunc: self.trunc,
        }
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }

    /// Convolution; unknown tails of one factor spoil the product down from the other's top power.
    pub fn mul_ref(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return LaurentSeries::zero();
        }
        let ta = self.trunc.map(|n| n - other.max_exp().unwrap_or(0));
        let tb = other.trunc.map(|n| n - self.max_exp().unwrap_or(0));
        let trunc = min_trunc(ta, tb);
        let mut coeffs: BTreeMap<i64, R> = BTreeMap::new();
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &other.coeffs {
                let e = ea + eb;
                if trunc.is_some_and(|n| e < -n) {
                    continue;
                }
                let p = ca.mul_ref(cb);
                let slot = coeffs.entry(e).or_insert_with(R::zero);
                *slot = slot.add_ref(&p);
            }
        }
        LaurentSeries::from_coeffs(coeffs, trunc)
    }

    /// Inverse up to z^{-n}; requires a unit leading coefficient.
    pub fn invert(&self, n: i64) -> Result<Self, AlgebraError> {
        let top = self.max_exp().ok_or(AlgebraError::SeriesNotInvertible)?;
        let lead_inv = self.coeff(top).try_inv().ok_or(AlgebraError::SeriesNotInvertible)?;
        // a = lead z^top (1 + x), x in z^{-1}R[[z^{-1}]]
        let normalized = self.shift(-top).scale(&lead_inv);
        let depth = match normalized.trunc {
            Some(t) => t.min(n - top),
            None => n - top,
        };
        let mut inv: Vec<R> = vec![R::one()];
        for j in 1..=depth.max(0) {
            let mut s = R::zero();
            for i in 1..=j {
                let xi = normalized.coeff(-i);
                if !xi.is_zero() {
                    s = s.sub_ref(&xi.mul_ref(&inv[(j - i) as usize]));
                }
            }
            inv.push(s);
        }
        let body = LaurentSeries::from_coeffs(
            inv.into_iter().enumerate().map(|(j, c)| (-(j as i64), c)),
            Some(depth.max(0)),
        );
        Ok(body.scale(&lead_inv).shift(-top))
    }

    /// First nonzero coefficient among z^{-1}..z^{-n}.
    pub fn first_negative(&self, n: i64) -> Option<(i64, R)> {
        (1..=n).find_map(|m| {
            let c = self.coeff(-m);
            if c.is_zero() {
                None
            } else {
                Some((m, c))
            }
        })
    }
}

impl<R: Ring> fmt::Debug for LaurentSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.coeffs.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c:?})z^{e}")?;
        }
        if first {
            write!(f, "0")?;
        }
        if let Some(n) = self.trunc {
            write!(f, " + O(z^{})", -n - 1)?;
        }
        Ok(())
    }
}

impl<R: Ring> Add for &LaurentSeries<R> {
    type Output = LaurentSeries<R>;
    fn add(self, rhs: &LaurentSeries<R>) -> LaurentSeries<R> {
        self.add_ref(rhs)
    }
}

impl<R: Ring> Sub for &LaurentSeries<R> {
    type Output = LaurentSeries<R>;
    fn sub(self, rhs: &LaurentSeries<R>) -> LaurentSeries<R> {
        self.sub_ref(rhs)
    }
}

impl<R: Ring> Mul for &LaurentSeries<R> {
    type Output = LaurentSeries<R>;
    fn mul(self, rhs: &LaurentSeries<R>) -> LaurentSeries<R> {
        self.mul_ref(rhs)
    }
}

impl<R: Ring> Neg for &LaurentSeries<R> {
    type Output = LaurentSeries<R>;
    fn neg(self) -> LaurentSeries<R> {
        self.neg_ref()
    }
}
