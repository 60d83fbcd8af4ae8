use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::poly::Poly;
use super::ring::Ring;
use super::scalar::Scalar;
use crate::error::AlgebraError;

/// Quotient num/den of polynomials; equality by cross-multiplication.
#[derive(Clone)]
pub struct RatFunc<S: Scalar> {
    num: Poly<S>,
    den: Poly<S>,
}

impl<S: Scalar> RatFunc<S> {
    pub fn new(num: Poly<S>, den: Poly<S>) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(RatFunc { num, den }.normalized())
    }

    pub fn from_poly(p: Poly<S>) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn num(&self) -> &Poly<S> {
        &self.num
    }

    pub fn den(&self) -> &Poly<S> {
        &self.den
    }

    // Constant denominators are folded into the numerator; equal parts cancel.
    fn normalized(self) -> Self {
        if self.num.is_zero() {
            return RatFunc { num: Poly::zero(), den: Poly::one() };
        }
        if self.num == self.den {
            return RatFunc::one();
        }
        match self.den.as_constant() {
            Some(c) if !c.is_one() => RatFunc { num: self.num.div_scalar(&c), den: Poly::one() },
            _ => self,
        }
    }

    /// Value as a polynomial when the denominator divides the numerator.
    pub fn as_poly(&self) -> Option<Poly<S>> {
        self.num.div_exact(&self.den)
    }

    pub fn div_ref(&self, other: &Self) -> Result<Self, AlgebraError> {
        let inv = other.try_inv().ok_or(AlgebraError::DivisionByZero)?;
        Ok(self.mul_ref(&inv))
    }
}

impl<S: Scalar> PartialEq for RatFunc<S> {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        &self.num * &other.den == &other.num * &self.den
    }
}

impl<S: Scalar> fmt::Debug for RatFunc<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl<S: Scalar> fmt::Display for RatFunc<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl<S: Scalar> Zero for RatFunc<S> {
    fn zero() -> Self {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl<S: Scalar> One for RatFunc<S> {
    fn one() -> Self {
        RatFunc { num: Poly::one(), den: Poly::one() }
    }
}

impl<S: Scalar> Add for RatFunc<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.add_ref(&rhs)
    }
}

impl<S: Scalar> Sub for RatFunc<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.sub_ref(&rhs)
    }
}

impl<S: Scalar> Mul for RatFunc<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.mul_ref(&rhs)
    }
}

impl<S: Scalar> Neg for RatFunc<S> {
    type Output = Self;
    fn neg(self) -> Self {
        RatFunc { num: -self.num, den: self.den }
    }
}

impl<S: Scalar> Ring for RatFunc<S> {
    fn from_i64(v: i64) -> Self {
        RatFunc::from_poly(Poly::from_i64(v))
    }

    fn try_inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            Some(RatFunc { num: self.den.clone(), den: self.num.clone() }.normalized())
        }
    }

    fn mul_ref(&self, other: &Self) -> Self {
        if self.num.is_zero() || other.num.is_zero() {
            return RatFunc::zero();
        }
        // cancel structurally equal cross factors before expanding
        let (n1, d2) = if self.num == other.den { (Poly::one(), Poly::one()) } else { (self.num.clone(), other.den.clone()) };
        let (n2, d1) = if other.num == self.den { (Poly::one(), Poly::one()) } else { (other.num.clone(), self.den.clone()) };
        RatFunc { num: &n1 * &n2, den: &d1 * &d2 }.normalized()
    }

    fn add_ref(&self, other: &Self) -> Self {
        if self.den == other.den {
            return RatFunc { num: &self.num + &other.num, den: self.den.clone() }.normalized();
        }
        let num = &(&self.num * &other.den) + &(&other.num * &self.den);
        RatFunc { num, den: &self.den * &other.den }.normalized()
    }

    fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&-other.clone())
    }
}
