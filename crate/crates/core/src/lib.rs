//! Exact computation of GL2/GL3 loop-group tau functions, Birkhoff factors and
//! connection matrices, with a fermionic Fock-space oracle for cross-checks.

pub mod algebra;
pub mod error;
pub mod fock;
pub mod loopgroup;
pub mod shifts;
pub mod symbolic;
pub mod tau_gl2;
pub mod tau_gl3;
pub mod verify;

pub use error::{AlgebraError, Error, Result};

/// Exact rational scalar used throughout the domain modules.
pub type Rational = num_rational::BigRational;
/// Polynomials in c_i, d_i, e_i over the rationals.
pub type Poly = algebra::Poly<Rational>;
pub type RatFunc = algebra::RatFunc<Rational>;
pub type Series<R = Poly> = algebra::LaurentSeries<R>;
pub type Matrix<R = Poly> = algebra::LoopMatrix<R>;

pub use algebra::{Family, Monomial, Ring, Scalar, VarId, Window};

/// Rational from an integer.
pub fn q(v: i64) -> Rational {
    <Rational as Scalar>::from_i64(v)
}

/// Rational num/den.
pub fn qq(num: i64, den: i64) -> Rational {
    <Rational as Scalar>::from_ratio(num, den)
}
