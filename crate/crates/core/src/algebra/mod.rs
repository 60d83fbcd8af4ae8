pub mod det;
pub mod matrix;
pub mod poly;
pub mod ratfunc;
pub mod ring;
pub mod scalar;
pub mod series;
pub mod var;

pub use det::{det_bareiss, det_fraction_free, det_laplace, det_leibniz};
pub use matrix::{LoopMatrix, NegativeWitness};
pub use poly::{Monomial, Poly};
pub use ratfunc::RatFunc;
pub use ring::Ring;
pub use scalar::Scalar;
pub use series::LaurentSeries;
pub use var::{Family, VarId, Window};
