//! Exact and modular linear algebra.

pub mod certified;
pub mod matrix;
pub mod modp;
pub mod poly;

use num_bigint::BigInt;
use num_rational::BigRational;

/// Field used for all exact computations.
pub type Scalar = BigRational;

pub fn int(v: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

pub use matrix::{int_rank, nullspace, rank, solve, PolyMatrix};
pub use poly::{Monomial, Poly};
