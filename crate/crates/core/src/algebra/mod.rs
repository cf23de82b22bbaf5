//! Exact arithmetic substrate: integers, univariate polynomials over ℚ and
//! over prime fields, and rational matrices.

pub mod arith;
pub mod matrix;
pub mod modpoly;
pub mod poly;
pub mod zassenhaus;

pub use arith::{factorize, is_prime, legendre_symbol, squarefree_part, ArithError, Factorization};
pub use matrix::{ExactMatrix, MatrixError};
pub use modpoly::{cycle_type_mod_p, factor_mod_p, ModPoly, ModPolyError};
pub use poly::{PolyError, RationalPoly};
pub use zassenhaus::{find_rational_factor, is_irreducible_over_rationals};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;
