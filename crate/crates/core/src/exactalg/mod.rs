//! Exact arithmetic: rationals, sparse polynomials, reduced rational functions.

mod gcd;
mod linform;
mod poly;
mod ratfun;
mod rational;
pub mod text;
mod zero;

pub use gcd::poly_gcd;
pub use linform::LinForm;
pub use poly::{Monomial, Poly};
pub use ratfun::RatFun;
pub use rational::Rational;
pub use zero::{sum_is_zero, ZeroTest};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("denominator vanishes identically after substitution")]
    PoleAtSubstitution,
    #[error("parse error: {0}")]
    Parse(String),
}

/// Display family of a variable. Arithmetic treats `x_i`, `u_i` and `v_i` as the same variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Family {
    #[default]
    X,
    U,
    V,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::X => 'x',
            Family::U => 'u',
            Family::V => 'v',
        }
    }
}
