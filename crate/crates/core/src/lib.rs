//! Exact mould calculus over decorated words.
//!
//! Rational-function moulds truncated at a fixed depth, the shuffle and
//! contracting shuffle products, symmetry predicates, flexions, the `ganit`
//! substitution automorphism and the `expari` exponential, all in exact
//! arithmetic.

mod error;
pub mod ari_exp;
pub mod exactalg;
pub mod flexion_ganit;
pub mod gamma;
pub mod mould;
pub mod symmetry;
pub mod verify;
pub mod words;

pub use error::{Error, Result};
