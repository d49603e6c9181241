//! Exact computer algebra for iterated-integral signatures.
//!
//! Everything is computed over arbitrary-precision rationals: words and
//! sparse free tensors with the shuffle/halfshuffle Hopf structure
//! ([`freealg`]), truncated series with `exp`/`log` and grouplike/Lie
//! tests ([`series`]), piecewise-polynomial paths with exact signatures
//! ([`paths`]), graded bases of shuffle and halfshuffle ideals
//! ([`ideals`]), and membership/rank/realization machinery for path
//! varieties ([`varieties`]).

pub mod error;
pub mod freealg;
pub mod ideals;
pub mod jsonio;
pub mod lyndon;
pub mod matrix;
pub mod paths;
pub mod poly;
pub mod sample;
pub mod series;
pub mod varieties;

pub use error::{Error, Result};

/// Exact rational coefficient type used throughout.
pub type Coeff = num::BigRational;

/// Integer coefficient shorthand.
pub fn qi(n: i64) -> Coeff {
    Coeff::from_integer(n.into())
}

/// Fraction shorthand; `d` must be nonzero.
pub fn qr(n: i64, d: i64) -> Coeff {
    Coeff::new(n.into(), d.into())
}

/// Factorial as an exact rational, for series coefficients.
pub fn factorial(n: usize) -> Coeff {
    let mut acc = num::BigInt::from(1);
    for k in 2..=n {
        acc *= num::BigInt::from(k);
    }
    Coeff::from_integer(acc)
}
