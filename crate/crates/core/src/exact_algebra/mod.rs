//! Exact rational arithmetic and dense polynomial rings.
//!
//! Coefficients are GMP rationals (`rug::Rational`), always held in lowest
//! terms with a positive denominator. Two polynomial types are provided:
//!
//! * [`UniPoly`]: dense, ascending coefficients in a single tagged variable.
//! * [`BiPoly`]: sparse by monomial `x^a eps^b`, ordered lexicographically
//!   with `x` as the major variable.
//!
//! Both support an exact division that verifies itself by back-multiplication
//! and reports the leftover remainder when the divisor does not divide.

mod bipoly;
mod unipoly;

pub use bipoly::BiPoly;
pub use unipoly::{Parity, UniPoly};

pub use rug::Rational as BigRational;

use std::fmt;

/// Returned by the exact divisions when the divisor does not divide.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotDivisible<P> {
    pub remainder: P,
}

impl<P: fmt::Display> fmt::Display for NotDivisible<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "division is not exact, remainder {}", self.remainder)
    }
}

impl<P: fmt::Debug + fmt::Display> std::error::Error for NotDivisible<P> {}

/// Parses `"num/den"` or an integer string into a rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    s.trim().parse::<BigRational>().ok()
}

pub(crate) fn rational_is_zero(r: &BigRational) -> bool {
    r.cmp0() == std::cmp::Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fraction_and_integer() {
        assert_eq!(parse_rational("-3/6").unwrap(), BigRational::from((-1, 2)));
        assert_eq!(parse_rational("7").unwrap(), BigRational::from(7));
        assert!(parse_rational("x").is_none());
    }
}
