//! Arbitrary-precision real helpers, the Gamma function, modified Bessel
//! functions of fractional order and Taylor jets.

mod bessel;
mod jet;

pub use bessel::{bessel_i, bessel_ik, bessel_jet, bessel_k, BesselKind, BesselTable};
pub use jet::Jet;

use rug::float::Constant;
use rug::{Assign, Float, Rational};

use crate::error::{QmsError, Result};

/// Arbitrary-precision real; the precision in bits travels with the value.
pub type BigReal = Float;

/// Bits needed for `digits` significant decimal digits plus a 16-bit guard.
pub fn bits_for_digits(digits: u32) -> u32 {
    (f64::from(digits) * std::f64::consts::LOG2_10).ceil() as u32 + 16
}

/// Decimal digits meaningfully represented at `prec` bits.
pub fn digits_for_bits(prec: u32) -> usize {
    ((f64::from(prec) * std::f64::consts::LOG10_2).floor() as usize).max(1)
}

/// Decimal rendering with as many digits as the precision supports.
pub fn to_decimal(x: &Float) -> String {
    to_decimal_digits(x, digits_for_bits(x.prec()))
}

pub fn to_decimal_digits(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".into();
    }
    x.to_string_radix(10, Some(digits))
}

/// Parses a decimal string or an exact fraction `p/q` at `prec` bits.
pub fn parse_real(s: &str, prec: u32) -> Result<Float> {
    let s = s.trim();
    if let Some(r) = crate::exact_algebra::parse_rational(s) {
        return Ok(Float::with_val(prec, &r));
    }
    Float::parse(s)
        .map(|p| Float::with_val(prec, p))
        .map_err(|e| QmsError::InvalidInput(format!("cannot parse {s:?} as a real: {e}")))
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// `2^-(prec - guard)`, the tolerance scale used throughout.
pub fn ulp_scale(prec: u32, guard: u32) -> Float {
    let mut t = Float::with_val(64, 1);
    t >>= prec.saturating_sub(guard);
    t
}

pub fn from_rational(r: &Rational, prec: u32) -> Float {
    Float::with_val(prec, r)
}

/// Gamma function via MPFR.
pub fn gamma_fn(x: &Float, prec: u32) -> Result<Float> {
    if x.is_integer() && *x <= 0 {
        return Err(QmsError::PoleError { at: to_decimal(x) });
    }
    let mut out = Float::new(prec);
    out.assign(x.gamma_ref());
    Ok(out)
}

/// `Γ(r)` for an exact rational argument.
pub fn gamma_rational(r: &Rational, prec: u32) -> Result<Float> {
    gamma_fn(&Float::with_val(prec + 16, r), prec)
}

/// Largest absolute value, zero for an empty iterator.
pub fn max_abs<'a, I: IntoIterator<Item = &'a Float>>(prec: u32, it: I) -> Float {
    let mut m = Float::new(prec);
    for x in it {
        let a = Float::with_val(prec, x.abs_ref());
        if a > m {
            m = a;
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_half_is_sqrt_pi() {
        let g = gamma_fn(&Float::with_val(256, 0.5), 256).unwrap();
        let want = pi(256).sqrt();
        assert!(Float::with_val(256, &g - &want).abs() < ulp_scale(256, 8));
    }

    #[test]
    fn gamma_functional_equation_and_reflection() {
        let prec = 200;
        for x in ["0.3", "2.75", "17/3", "-2.5"] {
            let x = parse_real(x, prec).unwrap();
            let g1 = gamma_fn(&Float::with_val(prec, &x + 1u32), prec).unwrap();
            let g0 = gamma_fn(&x, prec).unwrap();
            let rel = (Float::with_val(prec, &g1 / &g0) - &x).abs() / Float::with_val(prec, x.abs_ref());
            assert!(rel < ulp_scale(prec, 10));
        }
        let a = gamma_rational(&Rational::from((1, 6)), prec).unwrap();
        let b = gamma_rational(&Rational::from((5, 6)), prec).unwrap();
        let two_pi = pi(prec) * 2u32;
        assert!(Float::with_val(prec, a * b - &two_pi).abs() < ulp_scale(prec, 10));
    }

    #[test]
    fn gamma_rejects_poles() {
        assert!(matches!(gamma_fn(&Float::with_val(64, -3), 64), Err(QmsError::PoleError { .. })));
        assert!(gamma_fn(&Float::with_val(64, 0), 64).is_err());
    }

    #[test]
    fn digit_conversions() {
        assert_eq!(bits_for_digits(60), 216);
        assert_eq!(digits_for_bits(256), 77);
        let x = parse_real("1/3", 64).unwrap();
        assert!(to_decimal(&x).starts_with("3.33333"));
        assert_eq!(to_decimal(&Float::new(64)), "0");
        assert!(parse_real("abc", 64).is_err());
    }
}
