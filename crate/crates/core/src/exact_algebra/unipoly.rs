use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::{Float, Rational};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{rational_is_zero, NotDivisible};

/// Dense univariate polynomial with exact rational coefficients.
///
/// Coefficients are stored in ascending order with trailing zeros stripped,
/// so the zero polynomial has an empty coefficient list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    var: String,
    coeffs: Vec<Rational>,
}

/// Parity of a polynomial under `z -> -z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl UniPoly {
    pub fn zero(var: &str) -> Self {
        UniPoly {
            var: var.to_owned(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(var: &str) -> Self {
        Self::constant(var, Rational::from(1))
    }

    pub fn constant(var: &str, c: Rational) -> Self {
        Self::from_coeffs(var, vec![c])
    }

    /// The monomial `var` itself.
    pub fn identity(var: &str) -> Self {
        Self::from_coeffs(var, vec![Rational::new(), Rational::from(1)])
    }

    pub fn monomial(var: &str, degree: usize, c: Rational) -> Self {
        let mut coeffs = vec![Rational::new(); degree + 1];
        coeffs[degree] = c;
        Self::from_coeffs(var, coeffs)
    }

    pub fn from_coeffs(var: &str, coeffs: Vec<Rational>) -> Self {
        let mut p = UniPoly {
            var: var.to_owned(),
            coeffs,
        };
        p.normalize();
        p
    }

    pub fn from_ints(var: &str, coeffs: &[i64]) -> Self {
        Self::from_coeffs(var, coeffs.iter().map(|&c| Rational::from(c)).collect())
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(rational_is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn variable(&self) -> &str {
        &self.var
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `var^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// `Some(parity)` when only even or only odd powers occur; the zero
    /// polynomial counts as even.
    pub fn parity(&self) -> Option<Parity> {
        let has = |rem: usize| {
            self.coeffs
                .iter()
                .enumerate()
                .any(|(i, c)| i % 2 == rem && !rational_is_zero(c))
        };
        match (has(0), has(1)) {
            (_, false) => Some(Parity::Even),
            (false, true) => Some(Parity::Odd),
            (true, true) => None,
        }
    }

    pub fn scalar_mul(&self, c: &Rational) -> Self {
        Self::from_coeffs(
            &self.var,
            self.coeffs.iter().map(|a| Rational::from(a * c)).collect(),
        )
    }

    /// Drops every power above `max_degree`.
    pub fn truncate(&self, max_degree: usize) -> Self {
        let keep = self.coeffs.len().min(max_degree + 1);
        Self::from_coeffs(&self.var, self.coeffs[..keep].to_vec())
    }

    /// Product truncated to powers `<= max_degree`.
    pub fn mul_truncated(&self, other: &Self, max_degree: usize) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.var);
        }
        let len = (self.coeffs.len() + other.coeffs.len() - 1).min(max_degree + 1);
        let mut out = vec![Rational::new(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if rational_is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                out[i + j] += Rational::from(a * b);
            }
        }
        Self::from_coeffs(&self.var, out)
    }

    /// Exact Horner evaluation.
    pub fn eval(&self, at: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= at;
            acc += c;
        }
        acc
    }

    /// Horner evaluation at the precision of `at`.
    pub fn eval_real(&self, at: &Float) -> Float {
        let mut acc = Float::new(at.prec());
        for c in self.coeffs.iter().rev() {
            acc *= at;
            acc += c;
        }
        acc
    }

    /// Returns `p(var + a)`.
    pub fn shift(&self, a: &Rational) -> Self {
        // Horner in the shifted variable: acc <- acc * (z + a) + c
        let mut acc: Vec<Rational> = Vec::with_capacity(self.coeffs.len());
        for c in self.coeffs.iter().rev() {
            let mut next = vec![Rational::new(); acc.len() + 1];
            for (i, t) in acc.iter().enumerate() {
                next[i + 1] += t;
                next[i] += Rational::from(t * a);
            }
            next[0] += c;
            acc = next;
        }
        Self::from_coeffs(&self.var, acc)
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            &self.var,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| Rational::from(c * i as u64))
                .collect(),
        )
    }

    /// Euclidean division by a nonzero divisor.
    ///
    /// # Panics
    /// If `den` is the zero polynomial.
    pub fn div_rem(&self, den: &Self) -> (Self, Self) {
        let dd = den.degree().expect("division by the zero polynomial");
        let lead = den.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let qlen = rem.len().saturating_sub(dd);
        let mut quot = vec![Rational::new(); qlen];
        for k in (0..qlen).rev() {
            let c = Rational::from(&rem[k + dd] / &lead);
            if rational_is_zero(&c) {
                continue;
            }
            for (j, d) in den.coeffs.iter().enumerate() {
                rem[k + j] -= Rational::from(&c * d);
            }
            quot[k] = c;
        }
        (
            Self::from_coeffs(&self.var, quot),
            Self::from_coeffs(&self.var, rem),
        )
    }

    /// Exact division, verified by back-multiplication.
    pub fn exact_div(&self, den: &Self) -> Result<Self, NotDivisible<Self>> {
        let (q, r) = self.div_rem(den);
        if !r.is_zero() {
            return Err(NotDivisible { remainder: r });
        }
        let back = &q * den;
        if &back != self {
            return Err(NotDivisible {
                remainder: self - &back,
            });
        }
        Ok(q)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if rational_is_zero(c) {
                continue;
            }
            let neg = c.cmp0() == std::cmp::Ordering::Less;
            let mag = Rational::from(c.abs_ref());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = mag == 1;
            match i {
                0 => write!(f, "{mag}")?,
                _ if unit => write!(f, "{}", self.var)?,
                _ => write!(f, "{mag}*{}", self.var)?,
            }
            if i > 1 {
                write!(f, "^{i}")?;
            }
        }
        Ok(())
    }
}

fn zip_coeffs(a: &UniPoly, b: &UniPoly, sign: i32) -> UniPoly {
    debug_assert_eq!(a.var, b.var, "operands over different variables");
    let n = a.coeffs.len().max(b.coeffs.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.coeffs.get(i).cloned().unwrap_or_default();
        let y = b.coeffs.get(i).cloned().unwrap_or_default();
        out.push(if sign > 0 { x + y } else { x - y });
    }
    UniPoly::from_coeffs(&a.var, out)
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        zip_coeffs(self, rhs, 1)
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        zip_coeffs(self, rhs, -1)
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        debug_assert_eq!(self.var, rhs.var, "operands over different variables");
        let max = self.coeffs.len() + rhs.coeffs.len();
        self.mul_truncated(rhs, max)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::from_coeffs(&self.var, self.coeffs.iter().map(|c| Rational::from(-c)).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for UniPoly {
            type Output = UniPoly;
            fn $m(self, rhs: UniPoly) -> UniPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&UniPoly> for UniPoly {
            type Output = UniPoly;
            fn $m(self, rhs: &UniPoly) -> UniPoly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        -&self
    }
}

#[derive(Serialize, Deserialize)]
struct UniPolyJson {
    vars: Vec<String>,
    coeffs: Vec<String>,
}

impl Serialize for UniPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        UniPolyJson {
            vars: vec![self.var.clone()],
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for UniPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = UniPolyJson::deserialize(d)?;
        let [var] = raw.vars.as_slice() else {
            return Err(D::Error::custom("univariate polynomial needs exactly one variable"));
        };
        let coeffs = raw
            .coeffs
            .iter()
            .map(|c| super::parse_rational(c).ok_or_else(|| D::Error::custom(format!("bad coefficient {c:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(UniPoly::from_coeffs(var, coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z(c: &[i64]) -> UniPoly {
        UniPoly::from_ints("z", c)
    }

    #[test]
    fn hand_expansion() {
        let a = z(&[-1, 1]);
        let b = z(&[-2, 1]);
        assert_eq!(&a * &b, z(&[2, -3, 1]));
        let p = z(&[3, 0, 5]);
        assert_eq!(&p * &UniPoly::one("z"), p);
    }

    #[test]
    fn shift_examples() {
        assert_eq!(z(&[0, 0, 1]).shift(&Rational::from(1)), z(&[1, 2, 1]));
        assert_eq!(z(&[0, -2]).shift(&Rational::from(-1)), z(&[2, -2]));
    }

    #[test]
    fn eval_examples() {
        assert_eq!(z(&[0, -2]).eval(&Rational::from(1)), -2);
        assert_eq!(UniPoly::zero("z").eval(&Rational::from((7, 3))), 0);
        let gamma1 = &z(&[-1, 1]) * &z(&[-2, 1]);
        assert_eq!(gamma1.scalar_mul(&Rational::from(2)).eval(&Rational::from(2)), 0);
    }

    #[test]
    fn exact_division_and_failure() {
        let num = z(&[2, -3, 1]);
        assert_eq!(num.exact_div(&z(&[-1, 1])).unwrap(), z(&[-2, 1]));
        let err = z(&[1, 0, 1]).exact_div(&z(&[0, 1])).unwrap_err();
        assert_eq!(err.remainder, z(&[1]));
    }

    #[test]
    fn zero_polynomial_has_no_degree() {
        let zero = &z(&[1, 2]) - &z(&[1, 2]);
        assert!(zero.is_zero());
        assert_eq!(zero.degree(), None);
        assert_eq!(zero.coeffs().len(), 0);
    }

    #[test]
    fn display_and_parity() {
        assert_eq!(z(&[4, 0, 8]).to_string(), "8*z^2 + 4");
        assert_eq!(z(&[0, -9, 0, -5]).to_string(), "-5*z^3 - 9*z");
        assert_eq!(z(&[0, -9, 0, -5]).parity(), Some(Parity::Odd));
        assert_eq!(z(&[1, 1]).parity(), None);
    }

    #[test]
    fn json_form() {
        let p = z(&[0, -2]);
        let js = serde_json::to_string(&p).unwrap();
        assert_eq!(js, r#"{"vars":["z"],"coeffs":["0","-2"]}"#);
        let back: UniPoly = serde_json::from_str(r#"{"vars":["z"],"coeffs":["1/2","0","0"]}"#).unwrap();
        assert_eq!(back, UniPoly::constant("z", Rational::from((1, 2))));
    }

    fn arb_poly() -> impl Strategy<Value = UniPoly> {
        prop::collection::vec((-20i64..20, 1i64..6), 0..6).prop_map(|cs| {
            UniPoly::from_coeffs("z", cs.into_iter().map(|(n, d)| Rational::from((n, d))).collect())
        })
    }

    proptest! {
        #[test]
        fn eval_is_multiplicative(p in arb_poly(), q in arb_poly(), n in -9i64..9, d in 1i64..5) {
            let at = Rational::from((n, d));
            prop_assert_eq!((&p * &q).eval(&at), p.eval(&at) * q.eval(&at));
        }

        #[test]
        fn division_round_trip(p in arb_poly(), q in arb_poly()) {
            prop_assume!(!q.is_zero());
            prop_assert_eq!((&p * &q).exact_div(&q).unwrap(), p);
        }

        #[test]
        fn shift_inverse(p in arb_poly(), n in -5i64..5, d in 1i64..4) {
            let a = Rational::from((n, d));
            prop_assert_eq!(p.shift(&a).shift(&Rational::from(-&a)), p.clone());
            let renorm = UniPoly::from_coeffs("z", p.coeffs().to_vec());
            prop_assert_eq!(renorm, p);
        }
    }
}
