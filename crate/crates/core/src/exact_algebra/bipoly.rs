use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::ops::Pow;
use rug::{Float, Rational};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{rational_is_zero, NotDivisible};

/// Sparse polynomial in `x` and `eps` with rational coefficients.
///
/// Monomials are keyed by `(deg_x, deg_eps)`; the map order is lexicographic
/// with `x` major, so the last entry is the leading term used by division.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl BiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::from(1))
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn x() -> Self {
        Self::monomial(1, 0, Rational::from(1))
    }

    pub fn eps() -> Self {
        Self::monomial(0, 1, Rational::from(1))
    }

    pub fn monomial(dx: u32, de: u32, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(dx, de, c);
        p
    }

    /// Builds from `(deg_x, deg_eps, coefficient)` triples; repeated
    /// monomials are summed.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32, Rational)>,
    {
        let mut p = Self::zero();
        for (dx, de, c) in terms {
            p.add_term(dx, de, c);
        }
        p
    }

    pub fn from_int_terms(terms: &[(u32, u32, i64)]) -> Self {
        Self::from_terms(terms.iter().map(|&(a, b, c)| (a, b, Rational::from(c))))
    }

    fn add_term(&mut self, dx: u32, de: u32, c: Rational) {
        if rational_is_zero(&c) {
            return;
        }
        let slot = self.terms.entry((dx, de)).or_default();
        *slot += c;
        if rational_is_zero(slot) {
            self.terms.remove(&(dx, de));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &Rational)> {
        self.terms.iter().map(|(&(a, b), c)| (a, b, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, dx: u32, de: u32) -> Rational {
        self.terms.get(&(dx, de)).cloned().unwrap_or_default()
    }

    pub fn degree_x(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.0).max()
    }

    pub fn degree_eps(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.1).max()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.0 + k.1).max()
    }

    fn leading(&self) -> Option<((u32, u32), &Rational)> {
        self.terms.iter().next_back().map(|(k, c)| (*k, c))
    }

    pub fn scalar_mul(&self, c: &Rational) -> Self {
        if rational_is_zero(c) {
            return Self::zero();
        }
        BiPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, a)| (*k, Rational::from(a * c)))
                .collect(),
        }
    }

    /// Multiplies by the monomial `c x^dx eps^de`.
    pub fn mul_monomial(&self, dx: u32, de: u32, c: &Rational) -> Self {
        if rational_is_zero(c) {
            return Self::zero();
        }
        BiPoly {
            terms: self
                .terms
                .iter()
                .map(|(&(a, b), v)| ((a + dx, b + de), Rational::from(v * c)))
                .collect(),
        }
    }

    /// Coefficient of `x^k` as a polynomial in `eps` (ascending).
    pub fn x_slice(&self, k: u32) -> Vec<Rational> {
        let mut out = Vec::new();
        for (&(a, b), c) in &self.terms {
            if a == k {
                let b = b as usize;
                if out.len() <= b {
                    out.resize(b + 1, Rational::new());
                }
                out[b] = c.clone();
            }
        }
        out
    }

    pub fn eval(&self, x: &Rational, eps: &Rational) -> Rational {
        let mut acc = Rational::new();
        for (&(a, b), c) in &self.terms {
            let mut t = c.clone();
            t *= Rational::from(x.pow(a));
            t *= Rational::from(eps.pow(b));
            acc += t;
        }
        acc
    }

    /// Evaluates at the precision of `x`.
    pub fn eval_real(&self, x: &Float, eps: &Float) -> Float {
        let prec = x.prec().max(eps.prec());
        let mut acc = Float::new(prec);
        for (&(a, b), c) in &self.terms {
            let mut t = Float::with_val(prec, c);
            t *= Float::with_val(prec, x.pow(a));
            t *= Float::with_val(prec, eps.pow(b));
            acc += t;
        }
        acc
    }

    /// Exact division by leading-term elimination, verified by
    /// back-multiplication.
    pub fn exact_div(&self, den: &Self) -> Result<Self, NotDivisible<Self>> {
        let ((ldx, lde), lc) = den.leading().expect("division by the zero polynomial");
        let lc = lc.clone();
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some(((rdx, rde), rc)) = rem.leading() {
            if rdx < ldx || rde < lde {
                return Err(NotDivisible { remainder: rem });
            }
            let c = Rational::from(rc / &lc);
            let (qx, qe) = (rdx - ldx, rde - lde);
            for (&(a, b), d) in &den.terms {
                rem.add_term(a + qx, b + qe, -Rational::from(&c * d));
            }
            quot.add_term(qx, qe, c);
        }
        if &(&quot * den) != self {
            return Err(NotDivisible {
                remainder: self - &(&quot * den),
            });
        }
        Ok(quot)
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(a, b), c) in self.terms.iter().rev() {
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
            let mut parts = Vec::new();
            if mag != 1 || (a == 0 && b == 0) {
                parts.push(mag.to_string());
            }
            match a {
                0 => {}
                1 => parts.push("x".into()),
                _ => parts.push(format!("x^{a}")),
            }
            match b {
                0 => {}
                1 => parts.push("eps".into()),
                _ => parts.push(format!("eps^{b}")),
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

fn combine(a: &BiPoly, b: &BiPoly, negate: bool) -> BiPoly {
    let mut out = a.clone();
    for (&(dx, de), c) in &b.terms {
        let c = if negate { Rational::from(-c) } else { c.clone() };
        out.add_term(dx, de, c);
    }
    out
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        combine(self, rhs, false)
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        combine(self, rhs, true)
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &rhs.terms {
                out.add_term(a1 + a2, b1 + b2, Rational::from(c1 * c2));
            }
        }
        out
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        self.scalar_mul(&Rational::from(-1))
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for BiPoly {
            type Output = BiPoly;
            fn $m(self, rhs: BiPoly) -> BiPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&BiPoly> for BiPoly {
            type Output = BiPoly;
            fn $m(self, rhs: &BiPoly) -> BiPoly {
                (&self).$m(rhs)
            }
        }
        impl $tr<BiPoly> for &BiPoly {
            type Output = BiPoly;
            fn $m(self, rhs: BiPoly) -> BiPoly {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        -&self
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    x: u32,
    eps: u32,
    c: String,
}

impl Serialize for BiPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let list: Vec<TermJson> = self
            .terms
            .iter()
            .map(|(&(x, eps), c)| TermJson {
                x,
                eps,
                c: c.to_string(),
            })
            .collect();
        list.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BiPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let list = Vec::<TermJson>::deserialize(d)?;
        let mut terms = Vec::with_capacity(list.len());
        for t in list {
            let c = super::parse_rational(&t.c)
                .ok_or_else(|| D::Error::custom(format!("bad coefficient {:?}", t.c)))?;
            terms.push((t.x, t.eps, c));
        }
        Ok(BiPoly::from_terms(terms))
    }
}
