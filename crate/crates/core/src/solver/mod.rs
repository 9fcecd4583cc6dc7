//! Forward iteration and positivity shooting for the parabolic recursion
//! `v_{n+1} = (n+1)ε/v_n - v_{n-1} - 1` and the cubic recursion
//! `v_n(v_{n+1}v_{n+2} + v_{n-1}v_{n-2} + v_{n+1}v_{n-1} + 1) = (n+1)ε`,
//! both with `v_{-1} = 0`.

mod cubic;
mod parabolic;

pub use cubic::{iterate_cubic, shoot_cubic, CubicOptions};
pub use parabolic::{default_precision, iterate_parabolic, shoot_parabolic, shoot_parabolic_traced};

use rug::float::Round;
use rug::Float;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{QmsError, Result};
pub use crate::series::Flavor;
use crate::special::to_decimal;

/// Precision of the running error bounds.
const ERR_PREC: u32 = 64;

/// Outcome of a forward iteration.
#[derive(Clone, Debug)]
pub struct Iteration {
    pub values: Vec<Float>,
    /// First-order bound on the accumulated rounding error of each value.
    pub errors: Vec<Float>,
    /// First index whose value is not positive, or `N + 1` if none.
    pub survival: usize,
}

/// Sign of `v` given an error bound; an exact zero with zero error counts as
/// non-positive.
pub(crate) fn certified_positive(v: &Float, err: &Float, index: usize, prec: u32) -> Result<bool> {
    if err.is_zero() {
        return Ok(*v > 0);
    }
    if Float::with_val(ERR_PREC, v.abs_ref()) <= *err {
        return Err(QmsError::PrecisionExhausted { index, prec });
    }
    Ok(*v > 0)
}

/// Adds the half-ulp rounding error of `x` to `acc` when `inexact`.
pub(crate) fn add_rounding(acc: &mut Float, x: &Float, inexact: std::cmp::Ordering, prec: u32) {
    if inexact != std::cmp::Ordering::Equal {
        let mut r = Float::with_val_round(ERR_PREC, x.abs_ref(), Round::Up).0;
        r >>= prec;
        *acc += r;
    }
}

/// Maximum of one identity's residual over all available indices.
#[derive(Clone, Debug)]
pub struct IdentityResidual {
    pub identity: &'static str,
    pub max: Float,
    pub at: usize,
}

#[derive(Clone, Debug)]
pub struct ResidualReport {
    pub entries: Vec<IdentityResidual>,
}

impl ResidualReport {
    /// The largest residual across identities.
    pub fn worst(&self) -> &IdentityResidual {
        self.entries
            .iter()
            .max_by(|a, b| a.max.partial_cmp(&b.max).unwrap())
            .expect("at least one identity")
    }

    pub fn get(&self, identity: &str) -> Option<&IdentityResidual> {
        self.entries.iter().find(|e| e.identity == identity)
    }
}

/// A solved positive sequence.
#[derive(Clone, Debug)]
pub struct VSequence {
    pub flavor: Flavor,
    pub eps: Float,
    pub v: Vec<Float>,
    pub errors: Vec<Float>,
    pub prec: u32,
    /// Final bracket for `v0` and, for the cubic recursion, for `v1`.
    pub brackets: Vec<(Float, Float)>,
    pub residual: ResidualReport,
}

impl VSequence {
    pub fn depth(&self) -> usize {
        self.v.len() - 1
    }
}

impl Serialize for VSequence {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let worst = self.residual.worst();
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("flavor", &self.flavor)?;
        m.serialize_entry("eps", &to_decimal(&self.eps))?;
        m.serialize_entry("n", &self.depth())?;
        m.serialize_entry("v", &self.v.iter().map(to_decimal).collect::<Vec<_>>())?;
        m.serialize_entry("prec", &self.prec)?;
        m.serialize_entry("residual_max", &to_decimal(&worst.max))?;
        m.serialize_entry("residual_identity", worst.identity)?;
        m.serialize_entry("residual_at", &worst.at)?;
        let pair = |b: &(Float, Float)| vec![to_decimal(&b.0), to_decimal(&b.1)];
        m.serialize_entry("bracket", &pair(&self.brackets[0]))?;
        if let Some(b) = self.brackets.get(1) {
            m.serialize_entry("bracket_v1", &pair(b))?;
        }
        m.serialize_entry("error_bounds", &self.errors.iter().map(to_decimal).collect::<Vec<_>>())?;
        m.end()
    }
}

fn at_or_zero(v: &[Float], i: isize, prec: u32) -> Float {
    if i < 0 {
        Float::new(prec)
    } else {
        v[i as usize].clone()
    }
}

fn track(max: &mut Float, at: &mut usize, r: Float, i: usize) {
    let r = r.abs();
    if r > *max {
        *max = r;
        *at = i;
    }
}

/// Evaluates every defining identity that applies to `flavor` over all
/// indices available in `v`.
pub fn residual_report(flavor: Flavor, eps: &Float, v: &[Float]) -> ResidualReport {
    let prec = v[0].prec().max(eps.prec());
    let n = v.len() - 1;
    let g = |i: isize| at_or_zero(v, i, prec);
    let mut entries = Vec::new();
    match flavor {
        Flavor::Parabolic => {
            let (mut max, mut at) = (Float::new(prec), 0);
            for m in 0..n {
                let mi = m as isize;
                let pred = Float::with_val(prec, eps * (m as u32 + 1)) / &v[m] - g(mi - 1) - 1u32;
                track(&mut max, &mut at, Float::with_val(prec, &v[m + 1] - pred), m);
            }
            entries.push(IdentityResidual {
                identity: "linear-step",
                max,
                at,
            });
        }
        Flavor::Cubic => {
            let (mut pmax, mut pat) = (Float::new(prec), 0);
            let (mut dmax, mut dat) = (Float::new(prec), 0);
            for m in 0..n.saturating_sub(1) {
                let mi = m as isize;
                let (a, b, c, d, e) = (g(mi + 1), g(mi + 2), g(mi - 1), g(mi - 2), g(mi - 3));
                let bracket = Float::with_val(prec, &a * &b)
                    + Float::with_val(prec, &c * &d)
                    + Float::with_val(prec, &a * &c)
                    + 1u32;
                let r = Float::with_val(prec, &v[m] * bracket) - Float::with_val(prec, eps * (m as u32 + 1));
                track(&mut pmax, &mut pat, r, m);
                let diff = Float::with_val(prec, &v[m] - &c)
                    + Float::with_val(prec, &v[m] * &a) * &b
                    - Float::with_val(prec, &c * &d) * &e
                    - eps;
                track(&mut dmax, &mut dat, diff, m);
            }
            entries.push(IdentityResidual {
                identity: "cubic-product-form",
                max: pmax,
                at: pat,
            });
            entries.push(IdentityResidual {
                identity: "cubic-difference-form",
                max: dmax,
                at: dat,
            });
            if n >= 3 {
                let spot = cubic_spot_checks(eps, v);
                for (name, r) in spot {
                    entries.push(IdentityResidual {
                        identity: name,
                        max: r.abs(),
                        at: 0,
                    });
                }
            }
        }
    }
    ResidualReport { entries }
}

/// The three low-index relations `v0(1+v1v2) = ε`, `v1(1+v2v3) - v0 = ε`
/// and `v1(1+v2v3+v2v0) = 2ε`, as signed residuals.
pub fn cubic_spot_checks(eps: &Float, v: &[Float]) -> Vec<(&'static str, Float)> {
    let prec = v[0].prec();
    let v12 = Float::with_val(prec, &v[1] * &v[2]);
    let v23 = Float::with_val(prec, &v[2] * &v[3]);
    let v20 = Float::with_val(prec, &v[2] * &v[0]);
    let first = Float::with_val(prec, &v[0] * Float::with_val(prec, &v12 + 1u32)) - eps;
    let second = Float::with_val(prec, &v[1] * Float::with_val(prec, &v23 + 1u32)) - &v[0] - eps;
    let third = Float::with_val(prec, &v[1] * (Float::with_val(prec, &v23 + &v20) + 1u32))
        - Float::with_val(prec, eps * 2u32);
    vec![
        ("cubic-spot-v0", first),
        ("cubic-spot-v1-difference", second),
        ("cubic-spot-v1-product", third),
    ]
}
