//! Semiclassical side of the cubic surface.
//!
//! The radial coordinate `r̃ = r²/2 + 3r⁶/2` is replaced by `(n+1)ℏ`, and with
//! `x = 9r̃` its real inverse is
//!
//! ```text
//! 3r² = (x + √(1+x²))^{1/3} - (√(1+x²) - x)^{1/3} = 2 sinh(asinh(x)/3).
//! ```
//!
//! Since `ε = 2ℏ`, `x = (9/2)ε_n` and `v_n = r²` becomes a series in `ε_n`.

use rug::ops::Pow;
use rug::{Float, Rational};
use serde::{Serialize, Serializer};

use crate::error::{QmsError, Result};
use crate::exact_algebra::UniPoly;
use crate::series::cubic_p;

const GUARD: u32 = 32;

/// `r̃(r) = r²/2 + 3r⁶/2`.
pub fn rtilde(r: &Float) -> Float {
    let prec = r.prec();
    let r2 = Float::with_val(prec, r.square_ref());
    let r6 = Float::with_val(prec, r2.clone().pow(3u32));
    (r2 + r6 * 3u32) / 2u32
}

fn working_precision(x: &Float, prec: u32) -> u32 {
    // the difference of cube roots cancels about -log2(x) bits for small x
    let lost = x.get_exp().map_or(0, |e| (-e).max(0) as u32);
    prec + GUARD + lost
}

fn check_x(x: &Float) -> Result<()> {
    if !x.is_finite() || *x <= 0 {
        return Err(QmsError::InvalidInput("the radial inverse needs x > 0".into()));
    }
    Ok(())
}

/// `3r²` at `x = 9r̃` from the difference of real cube roots.
pub fn invert_radial(x: &Float) -> Result<Float> {
    check_x(x)?;
    let prec = x.prec();
    let wp = working_precision(x, prec);
    let x = Float::with_val(wp, x);
    let root = (Float::with_val(wp, x.square_ref()) + 1u32).sqrt();
    let plus = Float::with_val(wp, &root + &x).cbrt();
    // √(1+x²) - x = 1/(√(1+x²) + x) avoids the cancellation at large x
    let minus = Float::with_val(wp, plus.recip_ref());
    Ok(Float::with_val(prec, plus - minus))
}

/// `3r²` from the Cardano root `s = ∛s₊ + ∛s₋` of `s + s³ = 2√3 r̃`, where
/// `s_± = √3 r̃ (1 ± √(1 + 1/(81r̃²)))` and `3r² = √3 s`.
pub fn invert_radial_cardano(x: &Float) -> Result<Float> {
    check_x(x)?;
    let prec = x.prec();
    let wp = working_precision(x, prec);
    let rt = Float::with_val(wp, x / 9u32);
    let sqrt3 = Float::with_val(wp, 3u32).sqrt();
    let inner = (Float::with_val(wp, rt.square_ref()) * 81u32).recip() + 1u32;
    let inner = inner.sqrt();
    let base = Float::with_val(wp, &sqrt3 * &rt);
    let s_plus = Float::with_val(wp, &base * Float::with_val(wp, &inner + 1u32));
    let s_minus = Float::with_val(wp, &base * Float::with_val(wp, 1u32 - &inner));
    let s = s_plus.cbrt() + s_minus.cbrt();
    Ok(Float::with_val(prec, s * sqrt3))
}

/// `2 sinh(asinh(x)/3)`, free of cancellation.
pub fn invert_radial_hyperbolic(x: &Float) -> Result<Float> {
    check_x(x)?;
    let prec = x.prec();
    let wp = prec + GUARD;
    let a = Float::with_val(wp, x.asinh_ref()) / 3u32;
    Ok(Float::with_val(prec, a.sinh() * 2u32))
}

/// `|9 r̃(√(y/3)) - x| / x` for `y = invert_radial(x)`.
pub fn round_trip_residual(x: &Float) -> Result<Float> {
    let prec = x.prec();
    let wp = prec + GUARD;
    let y = Float::with_val(wp, invert_radial(x)?);
    let r = Float::with_val(wp, &y / 3u32).sqrt();
    let back = rtilde(&r) * 9u32;
    let x_w = Float::with_val(wp, x);
    Ok(Float::with_val(prec, (back - &x_w).abs() / x_w))
}

fn ser_rationals<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.to_string()))
}

/// Exact odd power series of `3r²` in `x` and of `v_n` in `ε_n`.
#[derive(Clone, Debug, Serialize)]
pub struct SemiSeries {
    /// Highest power of `x` kept.
    pub order: usize,
    /// `x_coeffs[k]` multiplies `x^k` in `3r²`.
    #[serde(serialize_with = "ser_rationals")]
    pub x_coeffs: Vec<Rational>,
    /// `eps_coeffs[k]` multiplies `ε_n^k` in `v_n`.
    #[serde(serialize_with = "ser_rationals")]
    pub eps_coeffs: Vec<Rational>,
}

impl SemiSeries {
    pub fn x_poly(&self) -> UniPoly {
        UniPoly::from_coeffs("x", self.x_coeffs.clone())
    }

    pub fn eps_poly(&self) -> UniPoly {
        UniPoly::from_coeffs("eps_n", self.eps_coeffs.clone())
    }

    pub fn eval_x(&self, x: &Float) -> Float {
        self.x_poly().eval_real(x)
    }
}

/// `Σ_{j≤K} C(a, j) t^j` truncated at degree `k`, for `t` without constant term.
fn binomial_series(a: &Rational, t: &UniPoly, k: usize) -> UniPoly {
    let var = t.variable().to_owned();
    let mut acc = UniPoly::one(&var);
    let mut power = UniPoly::one(&var);
    let mut c = Rational::from(1);
    for j in 0..k {
        c = c * Rational::from(a - Rational::from(j as u64)) / Rational::from(j as u64 + 1);
        power = power.mul_truncated(t, k);
        if power.is_zero() {
            break;
        }
        acc = &acc + &power.scalar_mul(&c);
    }
    acc
}

/// Series of `3r²` through `x^K` by exact composition of `√(1+x²)` and
/// `(1+t)^{1/3}`, rescaled to `v_n` with `x = (9/2)ε_n`.
pub fn semiclassical_series(order: usize) -> SemiSeries {
    let x = UniPoly::identity("x");
    let x2 = x.mul_truncated(&x, order);
    let root = binomial_series(&Rational::from((1, 2)), &x2, order);
    let root_minus_one = &root - &UniPoly::one("x");
    let t_plus = &root_minus_one + &x;
    let t_minus = &root_minus_one - &x;
    let third = Rational::from((1, 3));
    let y = &binomial_series(&third, &t_plus, order) - &binomial_series(&third, &t_minus, order);
    let x_coeffs: Vec<Rational> = (0..=order).map(|k| y.coeff(k)).collect();
    let nine_halves = Rational::from((9, 2));
    let eps_coeffs = x_coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| Rational::from(c * nine_halves.clone().pow(k as i32)) / 3u32)
        .collect();
    SemiSeries {
        order,
        x_coeffs,
        eps_coeffs,
    }
}

/// One order `ε_n^{2l+1}` of the comparison.
#[derive(Clone, Debug, Serialize)]
pub struct CompareRow {
    pub order: usize,
    pub semiclassical: String,
    /// Leading coefficient of cubic `P_l`, the large-`n` limit of the exact
    /// coefficient of `ε_n^{2l+1}`.
    #[serde(rename = "exact-leading")]
    pub exact_leading: String,
    /// Whole exact `P_l(z)`, for reference.
    pub exact_polynomial: String,
    #[serde(rename = "match")]
    pub matches: bool,
    /// Both sides nonzero with opposite signs.
    pub sign_mismatch: bool,
}

/// Order-by-order table of semiclassical versus leading exact coefficients
/// through `ε_n^K`.
pub fn quantum_compare(order: usize) -> Vec<CompareRow> {
    let series = semiclassical_series(order);
    (0..=order / 2)
        .map(|l| {
            let k = 2 * l + 1;
            let semi = series.eps_coeffs.get(k).cloned().unwrap_or_default();
            let p = cubic_p(l);
            let exact = p.leading_coeff().cloned().unwrap_or_default();
            let sign_mismatch = semi.cmp0() != exact.cmp0()
                && semi.cmp0() != std::cmp::Ordering::Equal
                && exact.cmp0() != std::cmp::Ordering::Equal;
            CompareRow {
                order: k,
                semiclassical: semi.to_string(),
                exact_leading: exact.to_string(),
                exact_polynomial: p.to_string(),
                matches: semi == exact,
                sign_mismatch,
            }
        })
        .filter(|row| row.order <= order)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(prec: u32, x: f64) -> Float {
        Float::with_val(prec, x)
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn rtilde_values_and_derivative() {
        assert!(rtilde(&f(64, 0.0)).is_zero());
        assert_eq!(rtilde(&f(64, 1.0)), 2);
        let prec = 256;
        let h = Float::with_val(prec, 1) >> 60;
        for r in [0.3, 1.0, 1.7] {
            let r = f(prec, r);
            let up = rtilde(&Float::with_val(prec, &r + &h));
            let down = rtilde(&Float::with_val(prec, &r - &h));
            let fd = (up - down) / Float::with_val(prec, &h * 2u32);
            let r4 = Float::with_val(prec, r.clone().pow(4u32));
            let exact = Float::with_val(prec, &r * (r4 * 9u32 + 1u32));
            assert!(Float::with_val(prec, fd - exact).abs() < 1e-30);
        }
    }

    #[test]
    fn three_inverses_agree() {
        let prec = 200;
        for x in [1e-12, 1e-3, 0.3, 1.0, 7.5, 1e6] {
            let x = f(prec, x);
            let a = invert_radial(&x).unwrap();
            let b = invert_radial_cardano(&x).unwrap();
            let c = invert_radial_hyperbolic(&x).unwrap();
            let tol = Float::with_val(prec, a.abs_ref()) >> (prec - 8);
            assert!(Float::with_val(prec, &a - &b).abs() <= tol, "cardano at {x}");
            assert!(Float::with_val(prec, &a - &c).abs() <= tol, "sinh at {x}");
        }
    }

    #[test]
    fn round_trip_over_a_log_grid() {
        for prec in [128, 256] {
            for k in -12..=6 {
                let r = Float::with_val(prec, 10f64.powf(k as f64 / 3.0));
                let x = rtilde(&r) * 9u32;
                let y = invert_radial(&x).unwrap();
                let r2 = Float::with_val(prec, r.square_ref()) * 3u32;
                let rel = (Float::with_val(prec, &y - &r2) / &r2).abs();
                let tol = Float::with_val(prec, 1) >> (prec - 16);
                assert!(rel <= tol, "r = {r} prec {prec}");
                let rt = round_trip_residual(&x).unwrap();
                assert!(rt <= tol, "round trip {rt} at r = {r}");
            }
        }
    }

    #[test]
    fn inverse_rejects_non_positive() {
        assert!(invert_radial(&f(64, 0.0)).is_err());
        assert!(invert_radial_cardano(&f(64, -1.0)).is_err());
    }

    #[test]
    fn large_x_grows_like_cube_root() {
        let prec = 128;
        let x = f(prec, 1e30);
        let y = invert_radial(&x).unwrap();
        let lead = Float::with_val(prec, &x * 2u32).cbrt();
        let rel = Float::with_val(prec, (y / lead) - 1u32).abs();
        assert!(rel < 1e-19);
    }

    #[test]
    fn series_coefficients() {
        let s = semiclassical_series(9);
        assert_eq!(s.x_coeffs[1], q(2, 3));
        assert_eq!(s.x_coeffs[3], q(-8, 81));
        assert_eq!(s.x_coeffs[5], q(32, 729));
        for k in (0..=9).step_by(2) {
            assert_eq!(s.x_coeffs[k], 0, "even power {k}");
        }
        assert_eq!(s.eps_coeffs[1], 1);
        assert_eq!(s.eps_coeffs[3], -3);
        assert_eq!(s.eps_coeffs[5], 27);
        assert_eq!(s.eps_coeffs[7], -324);
    }

    #[test]
    fn series_matches_the_hyperbolic_form() {
        // 2 sinh(asinh(x)/3) has the Taylor coefficients of sinh(a/3) composed
        // with asinh; compare values at small x where the tail is x^11
        let prec = 256;
        let s = semiclassical_series(9);
        let mut last: Option<(f64, f64)> = None;
        for x in [1e-3, 1e-2, 1e-1] {
            let xf = f(prec, x);
            let exact = invert_radial_hyperbolic(&xf).unwrap();
            let err = Float::with_val(prec, s.eval_x(&xf) - exact).abs().to_f64();
            if let Some((lx, le)) = last {
                let slope = (err / le).log10() / (x / lx).log10();
                assert!((slope - 11.0).abs() < 0.1, "slope {slope}");
            }
            last = Some((x, err));
        }
    }

    #[test]
    fn comparison_table() {
        let rows = quantum_compare(9);
        assert_eq!(rows.iter().map(|r| r.order).collect::<Vec<_>>(), vec![1, 3, 5, 7, 9]);
        assert!(rows[0].matches && rows[1].matches);
        assert_eq!(rows[1].exact_leading, "-3");
        assert_eq!(rows[2].exact_leading, "27");
        assert!(!rows.iter().any(|r| r.sign_mismatch));
    }
}
