use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use super::{gamma_fn, Jet};
use crate::error::{QmsError, Result};

/// Modified Bessel function of the first (`I`) or second (`K`) kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BesselKind {
    I,
    K,
}

impl fmt::Display for BesselKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BesselKind::I => "I",
            BesselKind::K => "K",
        })
    }
}

impl FromStr for BesselKind {
    type Err = QmsError;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "I" | "i" => Ok(BesselKind::I),
            "K" | "k" => Ok(BesselKind::K),
            other => Err(QmsError::InvalidInput(format!("unknown Bessel kind {other:?}"))),
        }
    }
}

const GUARD: u32 = 32;

/// Argument above which the large-x expansions are tried first.
pub(crate) fn switch_point(prec: u32) -> f64 {
    (f64::from(prec) * std::f64::consts::LN_2 / 2.0).max(30.0)
}

fn is_integer(r: &Rational) -> bool {
    *r.denom() == 1
}

/// `I_ν(x)` from its power series.
fn i_series(nu: &Rational, x: &Float, wp: u32) -> Float {
    if is_integer(nu) && *nu < 0 {
        return i_series(&Rational::from(-nu), x, wp);
    }
    let nu_f = Float::with_val(wp, nu);
    let half = Float::with_val(wp, x / 2u32);
    let q = Float::with_val(wp, half.square_ref());
    let nu1 = Float::with_val(wp, &nu_f + 1u32);
    let mut t = Float::with_val(wp, half.pow(&nu_f)) / gamma_fn(&nu1, wp).expect("non-integer order");
    let mut sum = t.clone();
    let tol_exp = -(wp as i32);
    let xf = x.to_f64();
    let mut k = 1u32;
    loop {
        let den = Float::with_val(wp, &nu_f + k) * k;
        t *= &q;
        t /= den;
        sum += &t;
        let past_peak = f64::from(k) > xf / 2.0 + 1.0 && f64::from(k) + nu.to_f64() > 0.0;
        if past_peak && (t.is_zero() || t.get_exp().unwrap_or(i32::MIN) < sum.get_exp().unwrap_or(0) + tol_exp) {
            break;
        }
        k += 1;
    }
    sum
}

/// `Σ (±1)^k a_k(ν) / x^k` truncated once terms fall below `2^-wp`;
/// `None` when the terms start growing before that.
fn asymptotic_sum(nu: &Rational, x: &Float, wp: u32, alternating: bool) -> Option<Float> {
    let mu4 = Float::with_val(wp, &Rational::from(nu * nu)) * 4u32;
    let mut a = Float::with_val(wp, 1);
    let mut sum = Float::with_val(wp, 1);
    let mut prev_mag = Float::with_val(wp, 1);
    for k in 1u32..100_000 {
        let odd = Float::with_val(wp, (2 * k - 1) * (2 * k - 1));
        a *= Float::with_val(wp, &mu4 - odd);
        a /= Float::with_val(wp, x * (8 * k));
        if a.is_zero() {
            return Some(sum);
        }
        if alternating && k % 2 == 1 {
            sum -= &a;
        } else {
            sum += &a;
        }
        let mag = Float::with_val(wp, a.abs_ref());
        if mag.get_exp().unwrap_or(i32::MIN) < sum.get_exp().unwrap_or(0) - wp as i32 {
            return Some(sum);
        }
        if k > 2 && mag > prev_mag {
            return None;
        }
        prev_mag = mag;
    }
    None
}

fn i_direct(nu: &Rational, x: &Float, prec: u32) -> Float {
    let wp = prec + GUARD;
    if x.to_f64() >= switch_point(prec) {
        if let Some(sum) = asymptotic_sum(nu, x, wp, true) {
            let two_pi_x = Float::with_val(wp, Constant::Pi) * Float::with_val(wp, x * 2u32);
            let pref = Float::with_val(wp, x.exp_ref()) / two_pi_x.sqrt();
            return Float::with_val(prec, pref * sum);
        }
    }
    let bits = (x.to_f64() / std::f64::consts::LN_2) as u32;
    Float::with_val(prec, i_series(nu, x, wp + bits.min(wp)))
}

/// `K_f` for `0 < f < 1`.
fn k_base(f: &Rational, x: &Float, prec: u32) -> Float {
    let wp = prec + GUARD;
    if x.to_f64() >= switch_point(prec) {
        if let Some(sum) = asymptotic_sum(f, x, wp, false) {
            let pi = Float::with_val(wp, Constant::Pi);
            let pref = (pi / Float::with_val(wp, x * 2u32)).sqrt() * Float::with_val(wp, -x).exp();
            return Float::with_val(prec, pref * sum);
        }
    }
    // I_{-f} - I_f cancels roughly e^{2x}; carry that many extra bits
    let mut boost = (2.0 * x.to_f64() / std::f64::consts::LN_2) as u32 + 16;
    loop {
        let bp = wp + boost;
        let xi = Float::with_val(bp, x);
        let im = i_series(&Rational::from(-f), &xi, bp);
        let ip = i_series(f, &xi, bp);
        let diff = Float::with_val(bp, &im - &ip);
        let lost = im.get_exp().unwrap_or(0) - diff.get_exp().unwrap_or(i32::MIN / 2);
        if lost + 8 < boost as i32 {
            let pi = Float::with_val(bp, Constant::Pi);
            let s = Float::with_val(bp, &pi * Float::with_val(bp, f)).sin();
            return Float::with_val(prec, pi / 2u32 * diff / s);
        }
        boost = boost * 2 + 32;
    }
}

/// Memoised Bessel evaluations at a single argument.
///
/// `K` of higher order is reached by the stable upward recurrence
/// `K_{μ+1} = K_{μ-1} + (2μ/x) K_μ` from the two base orders in `(0, 1)`.
pub struct BesselTable {
    x: Float,
    prec: u32,
    k: HashMap<Rational, Float>,
    i: HashMap<Rational, Float>,
}

impl BesselTable {
    pub fn new(x: &Float, prec: u32) -> Result<Self> {
        if *x <= 0 {
            return Err(QmsError::InvalidInput("Bessel argument must be positive".into()));
        }
        Ok(BesselTable {
            x: Float::with_val(prec + GUARD, x),
            prec,
            k: HashMap::new(),
            i: HashMap::new(),
        })
    }

    pub fn i(&mut self, nu: &Rational) -> Float {
        if let Some(v) = self.i.get(nu) {
            return Float::with_val(self.prec, v);
        }
        let v = i_direct(nu, &self.x, self.prec + GUARD);
        self.i.insert(nu.clone(), v.clone());
        Float::with_val(self.prec, v)
    }

    pub fn k(&mut self, nu: &Rational) -> Result<Float> {
        let mu = Rational::from(nu.abs_ref());
        if is_integer(&mu) {
            return Err(QmsError::InvalidInput(format!("integer order {nu} is not supported")));
        }
        if let Some(v) = self.k.get(&mu) {
            return Ok(Float::with_val(self.prec, v));
        }
        let wp = self.prec + GUARD;
        let floor = Rational::from(mu.floor_ref());
        let f = Rational::from(&mu - &floor);
        let one_minus = Rational::from(1 - &f);
        let mut lower = self.base(&one_minus);
        let mut cur = self.base(&f);
        let mut order = f.clone();
        while order < mu {
            let two_mu_over_x = Float::with_val(wp, &order) * 2u32 / &self.x;
            let next = Float::with_val(wp, &lower + two_mu_over_x * &cur);
            lower = cur;
            cur = next;
            order += 1;
            self.k.insert(order.clone(), cur.clone());
        }
        Ok(Float::with_val(self.prec, &cur))
    }

    fn base(&mut self, f: &Rational) -> Float {
        if let Some(v) = self.k.get(f) {
            return v.clone();
        }
        let v = k_base(f, &self.x, self.prec + GUARD);
        self.k.insert(f.clone(), v.clone());
        v
    }

    pub fn eval(&mut self, kind: BesselKind, nu: &Rational) -> Result<Float> {
        match kind {
            BesselKind::I => Ok(self.i(nu)),
            BesselKind::K => self.k(nu),
        }
    }

    /// `d^k/dx^k B_ν(x)` as a finite combination of neighbouring orders.
    pub fn derivative(&mut self, kind: BesselKind, nu: &Rational, k: usize) -> Result<Float> {
        let wp = self.prec + GUARD;
        let mut acc = Float::new(wp);
        let mut binom = Float::with_val(wp, 1);
        for j in 0..=k {
            let order = Rational::from(nu + (2 * j as i64 - k as i64));
            acc += Float::with_val(wp, &binom * self.eval(kind, &order)?);
            binom *= (k - j) as u32;
            binom /= (j + 1) as u32;
        }
        acc >>= k as u32;
        if kind == BesselKind::K && k % 2 == 1 {
            acc = -acc;
        }
        Ok(Float::with_val(self.prec, acc))
    }
}

pub fn bessel_i(nu: &Rational, x: &Float, prec: u32) -> Result<Float> {
    Ok(BesselTable::new(x, prec)?.i(nu))
}

pub fn bessel_k(nu: &Rational, x: &Float, prec: u32) -> Result<Float> {
    BesselTable::new(x, prec)?.k(nu)
}

pub fn bessel_ik(kind: BesselKind, nu: &Rational, x: &Float, prec: u32) -> Result<Float> {
    BesselTable::new(x, prec)?.eval(kind, nu)
}

/// Jet of `s ↦ √s·B_ν(κs)` to order `m`, built from exact derivative
/// combinations of Bessel functions.
pub fn bessel_jet(kind: BesselKind, nu: &Rational, kappa: &Float, s: &Float, m: usize, prec: u32) -> Result<Jet> {
    if *s <= 0 || *kappa <= 0 {
        return Err(QmsError::InvalidInput("bessel_jet needs s > 0 and kappa > 0".into()));
    }
    let wp = prec + GUARD;
    let s = Float::with_val(wp, s);
    let x = Float::with_val(wp, kappa * &s);
    let mut table = BesselTable::new(&x, wp)?;
    let mut d = Vec::with_capacity(m + 1);
    let mut kpow = Float::with_val(wp, 1);
    for k in 0..=m {
        d.push(Float::with_val(wp, table.derivative(kind, nu, k)? * &kpow));
        kpow *= kappa;
    }
    let b = Jet::new(s.clone(), d);
    let root = Jet::power(&s, &Float::with_val(wp, 0.5), m);
    let out = root.mul(&b);
    Ok(Jet::new(
        Float::with_val(prec, &s),
        out.d.iter().map(|v| Float::with_val(prec, v)).collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::ulp_scale;

    fn sixth() -> Rational {
        Rational::from((1, 6))
    }

    fn rel(a: &Float, b: &Float) -> Float {
        Float::with_val(a.prec(), a - b).abs() / Float::with_val(a.prec(), b.abs_ref())
    }

    #[test]
    fn reflection_identity_for_one_sixth() {
        let prec = 256;
        for x in [0.3, 2.5, 12.0] {
            let x = Float::with_val(prec, x);
            let k = bessel_k(&sixth(), &x, prec).unwrap();
            let im = bessel_i(&Rational::from((-1, 6)), &x, prec + 64).unwrap();
            let ip = bessel_i(&sixth(), &x, prec + 64).unwrap();
            let want = Float::with_val(prec + 64, Constant::Pi) * (im - ip);
            assert!(rel(&k, &want) < ulp_scale(prec, 10));
        }
    }

    #[test]
    fn known_values() {
        // mpmath.besselk(1/6, 1), mpmath.besseli(1/6, 1)
        let prec = 200;
        let x = Float::with_val(prec, 1);
        let k = bessel_k(&sixth(), &x, prec).unwrap();
        let i = bessel_i(&sixth(), &x, prec).unwrap();
        let k_ref = Float::with_val(prec, Float::parse("0.425318539500544650250830420366289360469920865").unwrap());
        let i_ref = Float::with_val(prec, Float::parse("1.17828057771776058998278290860482959477936316").unwrap());
        assert!(rel(&k, &k_ref) < 1e-38);
        assert!(rel(&i, &i_ref) < 1e-38);
    }

    #[test]
    fn wronskian_across_the_switch() {
        for prec in [128u32, 256] {
            let seam = switch_point(prec);
            for x in [0.5, 2.0, 10.0, 40.0, seam * 0.98, seam * 1.02, 150.0] {
                let x = Float::with_val(prec, x);
                let mut t = BesselTable::new(&x, prec).unwrap();
                let i0 = t.i(&sixth());
                let k0 = t.k(&sixth()).unwrap();
                let i1 = t.derivative(BesselKind::I, &sixth(), 1).unwrap();
                let k1 = t.derivative(BesselKind::K, &sixth(), 1).unwrap();
                let w = Float::with_val(prec, &i0 * &k1) - Float::with_val(prec, &i1 * &k0);
                let want = Float::with_val(prec, -1) / &x;
                assert!(rel(&w, &want) < ulp_scale(prec, 12), "prec {prec} x {x}");
            }
        }
    }

    #[test]
    fn asymptotic_and_series_agree_near_the_seam() {
        let prec = 192;
        let x = Float::with_val(prec, switch_point(prec) + 4.0);
        let wp = prec;
        let asym = {
            let s = asymptotic_sum(&sixth(), &x, wp, false).unwrap();
            let pi = Float::with_val(wp, Constant::Pi);
            (pi / Float::with_val(wp, &x * 2u32)).sqrt() * Float::with_val(wp, -&x).exp() * s
        };
        let boost = 2 * (x.to_f64() / std::f64::consts::LN_2) as u32 + 64;
        let xb = Float::with_val(wp + boost, &x);
        let refl = Float::with_val(wp + boost, Constant::Pi)
            * (i_series(&Rational::from((-1, 6)), &xb, wp + boost) - i_series(&sixth(), &xb, wp + boost));
        assert!(rel(&asym, &Float::with_val(wp, refl)) < ulp_scale(prec, 10));
    }

    #[test]
    fn large_x_coefficient() {
        // K_ν(s) e^s sqrt(2s/π) = 1 + (4ν²-1)/(8s) + O(s^-2), with (4ν²-1)/8 = -1/9
        let prec = 128;
        for s in [1e3, 1e4] {
            let x = Float::with_val(prec, s);
            let k = bessel_k(&sixth(), &x, prec).unwrap();
            let pi = Float::with_val(prec, Constant::Pi);
            let scaled = k * Float::with_val(prec, x.exp_ref()) * (Float::with_val(prec, &x * 2u32) / pi).sqrt();
            let c1 = (scaled - 1u32) * &x;
            assert!((c1.to_f64() + 1.0 / 9.0).abs() < 1.0 / s);
        }
    }

    #[test]
    fn upward_recurrence_matches_direct_reflection() {
        let prec = 160;
        let x = Float::with_val(prec, 3.7);
        let nu = Rational::from((19, 6));
        let k = bessel_k(&nu, &x, prec).unwrap();
        let im = bessel_i(&Rational::from(-&nu), &x, prec + 64).unwrap();
        let ip = bessel_i(&nu, &x, prec + 64).unwrap();
        let pi = Float::with_val(prec + 64, Constant::Pi);
        let s = Float::with_val(prec + 64, &pi * Float::with_val(prec + 64, &nu)).sin();
        let want = pi / 2u32 * (im - ip) / s;
        assert!(rel(&k, &want) < ulp_scale(prec, 12));
        assert_eq!(bessel_k(&Rational::from(-&nu), &x, prec).unwrap(), k);
        assert!(bessel_k(&Rational::from(2), &x, prec).is_err());
    }

    #[test]
    fn jet_of_order_zero_is_the_plain_value() {
        let prec = 128;
        let s = Float::with_val(prec, 1.7);
        let kappa = Float::with_val(prec, 2);
        let j = bessel_jet(BesselKind::K, &sixth(), &kappa, &s, 0, prec).unwrap();
        let want = bessel_k(&sixth(), &Float::with_val(prec, &s * &kappa), prec).unwrap() * s.clone().sqrt();
        assert!(rel(j.value(), &want) < ulp_scale(prec, 10));
    }

    #[test]
    fn jets_solve_the_radial_equation() {
        let prec = 256;
        for kind in [BesselKind::K, BesselKind::I] {
            for kappa in [1.0, 2.0, 3.5] {
                for s in [0.3, 1.0, 5.0, 20.0] {
                    let s = Float::with_val(prec, s);
                    let kappa = Float::with_val(prec, kappa);
                    let j = bessel_jet(kind, &sixth(), &kappa, &s, 2, prec).unwrap();
                    let w0 = Float::with_val(prec, 2) / (Float::with_val(prec, s.square_ref()) * 9u32);
                    let k2 = Float::with_val(prec, kappa.square_ref());
                    let res = Float::with_val(prec, -&j.d[2]) - w0 * &j.d[0] + k2 * &j.d[0];
                    let scale = Float::with_val(prec, j.d[0].abs_ref()).max(&Float::with_val(prec, 1));
                    assert!(res.abs() / scale < ulp_scale(prec, 16), "{kind} kappa {kappa} s {s}");
                }
            }
        }
    }
}
