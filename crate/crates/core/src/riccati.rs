//! The parabolic recursion as a family of Riccati equations in `s = 1/(6ε)`,
//!
//! ```text
//! ½ v_n' = v_n² - f_n v_n - g_n,   g_n = (n+1)/(6s),
//! f_n = -1 + ε γ₀⁽ⁿ⁾ - 2 Σ_{i=2..n} (-1)^i v_{n-i},   γ₀⁽ⁿ⁾ = 2 (n even), 1 (n odd),
//! ```
//!
//! their Schrödinger form `-ψ_n'' + W_n ψ_n = -ψ_n` with
//! `W_n = f_n' + f_n² - 1 + 4(n+1)/(6s)`, and the boundary term of the
//! quadratic form of `-∂² - 2/(9s²)` on `ψ₀ = √s K_{1/6}(s)`.

use rug::ops::Pow;
use rug::{Float, Rational};
use serde::Serialize;

use crate::error::{QmsError, Result};
use crate::quadrature::integrate;
use crate::solver::iterate_parabolic;
use crate::special::{bessel_jet, to_decimal, BesselKind, BesselTable, Jet};

const GUARD: u32 = 32;

fn sixth() -> Rational {
    Rational::from((1, 6))
}

fn check_s(s: &Float) -> Result<()> {
    if *s <= 0 {
        return Err(QmsError::InvalidInput("s must be positive".into()));
    }
    Ok(())
}

/// `v₀(s)` and `v₀'(s)` from the logarithmic derivative of `K_{1/6}`:
/// `v₀ = -½(1 + 1/(6s) + K'_{1/6}(s)/K_{1/6}(s))`.
pub fn v0_closed_form(s: &Float, prec: u32) -> Result<(Float, Float)> {
    check_s(s)?;
    let wp = prec + GUARD;
    let s = Float::with_val(wp, s);
    let mut t = BesselTable::new(&s, wp)?;
    let nu = sixth();
    let k0 = t.k(&nu)?;
    let l = Float::with_val(wp, t.derivative(BesselKind::K, &nu, 1)? / &k0);
    let l2 = Float::with_val(wp, t.derivative(BesselKind::K, &nu, 2)? / &k0);
    let inv6s = Float::with_val(wp, 6u32 * &s).recip();
    let v0 = -(Float::with_val(wp, &inv6s + 1u32) + &l) / 2u32;
    let dl = l2 - Float::with_val(wp, l.square_ref());
    let dv0 = -(dl - Float::with_val(wp, &inv6s / &s)) / 2u32;
    Ok((Float::with_val(prec, v0), Float::with_val(prec, dv0)))
}

/// Values and `s`-derivatives of `v_0..v_n` at one point.
#[derive(Clone, Debug)]
pub struct RiccatiProfile {
    pub s: Float,
    pub eps: Float,
    pub v: Vec<Float>,
    pub dv: Vec<Float>,
    pub prec: u32,
}

/// Bits lost by the forward recursion up to depth `n`: each step amplifies
/// perturbations by about `6s/(k+1)`.
fn recursion_loss(n: usize, s: &Float) -> u32 {
    let s = s.to_f64();
    (0..n).map(|k| (6.0 * s / (k as f64 + 1.0)).max(1.0).log2()).sum::<f64>().ceil() as u32
}

/// Propagates `(v₀, v₀')` through the recursion and its `s`-derivative
/// `v'_{n+1} = -(n+1)/(6s²v_n) - (n+1)v'_n/(6s v_n²) - v'_{n-1}`.
pub fn v_profile(n_max: usize, s: &Float, prec: u32) -> Result<RiccatiProfile> {
    check_s(s)?;
    let wp = prec + GUARD + recursion_loss(n_max, s);
    let s_w = Float::with_val(wp, s);
    let eps = Float::with_val(wp, 6u32 * &s_w).recip();
    let (v0, dv0) = v0_closed_form(&s_w, wp)?;
    let it = iterate_parabolic(&v0, &eps, n_max, wp)?;
    if it.survival <= n_max {
        return Err(QmsError::PrecisionExhausted {
            index: it.survival,
            prec: wp,
        });
    }
    let v = it.values;
    let mut dv = vec![dv0];
    let mut dprev = Float::new(wp);
    for n in 0..n_max {
        let k = n as u32 + 1;
        let a = Float::with_val(wp, &eps * k) / &s_w / &v[n];
        let b = Float::with_val(wp, &eps * k) * &dv[n] / Float::with_val(wp, v[n].square_ref());
        let next = -(a + b) - &dprev;
        dprev = dv[n].clone();
        dv.push(next);
    }
    Ok(RiccatiProfile {
        s: s_w,
        eps,
        v,
        dv,
        prec,
    })
}

impl RiccatiProfile {
    pub fn depth(&self) -> usize {
        self.v.len() - 1
    }

    fn wp(&self) -> u32 {
        self.v[0].prec()
    }

    fn gamma0(n: usize) -> u32 {
        if n % 2 == 0 {
            2
        } else {
            1
        }
    }

    pub fn g(&self, n: usize) -> Float {
        Float::with_val(self.wp(), &self.eps * (n as u32 + 1))
    }

    pub fn f(&self, n: usize) -> Float {
        let wp = self.wp();
        let mut f = Float::with_val(wp, &self.eps * Self::gamma0(n)) - 1u32;
        for i in 2..=n {
            let term = Float::with_val(wp, &self.v[n - i] * 2u32);
            if i % 2 == 0 {
                f -= term;
            } else {
                f += term;
            }
        }
        f
    }

    pub fn df(&self, n: usize) -> Float {
        let wp = self.wp();
        let mut d = -Float::with_val(wp, &self.eps * Self::gamma0(n)) / &self.s;
        for i in 2..=n {
            let term = Float::with_val(wp, &self.dv[n - i] * 2u32);
            if i % 2 == 0 {
                d -= term;
            } else {
                d += term;
            }
        }
        d
    }

    /// `W_n = f_n' + f_n² - 1 + 4(n+1)/(6s)`.
    pub fn w(&self, n: usize) -> Float {
        let wp = self.wp();
        let f = self.f(n);
        self.df(n) + Float::with_val(wp, f.square_ref()) - 1u32 + Float::with_val(wp, self.g(n) * 4u32)
    }
}

/// `|½v_n' - v_n² + f_n v_n + g_n|`.
pub fn riccati_residual(profile: &RiccatiProfile, n: usize) -> Result<Float> {
    if n > profile.depth() {
        return Err(QmsError::InvalidInput(format!("profile only reaches n = {}", profile.depth())));
    }
    let wp = profile.wp();
    let v = &profile.v[n];
    let r = Float::with_val(wp, &profile.dv[n] / 2u32) - Float::with_val(wp, v.square_ref())
        + Float::with_val(wp, profile.f(n) * v)
        + profile.g(n);
    Ok(Float::with_val(profile.prec, r.abs()))
}

/// `|f_{n+1} + f_n - 1/(2s) + 2(v_{n-1} + 1)|`.
pub fn f_recursion_residual(profile: &RiccatiProfile, n: usize) -> Result<Float> {
    if n + 1 > profile.depth() {
        return Err(QmsError::InvalidInput(format!("profile only reaches n = {}", profile.depth())));
    }
    let wp = profile.wp();
    let prev = if n == 0 { Float::new(wp) } else { profile.v[n - 1].clone() };
    let half_inv_s = Float::with_val(wp, 2u32 * &profile.s).recip();
    let r = profile.f(n + 1) + profile.f(n) - half_inv_s + Float::with_val(wp, prev + 1u32) * 2u32;
    Ok(Float::with_val(profile.prec, r.abs()))
}

/// `|f₂ - ψ₀'/ψ₀|` with `f₂ = -1 + 1/(3s) - 2v₀` and the logarithmic
/// derivative taken from the jet of `√s K_{1/6}(s)`.
pub fn f2_log_derivative_residual(s: &Float, prec: u32) -> Result<Float> {
    let wp = prec + GUARD;
    let (v0, _) = v0_closed_form(s, wp)?;
    let s = Float::with_val(wp, s);
    let f2 = Float::with_val(wp, 3u32 * &s).recip() - 1u32 - Float::with_val(wp, &v0 * 2u32);
    let jet = bessel_jet(BesselKind::K, &sixth(), &Float::with_val(wp, 1), &s, 1, wp)?;
    let h0 = jet.log_derivative();
    Ok(Float::with_val(prec, (f2 - &h0.d[0]).abs()))
}

/// `W_n(s)` from the profile, i.e. from `f_n`, `f_n'` and the Bessel
/// closed form of `v₀`.
pub fn potential_w(n: usize, s: &Float, prec: u32) -> Result<Float> {
    let p = v_profile(n, s, prec)?;
    Ok(Float::with_val(prec, p.w(n)))
}

/// The explicit expressions for `W_0..W_3`; `None` beyond.
pub fn potential_w_closed(n: usize, s: &Float, prec: u32) -> Result<Option<Float>> {
    check_s(s)?;
    let wp = prec + GUARD;
    let s = Float::with_val(wp, s);
    let inv_s = Float::with_val(wp, s.recip_ref());
    let inv_s2 = Float::with_val(wp, inv_s.square_ref());
    let q = |num: i32, den: u32, x: &Float| Float::with_val(wp, x * num) / den;
    let w = match n {
        0 => q(-2, 9, &inv_s2),
        1 => q(-5, 36, &inv_s2) + &inv_s,
        2 => q(-2, 9, &inv_s2) + q(2, 1, &inv_s),
        3 => {
            let (v0, _) = v0_closed_form(&s, wp)?;
            q(-5, 36, &inv_s2) + q(5, 3, &inv_s) + Float::with_val(wp, v0.square_ref()) * 8u32
                + Float::with_val(wp, &v0 * 8u32)
                - q(2, 3, &inv_s) * &v0
        }
        _ => return Ok(None),
    };
    Ok(Some(Float::with_val(prec, w)))
}

/// Outcome of checking `-ψ_n'' + W_n ψ_n = -ψ_n` along a grid.
#[derive(Clone, Debug, Serialize)]
pub struct SchrodingerReport {
    pub n: usize,
    #[serde(serialize_with = "ser_float")]
    pub max_residual: Float,
    #[serde(serialize_with = "ser_float")]
    pub max_psi: Float,
    pub points: usize,
}

fn ser_float<S: serde::Serializer>(x: &Float, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&to_decimal(x))
}

/// `(G'/G, G''/G)` of the integrating factor `G_n`, closed form for `n ≤ 2`
/// and from `f_n` otherwise.
fn integrating_factor_logs(n: usize, s: &Float, profile: &RiccatiProfile, wp: u32) -> Result<(Float, Float)> {
    let inv_s = Float::with_val(wp, s.recip_ref());
    match n {
        0 | 1 => {
            let c = if n == 0 { 3u32 } else { 6u32 };
            let l = Float::with_val(wp, &inv_s / c) - 1u32;
            let l2 = Float::with_val(wp, l.square_ref()) - Float::with_val(wp, inv_s.square_ref()) / c;
            Ok((l, l2))
        }
        2 => {
            let jet = bessel_jet(BesselKind::K, &sixth(), &Float::with_val(wp, 1), s, 2, wp)?;
            Ok((
                Float::with_val(wp, &jet.d[1] / &jet.d[0]),
                Float::with_val(wp, &jet.d[2] / &jet.d[0]),
            ))
        }
        _ => {
            let f = profile.f(n);
            let f2 = profile.df(n) + Float::with_val(wp, f.square_ref());
            Ok((f, f2))
        }
    }
}

fn log_integrating_factor(n: usize, a: &Float, b: &Float, wp: u32) -> Result<Float> {
    let closed = |s: &Float| -> Result<Float> {
        match n {
            0 | 1 => {
                let p = if n == 0 { 3u32 } else { 6u32 };
                Ok(Float::with_val(wp, s.ln_ref()) / p - s)
            }
            _ => {
                let jet = bessel_jet(BesselKind::K, &sixth(), &Float::with_val(wp, 1), s, 0, wp)?;
                Ok(jet.d[0].clone().ln())
            }
        }
    };
    if n <= 2 {
        return Ok(closed(b)? - closed(a)?);
    }
    let r = integrate(|s| Ok(v_profile(n, s, wp)?.f(n)), a, b, wp, 1e-30, 0.0)?;
    Ok(r.value)
}

/// Builds `ψ_n = G_n φ_n` on `grid` with `φ_n = exp(-2∫v_n)` (quadrature from
/// the first grid point) and returns `max |−ψ_n'' + W_nψ_n + ψ_n| / max|ψ_n|`.
///
/// Derivatives come from `φ_n'/φ_n = -2v_n`, `φ_n''/φ_n = 4v_n² - 2v_n'` and the
/// analytic derivatives of `G_n`.
pub fn schrodinger_check(n: usize, grid: &[Float], prec: u32) -> Result<SchrodingerReport> {
    if grid.is_empty() {
        return Err(QmsError::InvalidInput("empty grid".into()));
    }
    let wp = prec + GUARD;
    let mut log_psi = Float::new(wp);
    let mut max_res = Float::new(wp);
    let mut max_psi = Float::new(wp);
    let mut residuals = Vec::with_capacity(grid.len());
    for (i, s) in grid.iter().enumerate() {
        check_s(s)?;
        let s = Float::with_val(wp, s);
        if i > 0 {
            let a = Float::with_val(wp, &grid[i - 1]);
            let phi = integrate(|t| Ok(v_profile(n, t, wp)?.v[n].clone()), &a, &s, wp, 1e-30, 0.0)?;
            log_psi += log_integrating_factor(n, &a, &s, wp)? - Float::with_val(wp, &phi.value * 2u32);
        }
        let profile = v_profile(n, &s, wp)?;
        let (gl, gl2) = integrating_factor_logs(n, &s, &profile, wp)?;
        let v = &profile.v[n];
        let phl = Float::with_val(wp, v * -2i32);
        let phl2 = Float::with_val(wp, v.square_ref()) * 4u32 - Float::with_val(wp, &profile.dv[n] * 2u32);
        let second = gl2 + Float::with_val(wp, &gl * &phl) * 2u32 + phl2;
        let rel = -second + profile.w(n) + 1u32;
        let psi = Float::with_val(wp, log_psi.exp_ref());
        residuals.push(Float::with_val(wp, &rel * &psi).abs());
        if psi > max_psi {
            max_psi = psi;
        }
    }
    for r in residuals {
        if r > max_res {
            max_res = r;
        }
    }
    Ok(SchrodingerReport {
        n,
        max_residual: Float::with_val(prec, &max_res / &max_psi),
        max_psi: Float::with_val(prec, max_psi),
        points: grid.len(),
    })
}

/// `F(s) = ψ(ψ/(3s) - ψ')` for `ψ = √s K_{1/6}(s)`.
pub fn boundary_integrand(s: &Float, prec: u32) -> Result<Float> {
    let jet = bessel_jet(BesselKind::K, &sixth(), &Float::with_val(prec, 1), s, 1, prec)?;
    let inner = Float::with_val(prec, &jet.d[0] / Float::with_val(prec, 3u32 * s)) - &jet.d[1];
    Ok(inner * &jet.d[0])
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundaryTerm {
    #[serde(serialize_with = "ser_float")]
    pub value: Float,
    #[serde(serialize_with = "ser_float")]
    pub at_zero: Float,
    #[serde(serialize_with = "ser_float")]
    pub at_infinity: Float,
    /// Difference between the last two extrapolation orders.
    #[serde(serialize_with = "ser_float")]
    pub extrapolation_error: Float,
}

/// `[F]_0^∞` with the limit at `0` taken by polynomial extrapolation in
/// `t = s^{1/3}` (the natural variable of the small-`s` expansion of `F`)
/// and the limit at infinity read off at `s = 200`, where `F ~ e^{-400}`.
pub fn boundary_term(prec: u32) -> Result<BoundaryTerm> {
    const POINTS: usize = 14;
    let wp = prec + GUARD;
    let mut ts = Vec::with_capacity(POINTS);
    let mut table: Vec<Float> = Vec::with_capacity(POINTS);
    let mut last = Float::new(wp);
    let mut prev_estimate = Float::new(wp);
    for k in 0..POINTS {
        let mut t = Float::with_val(wp, 1);
        t >>= k as u32 + 1;
        let s = Float::with_val(wp, t.clone().pow(3u32));
        ts.push(t);
        table.push(boundary_integrand(&s, wp)?);
        // Neville's scheme evaluated at t = 0, updated in place
        for j in (0..k).rev() {
            let num = Float::with_val(wp, &ts[k] * &table[j]) - Float::with_val(wp, &ts[j] * &table[j + 1]);
            table[j] = num / Float::with_val(wp, &ts[k] - &ts[j]);
        }
        prev_estimate = std::mem::replace(&mut last, table[0].clone());
    }
    let at_zero = last;
    let at_infinity = boundary_integrand(&Float::with_val(wp, 200), wp)?;
    let value = Float::with_val(wp, &at_infinity - &at_zero);
    let extrapolation_error = Float::with_val(prec, Float::with_val(wp, &at_zero - &prev_estimate).abs());
    Ok(BoundaryTerm {
        value: Float::with_val(prec, value),
        at_zero: Float::with_val(prec, at_zero),
        at_infinity: Float::with_val(prec, at_infinity),
        extrapolation_error,
    })
}

/// Both sides of
/// `∫₀^∞ ψ(-∂² - 2/(9s²))ψ = ∫₀^∞ (ψ/(3s) - ψ')² ds + [F]_0^∞`,
/// each integrated independently in `t = s^{1/3}` up to `s = upper`.
#[derive(Clone, Debug, Serialize)]
pub struct QuadraticForm {
    #[serde(serialize_with = "ser_float")]
    pub lhs: Float,
    #[serde(serialize_with = "ser_float")]
    pub square_integral: Float,
    #[serde(serialize_with = "ser_float")]
    pub boundary: Float,
    #[serde(serialize_with = "ser_float")]
    pub relative_mismatch: Float,
}

pub fn quadratic_form_identity(prec: u32, upper: f64) -> Result<QuadraticForm> {
    let wp = prec + GUARD;
    let one = Float::with_val(wp, 1);
    let t_max = Float::with_val(wp, upper).cbrt();
    let zero = Float::new(wp);
    let jet_at = |t: &Float| -> Result<(Float, Jet)> {
        let s = Float::with_val(wp, t.clone().pow(3u32));
        let j = bessel_jet(BesselKind::K, &sixth(), &one, &s, 2, wp)?;
        Ok((s, j))
    };
    let lhs = integrate(
        |t| {
            let (s, j) = jet_at(t)?;
            let pot = Float::with_val(wp, &j.d[0] * 2u32) / (Float::with_val(wp, s.square_ref()) * 9u32);
            let op = -Float::with_val(wp, &j.d[2] + pot);
            Ok(op * &j.d[0] * (Float::with_val(wp, t.square_ref()) * 3u32))
        },
        &zero,
        &t_max,
        wp,
        1e-12,
        0.0,
    )?;
    let sq = integrate(
        |t| {
            let (s, j) = jet_at(t)?;
            let g = Float::with_val(wp, &j.d[0] / Float::with_val(wp, 3u32 * &s)) - &j.d[1];
            Ok(Float::with_val(wp, g.square_ref()) * (Float::with_val(wp, t.square_ref()) * 3u32))
        },
        &zero,
        &t_max,
        wp,
        1e-12,
        0.0,
    )?;
    let boundary = boundary_term(prec)?.value;
    let rhs = Float::with_val(wp, &sq.value + &boundary);
    let mismatch = Float::with_val(wp, &lhs.value - &rhs).abs() / Float::with_val(wp, lhs.value.abs_ref());
    Ok(QuadraticForm {
        lhs: Float::with_val(prec, lhs.value),
        square_integral: Float::with_val(prec, sq.value),
        boundary,
        relative_mismatch: Float::with_val(prec, mismatch),
    })
}

/// Jet of the rescaled state `ψ₀(λs)`; it satisfies
/// `-ψ'' - 2/(9s²)ψ = -λ²ψ` for every `λ > 0`.
pub fn scaled_ground_state(lambda: &Float, s: &Float, order: usize, prec: u32) -> Result<Jet> {
    check_s(s)?;
    if *lambda <= 0 {
        return Err(QmsError::InvalidInput("lambda must be positive".into()));
    }
    // √s K(λs) = ψ₀(λs)/√λ
    let j = bessel_jet(BesselKind::K, &sixth(), lambda, s, order, prec)?;
    Ok(j.scale(&Float::with_val(prec, lambda.sqrt_ref())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{truncated_f, truncated_v, Flavor};
    use crate::special::pi;

    fn f(prec: u32, x: f64) -> Float {
        Float::with_val(prec, x)
    }

    #[test]
    fn closed_form_v0_large_s_and_positivity() {
        let prec = 256;
        let s = f(prec, 1e4);
        let (v0, _) = v0_closed_form(&s, prec).unwrap();
        let x = 1.0 / 1e4;
        let approx = x / 6.0 - x * x / 18.0;
        assert!((v0.to_f64() - approx).abs() < 1e-12);
        for s in [0.1, 1.0, 10.0, 100.0] {
            assert!(v0_closed_form(&f(prec, s), prec).unwrap().0 > 0);
        }
    }

    #[test]
    fn closed_form_matches_series_at_small_eps() {
        let prec = 256;
        let eps = f(prec, 0.001);
        let s = Float::with_val(prec, 6u32 * &eps).recip();
        let (v0, _) = v0_closed_form(&s, prec).unwrap();
        let ser = truncated_v(Flavor::Parabolic, 0, &eps, 8);
        let d = Float::with_val(prec, &v0 - &ser.value).abs();
        assert!(d < Float::with_val(prec, ser.first_omitted.abs_ref()) * 2u32);
    }

    #[test]
    fn derivative_against_central_differences() {
        let prec = 128;
        let s = f(prec, 10.0);
        let p = v_profile(1, &s, prec).unwrap();
        let mut h = s.clone();
        h >>= 20;
        let up = v_profile(1, &Float::with_val(prec, &s + &h), prec).unwrap();
        let dn = v_profile(1, &Float::with_val(prec, &s - &h), prec).unwrap();
        for n in 0..=1 {
            let fd = Float::with_val(prec, &up.v[n] - &dn.v[n]) / Float::with_val(prec, &h * 2u32);
            assert!(Float::with_val(prec, fd - &p.dv[n]).abs() < 1e-8, "n = {n}");
        }
        let p0 = v_profile(0, &s, prec).unwrap();
        assert_eq!(p0.v.len(), 1);
    }

    #[test]
    fn riccati_and_f_recursion() {
        let prec = 256;
        for s in [2.0, 10.0, 50.0] {
            let p = v_profile(10, &f(prec, s), prec).unwrap();
            for n in 0..=10 {
                assert!(riccati_residual(&p, n).unwrap() < 1e-20, "s = {s}, n = {n}");
            }
            for n in 0..10 {
                assert!(f_recursion_residual(&p, n).unwrap() < 1e-20);
            }
        }
        let r0 = riccati_residual(&v_profile(0, &f(prec, 3.0), prec).unwrap(), 0).unwrap();
        assert!(r0 < crate::special::ulp_scale(prec, 20));
    }

    #[test]
    fn f_profile_tracks_its_series() {
        let prec = 256;
        let s = f(prec, 500.0);
        let p = v_profile(4, &s, prec).unwrap();
        for n in 0..=4 {
            let ser = truncated_f(n, &p.eps, 3);
            let d = Float::with_val(prec, p.f(n) - &ser.value).abs();
            let bound = Float::with_val(prec, ser.first_omitted.abs_ref()) * 2u32 + 1e-60;
            assert!(d < bound, "n = {n}");
        }
    }

    #[test]
    fn f2_is_the_log_derivative_of_psi0() {
        let prec = 256;
        for s in [0.3, 2.0, 40.0] {
            assert!(f2_log_derivative_residual(&f(prec, s), prec).unwrap() < crate::special::ulp_scale(prec, 20));
        }
    }

    #[test]
    fn closed_potentials_agree() {
        let prec = 256;
        for s in [0.5, 3.0, 17.0] {
            let s = f(prec, s);
            for n in 0..=3 {
                let a = potential_w(n, &s, prec).unwrap();
                let b = potential_w_closed(n, &s, prec).unwrap().unwrap();
                assert!(Float::with_val(prec, a - b).abs() < 1e-60, "n = {n}");
            }
        }
        assert!(potential_w_closed(4, &f(prec, 1.0), prec).unwrap().is_none());
    }

    #[test]
    fn schrodinger_residual_small() {
        let prec = 192;
        let grid: Vec<Float> = (0..8).map(|i| f(prec, 0.5 + 2.5 * i as f64)).collect();
        for n in 0..=3 {
            let r = schrodinger_check(n, &grid, prec).unwrap();
            assert!(r.max_residual < 1e-10, "n = {n}: {}", r.max_residual);
        }
    }

    #[test]
    fn boundary_term_is_minus_pi() {
        let prec = 192;
        let b = boundary_term(prec).unwrap();
        let d = Float::with_val(prec, &b.value + pi(prec)).abs();
        assert!(d < 1e-8, "{}", b.value);
        assert!(b.value < 0);
        assert!(b.at_infinity.clone().abs() < 1e-100);
    }

    #[test]
    fn scaled_state_eigenvalue() {
        let prec = 128;
        let lam = f(prec, 2.5);
        let s = f(prec, 0.8);
        let j = scaled_ground_state(&lam, &s, 2, prec).unwrap();
        let pot = Float::with_val(prec, &j.d[0] * 2u32) / (Float::with_val(prec, s.square_ref()) * 9u32);
        let lhs = -Float::with_val(prec, &j.d[2] + pot);
        let rhs = -Float::with_val(prec, lam.square_ref()) * &j.d[0];
        assert!(Float::with_val(prec, lhs - rhs).abs() < 1e-30);
    }
}
