//! Regeneration of every quoted number, grouped into thirteen numbered
//! criteria. Each criterion is a list of named checks plus a time budget.

use std::time::Instant;

use rug::ops::Pow;
use rug::{Float, Rational};
use serde::Serialize;

use crate::darboux::{self, LadderSpec};
use crate::error::Result;
use crate::exact_algebra::{BiPoly, UniPoly};
use crate::riccati;
use crate::semiclassical;
use crate::series::{self, cubic_p, gamma_poly, lowest_order, parabolic_p, Flavor};
use crate::solver::{cubic_spot_checks, shoot_cubic, shoot_parabolic, CubicOptions};
use crate::special::{gamma_rational, parse_real, pi, to_decimal_digits, BesselKind};
use crate::tau::{self, build_u, Identity};

/// How hard to push the depth-dependent criteria.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Depth {
    Full,
    Quick,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub id: u32,
    pub title: &'static str,
    pub checks: Vec<Check>,
    pub elapsed_s: f64,
    pub budget_s: f64,
}

impl CriterionReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// `PASS 5 triangle test (12.3s)` or `FAIL ...` with the failing checks.
    pub fn summary_line(&self) -> String {
        let status = if self.pass() { "PASS" } else { "FAIL" };
        let mut line = format!("{status} {:>2} {} ({:.2}s)", self.id, self.title, self.elapsed_s);
        let failed: Vec<&str> = self.failures().map(|c| c.name.as_str()).collect();
        if !failed.is_empty() {
            line.push_str(&format!(" failing: {}", failed.join(", ")));
        }
        line
    }
}

pub const CRITERIA: [(u32, &str, f64); 13] = [
    (1, "parabolic polynomials P0..P3", 1.0),
    (2, "gamma polynomials and their shift identity", 5.0),
    (3, "cubic polynomials P1, P2", 5.0),
    (4, "series substituted into the recursions", 10.0),
    (5, "shooting, closed form and series agree", 60.0),
    (6, "tau tower divisibility and identities", 60.0),
    (7, "tower ratios reproduce the numeric sequence", 30.0),
    (8, "Riccati residuals", 30.0),
    (9, "potentials and Schroedinger residuals", 60.0),
    (10, "boundary term and quadratic form", 60.0),
    (11, "Darboux ladder", 60.0),
    (12, "cubic shooting", 120.0),
    (13, "semiclassical series and comparison", 10.0),
];

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    fn push(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.0.push(Check {
            name: name.into(),
            pass,
            detail: detail.into(),
        });
    }

    /// Records a failed check for an error and returns `None`.
    fn attempt<T>(&mut self, name: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.push(name, false, format!("error: {e}"));
                None
            }
        }
    }

    fn below(&mut self, name: impl Into<String>, value: &Float, tol: f64) {
        let pass = value.is_finite() && *value < tol;
        self.push(name, pass, format!("{} < {tol:e}", short(value)));
    }

    fn equal<T: PartialEq + std::fmt::Display>(&mut self, name: impl Into<String>, got: &T, want: &T) {
        self.push(name, got == want, format!("got {got}, expected {want}"));
    }
}

fn short(x: &Float) -> String {
    to_decimal_digits(x, 6)
}

fn abs_diff(a: &Float, b: &Float) -> Float {
    let p = a.prec().max(b.prec());
    Float::with_val(p, a - b).abs()
}

fn real(s: &str, prec: u32) -> Float {
    parse_real(s, prec).expect("literal parses")
}

/// `a z + b` over the rationals.
fn lin(a: i64, b: i64) -> UniPoly {
    UniPoly::from_ints("z", &[b, a])
}

fn zpoly(c: &[i64]) -> UniPoly {
    UniPoly::from_ints("z", c)
}

fn scaled(c: i64, p: &UniPoly) -> UniPoly {
    p.scalar_mul(&Rational::from(c))
}

fn bp(terms: &[(u32, u32, i64)]) -> BiPoly {
    BiPoly::from_int_terms(terms)
}

/// Runs one criterion and appends its runtime check.
pub fn run_criterion(id: u32, depth: Depth) -> Option<CriterionReport> {
    let &(_, title, budget_s) = CRITERIA.iter().find(|c| c.0 == id)?;
    let start = Instant::now();
    let mut c = Checks::default();
    match id {
        1 => parabolic_polynomials(&mut c),
        2 => gamma_polynomials(&mut c),
        3 => cubic_polynomials(&mut c),
        4 => series_residuals(&mut c),
        5 => triangle(&mut c),
        6 => tau_tower(&mut c, depth),
        7 => ratio_consistency(&mut c),
        8 => riccati_residuals(&mut c, depth),
        9 => potentials(&mut c, depth),
        10 => boundary(&mut c),
        11 => ladder(&mut c),
        12 => cubic_shooting(&mut c),
        13 => semiclassical_checks(&mut c),
        _ => unreachable!(),
    }
    let elapsed_s = start.elapsed().as_secs_f64();
    c.push(
        "runtime",
        elapsed_s < budget_s,
        format!("{elapsed_s:.2}s < {budget_s}s"),
    );
    Some(CriterionReport {
        id,
        title,
        checks: c.0,
        elapsed_s,
        budget_s,
    })
}

pub fn run_all(depth: Depth) -> Vec<CriterionReport> {
    CRITERIA.iter().filter_map(|&(id, _, _)| run_criterion(id, depth)).collect()
}

fn parabolic_polynomials(c: &mut Checks) {
    let quoted = [
        zpoly(&[1]),
        zpoly(&[0, -2]),
        scaled(4, &zpoly(&[1, 0, 2])),
        scaled(-8, &zpoly(&[0, 9, 0, 5])),
    ];
    for (k, want) in quoted.iter().enumerate() {
        c.equal(format!("P{k}"), &parabolic_p(k), want);
    }
}

fn gamma_polynomials(c: &mut Checks) {
    let (z1, z2) = (lin(1, -1), lin(1, -2));
    let quoted = [
        scaled(-1, &lin(1, -3)),
        scaled(2, &(&z1 * &z2)),
        scaled(-4, &(&(&z1 * &z2) * &lin(2, -3))),
        scaled(8, &(&(&z1 * &z2) * &zpoly(&[14, -15, 5]))),
    ];
    for (l, want) in quoted.iter().enumerate() {
        c.equal(format!("gamma{l}"), &gamma_poly(l), want);
    }
    let one = Rational::from(1);
    let minus_one = Rational::from(-1);
    let mut shift_bad = Vec::new();
    let mut anchor_bad = Vec::new();
    for k in 0..=12 {
        let g = gamma_poly(k);
        let lhs = &g.shift(&one) + &g;
        let rhs = if k == 0 {
            &zpoly(&[3]) - &scaled(2, &z1)
        } else {
            scaled(-2, &(&z1 * &parabolic_p(k).shift(&minus_one)))
        };
        if lhs != rhs {
            shift_bad.push(k);
        }
        if k > 0 {
            let sum = Rational::from(g.eval(&Rational::from(1)) + g.eval(&Rational::from(2)));
            if sum != 0 {
                anchor_bad.push(k);
            }
        }
    }
    c.push("shift-identity k<=12", shift_bad.is_empty(), format!("failing k: {shift_bad:?}"));
    c.push("anchor gamma_k(1)+gamma_k(2)=0 k<=12", anchor_bad.is_empty(), format!("failing k: {anchor_bad:?}"));
}

fn cubic_polynomials(c: &mut Checks) {
    c.equal("cubic P1", &cubic_p(1), &scaled(-3, &zpoly(&[1, 0, 1])));
    let p2 = cubic_p(2);
    c.equal("cubic P2(1)", &p2.eval(&Rational::from(1)), &Rational::from(306));
    c.equal("cubic P2(2)", &p2.eval(&Rational::from(2)), &Rational::from(1305));
    let shape = zpoly(&[9, 0, 22, 0, 3]);
    match p2.exact_div(&shape) {
        Ok(q) if q.degree() == Some(0) => {
            let factor = q.coeff(0);
            c.push("cubic P2 prefactor", factor == 9, format!("P2 = {factor}(3z^4+22z^2+9)"));
        }
        _ => c.push("cubic P2 prefactor", false, format!("P2 = {p2} is not a multiple of {shape}")),
    }
}

fn series_residuals(c: &mut Checks) {
    let mut bad = Vec::new();
    for k in 0..=6 {
        for n in 0..=5 {
            let r = series::parabolic_series_residual(n, k);
            if lowest_order(&r).is_some_and(|o| o < k + 2) {
                bad.push((k, n));
            }
        }
    }
    c.push("parabolic residual O(eps^(K+2))", bad.is_empty(), format!("failing (K, n): {bad:?}"));
    let mut bad = Vec::new();
    for k in 0..=6 {
        for n in 0..=5 {
            let r = series::cubic_series_residual(n, k);
            if lowest_order(&r).is_some_and(|o| o < 2 * k + 3) {
                bad.push((k, n));
            }
        }
    }
    c.push("cubic residual O(eps^(2K+3))", bad.is_empty(), format!("failing (K, n): {bad:?}"));
}

fn triangle(c: &mut Checks) {
    let prec = 512;
    let eps = real("0.01", prec);
    let Some(seq) = c.attempt("shoot", shoot_parabolic(&eps, 40, prec)) else { return };
    let s = Float::with_val(prec, Float::with_val(prec, &eps * 6u32).recip_ref());
    if let Some((v0, _)) = c.attempt("closed form", riccati::v0_closed_form(&s, prec)) {
        c.below("shot vs closed form", &abs_diff(&seq.v[0], &v0), 1e-60);
    }
    let series = series::truncated_v(Flavor::Parabolic, 0, &eps, 8);
    let diff = abs_diff(&seq.v[0], &series.value);
    c.below("shot vs series K=8", &diff, 1e-12);
    let eps_hi = real("0.01", prec + 64);
    if let Some(hi) = c.attempt("shoot +64 bits", shoot_parabolic(&eps_hi, 40, prec + 64)) {
        c.below("precision shift", &abs_diff(&seq.v[0], &hi.v[0]), 1e-90);
    }
}

fn tau_tower(c: &mut Checks, depth: Depth) {
    let (n_max, id_max) = match depth {
        Depth::Full => (20, 15),
        Depth::Quick => (14, 10),
    };
    let Some(t) = c.attempt("build", build_u(n_max)) else { return };
    c.push("exact divisions", t.built_to() == n_max, format!("built to n = {}", t.built_to()));
    let mut bad = Vec::new();
    for n in 3..=n_max {
        match tau::tau(&t, n) {
            Ok(p) if p.degree_x() == Some(n as u32 + 1) => {}
            _ => bad.push(n),
        }
    }
    c.push(format!("deg_x tau_n = n+1 for 2<n<={n_max}"), bad.is_empty(), format!("failing n: {bad:?}"));

    let eps = BiPoly::eps();
    let get = |r: Result<&BiPoly>| r.cloned().unwrap_or_else(|_| BiPoly::zero());
    let (u, q, p) = (|k| get(t.u(k)), |k| get(t.q(k)), |k| get(t.p(k)));
    c.equal("u0+u1 = q_-1 = eps", &(&u(0) + &u(1)), &eps);
    c.equal("q_-1", &q(-1), &eps);
    c.equal("q0", &q(0), &bp(&[(1, 0, 1), (0, 1, 1)]));
    c.equal("q0 u0 = u1 + u2", &(&q(0) * &u(0)), &(&u(1) + &u(2)));
    c.equal("q2", &q(2), &bp(&[(1, 1, 1), (1, 2, 2), (0, 2, -1)]));
    c.equal("q3", &q(3), &bp(&[(2, 1, -5), (1, 1, -2), (1, 2, -2), (0, 3, 3), (0, 2, 2)]));
    c.equal("p0", &p(0), &bp(&[(1, 1, 3), (1, 2, 6), (0, 2, -3)]));
    c.equal("p0 = 3 q2", &p(0), &q(2).scalar_mul(&Rational::from(3)));
    c.equal("p1", &p(1), &bp(&[(1, 2, -18), (1, 1, -3), (0, 2, 18), (0, 1, -5), (0, 3, 2)]));
    let five_eps = BiPoly::monomial(0, 1, Rational::from(5));
    let six_eps = BiPoly::monomial(0, 1, Rational::from(6));
    c.equal("x p1 = 5 eps u3 + u4", &(&BiPoly::x() * &p(1)), &(&(&five_eps * &u(3)) + &u(4)));
    c.equal("p2 u1 = 6 eps u4 + u5", &(&p(2) * &u(1)), &(&(&six_eps * &u(4)) + &u(5)));
    c.equal("u1 = eps - x", &u(1), &bp(&[(0, 1, 1), (1, 0, -1)]));
    c.equal(
        "p2",
        &p(2),
        &bp(&[(2, 1, 3), (2, 2, 18), (1, 1, 3), (1, 2, 30), (1, 3, 18), (0, 3, -27), (0, 2, -3)]),
    );
    for id in Identity::ALL {
        match tau::verify_all(&t, id, id_max) {
            Ok(checks) => {
                let failed: Vec<i64> = checks.iter().filter(|k| !k.pass).map(|k| k.n).collect();
                let pass = !checks.is_empty() && failed.is_empty();
                let detail = format!("{} indices, failing n: {failed:?}", checks.len());
                c.push(format!("identity {id} n<={id_max}"), pass, detail);
            }
            Err(e) => c.push(format!("identity {id}"), false, format!("error: {e}")),
        }
    }
}

fn ratio_consistency(c: &mut Checks) {
    let prec = 256;
    let n_max = 12;
    let eps = real("0.01", prec);
    let Some(seq) = c.attempt("shoot", shoot_parabolic(&eps, n_max + 4, prec)) else { return };
    let Some(t) = c.attempt("build", build_u(n_max as i64 + 1)) else { return };
    let wp = prec + 256;
    let x = Float::with_val(wp, &seq.v[0]);
    let e = Float::with_val(wp, &eps);
    let mut worst = 0.0f64;
    let mut bad = Vec::new();
    for n in 1..=n_max {
        let Some(r) = c.attempt("ratio", t.v_ratio(n as i64, &x, &e)) else { return };
        let diff = abs_diff(&r, &seq.v[n]);
        let mut slack = Float::with_val(64, seq.v[n].abs_ref());
        slack >>= prec - 4;
        let bound = Float::with_val(64, &seq.errors[n] + &slack);
        if diff > bound {
            bad.push(n);
        }
        worst = worst.max((diff / bound).to_f64());
    }
    c.push(
        "u-ratios within certified error n<=12",
        bad.is_empty(),
        format!("worst |ratio - v_n| / bound = {worst:.3}, failing n: {bad:?}"),
    );
}

fn riccati_residuals(c: &mut Checks, depth: Depth) {
    let prec = 256;
    let points: &[f64] = match depth {
        Depth::Full => &[2.0, 5.0, 10.0, 50.0],
        Depth::Quick => &[2.0, 50.0],
    };
    for &sv in points {
        let s = Float::with_val(prec, sv);
        let Some(prof) = c.attempt(&format!("profile s={sv}"), riccati::v_profile(11, &s, prec)) else { continue };
        let mut ric = Float::new(prec);
        let mut rec = Float::new(prec);
        for n in 0..=10 {
            if let Some(r) = c.attempt("riccati", riccati::riccati_residual(&prof, n)) {
                ric = ric.max(&r);
            }
            if let Some(r) = c.attempt("f recursion", riccati::f_recursion_residual(&prof, n)) {
                rec = rec.max(&r);
            }
        }
        c.below(format!("riccati s={sv}"), &ric, 1e-20);
        c.below(format!("f recursion s={sv}"), &rec, 1e-20);
        if let Some(r) = c.attempt("f2", riccati::f2_log_derivative_residual(&s, prec)) {
            c.below(format!("f2 = psi0'/psi0 s={sv}"), &r, 1e-20);
        }
    }
}

fn potentials(c: &mut Checks, depth: Depth) {
    let prec = 256;
    let grid: Vec<f64> = vec![0.5, 1.0, 2.0, 3.5, 5.0, 10.0, 20.0];
    for n in 0..=3 {
        let mut worst = Float::new(prec);
        for &sv in &grid {
            let s = Float::with_val(prec, sv);
            let both = riccati::potential_w(n, &s, prec).and_then(|w| Ok((w, riccati::potential_w_closed(n, &s, prec)?)));
            let Some((w, Some(closed))) = c.attempt(&format!("W{n} s={sv}"), both) else { continue };
            let scale = Float::with_val(prec, w.abs_ref()).max(&Float::with_val(prec, 1));
            worst = worst.max(&(abs_diff(&w, &closed) / scale));
        }
        let tol = (Float::with_val(64, 1) >> (prec - 40)).to_f64();
        c.below(format!("W{n} closed form"), &worst, tol);
    }
    let points = match depth {
        Depth::Full => 40,
        Depth::Quick => 12,
    };
    let grid: Vec<Float> = (0..points)
        .map(|i| {
            let t = i as f64 / (points - 1) as f64;
            Float::with_val(prec, 0.5 * 40f64.powf(t))
        })
        .collect();
    for n in 0..=2 {
        if let Some(r) = c.attempt(&format!("schroedinger n={n}"), riccati::schrodinger_check(n, &grid, prec)) {
            c.below(format!("schroedinger n={n} on [0.5, 20]"), &r.max_residual, 1e-10);
        }
    }
}

fn boundary(c: &mut Checks) {
    let prec = 128;
    let minus_pi = -pi(prec);
    // Γ(1/6)Γ(-1/6)/12 = -π by the reflection formula
    let oracle = gamma_rational(&Rational::from((1, 6)), prec)
        .and_then(|a| Ok(a * gamma_rational(&Rational::from((-1, 6)), prec)? / 12u32));
    if let Some(o) = c.attempt("gamma oracle", oracle) {
        c.below("gamma oracle equals -pi", &abs_diff(&o, &minus_pi), 1e-30);
    }
    if let Some(b) = c.attempt("boundary term", riccati::boundary_term(prec)) {
        c.below("boundary term = -pi", &abs_diff(&b.value, &minus_pi), 1e-8);
        c.push("boundary term negative", b.value < 0, short(&b.value));
    }
    if let Some(q) = c.attempt("quadratic form", riccati::quadratic_form_identity(prec, 60.0)) {
        c.below("quadratic form relative mismatch", &q.relative_mismatch, 1e-6);
    }
}

fn ladder(c: &mut Checks) {
    let prec = 256;
    let Some(spec) = c.attempt("ladder spec", LadderSpec::decaying(&[1.0, 2.0, 3.0, 4.0], prec)) else { return };
    for &sv in &[0.5, 2.0, 8.0] {
        let s = Float::with_val(prec, sv);
        for n in 1..=4 {
            if let Some(r) = c.attempt("eigen", darboux::eigen_residual(&spec, n, &s, prec)) {
                c.below(format!("eigen N={n} s={sv}"), &r, 1e-18);
            }
            if let Some(w) = c.attempt("routes", darboux::ladder_w_routes(&spec, n, &s, prec)) {
                c.below(format!("W_N two routes N={n} s={sv}"), &abs_diff(&w.telescoped, &w.factorised), 1e-18);
            }
        }
        for kappa in [1.0, 2.0, 3.5] {
            let k = Float::with_val(prec, kappa);
            for kind in [BesselKind::K, BesselKind::I] {
                if let Some(r) = c.attempt("bessel state", darboux::bessel_eigen_residual(kind, &k, &s, prec)) {
                    c.below(format!("{kind:?} state kappa={kappa} s={sv}"), &r, 1e-18);
                }
            }
        }
    }
}

fn cubic_shooting(c: &mut Checks) {
    let prec = 256;
    let eps = real("0.02", prec);
    let Some(seq) = c.attempt("shoot", shoot_cubic(&eps, 12, prec, &CubicOptions::default())) else { return };
    for (name, r) in cubic_spot_checks(&eps, &seq.v) {
        c.below(name, &r.abs(), 1e-20);
    }
    // v_n = (n+1)ε Σ_l c_l ε^{2l}
    let quoted: [&[i64]; 4] = [&[1, -6, 306], &[1, -15, 1305], &[1, -30], &[1, -51]];
    for (n, coeffs) in quoted.iter().enumerate() {
        let z = Rational::from(n as i64 + 1);
        let exact: Vec<Rational> = (0..coeffs.len()).map(|l| cubic_p(l).eval(&z)).collect();
        let quoted_r: Vec<Rational> = coeffs.iter().map(|&x| Rational::from(x)).collect();
        c.push(
            format!("v{n} coefficients"),
            exact == quoted_r,
            format!("exact {exact:?}, quoted {coeffs:?}"),
        );
        let mut sum = Float::new(prec);
        for (l, coeff) in coeffs.iter().enumerate() {
            sum += Float::with_val(prec, eps.clone().pow(2 * l as u32)) * *coeff;
        }
        let trunc = sum * Float::with_val(prec, &eps * (n as u32 + 1));
        let l_next = coeffs.len();
        let next = Float::with_val(prec, eps.clone().pow(2 * l_next as u32 + 1))
            * (n as u32 + 1)
            * cubic_p(l_next).eval(&z);
        let tol = Float::with_val(prec, next.abs() * 2u32);
        let diff = abs_diff(&seq.v[n], &trunc);
        c.push(
            format!("v{n} vs truncated series"),
            diff <= tol,
            format!("{} <= 2 x next omitted term {}", short(&diff), short(&tol)),
        );
    }
}

fn semiclassical_checks(c: &mut Checks) {
    let s = semiclassical::semiclassical_series(9);
    c.equal("3r^2 coefficient of x", &s.x_coeffs[1], &Rational::from((2, 3)));
    c.equal("3r^2 coefficient of x^3", &s.x_coeffs[3], &Rational::from((-8, 81)));
    let r2_1 = Rational::from(&s.x_coeffs[1] / 3u32);
    let r2_3 = Rational::from(&s.x_coeffs[3] / 3u32);
    c.equal("r^2 coefficient of x", &r2_1, &Rational::from((2, 9)));
    c.equal("r^2 coefficient of x^3", &r2_3, &Rational::from((-8, 243)));
    let odd_only = s.x_coeffs.iter().step_by(2).all(|q| *q == 0);
    c.push("only odd powers of x", odd_only, "");
    c.equal("v_n coefficient of eps_n", &s.eps_coeffs[1], &Rational::from(1));
    c.equal("v_n coefficient of eps_n^3", &s.eps_coeffs[3], &Rational::from(-3));
    let rows = semiclassical::quantum_compare(9);
    c.push(
        "eps_n^3 matches exact leading order",
        rows[1].matches && rows[1].exact_leading == "-3",
        format!("semiclassical {}, exact {}", rows[1].semiclassical, rows[1].exact_leading),
    );
    let quoted_c5 = Rational::from((-81, 8));
    c.push(
        "eps_n^5 sign mismatch reported",
        rows[2].sign_mismatch,
        format!(
            "semiclassical {}, exact leading {}, quoted {quoted_c5}",
            rows[2].semiclassical, rows[2].exact_leading
        ),
    );
    let prec = 128;
    let mut worst = Float::new(prec);
    for k in -30..=30 {
        let r = Float::with_val(prec, 10f64.powf(k as f64 / 10.0));
        let x = semiclassical::rtilde(&r) * 9u32;
        match semiclassical::round_trip_residual(&x) {
            Ok(res) => worst = worst.max(&res),
            Err(e) => {
                c.push("round trip", false, format!("error: {e}"));
                return;
            }
        }
    }
    c.below("round trip at 128 bits", &worst, 1e-30);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_criteria_pass() {
        for id in [1, 2, 3, 4] {
            let r = run_criterion(id, Depth::Quick).unwrap();
            assert!(r.pass(), "{}", r.summary_line());
        }
    }

    #[test]
    fn summary_lines_name_failures() {
        let r = run_criterion(13, Depth::Quick).unwrap();
        let line = r.summary_line();
        assert!(line.starts_with("FAIL 13"));
        assert!(line.contains("eps_n^5 sign mismatch reported"));
        assert_eq!(r.failures().count(), 1);
    }

    #[test]
    fn unknown_criterion() {
        assert!(run_criterion(14, Depth::Full).is_none());
    }
}
