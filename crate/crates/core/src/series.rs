//! Asymptotic polynomial families and truncated small-ε series.
//!
//! Three families are generated exactly and memoised per process:
//!
//! * parabolic `P_k(z)`, with `v_n ~ (n+1) ε Σ ε^k P_k(n+1)`;
//! * `γ_l(z)`, the coefficients of `f_n ~ -1 + ε Σ ε^l γ_l(n+1)`;
//! * cubic `P_l(z)`, with `v_n ~ (n+1) ε Σ ε^{2l} P_l(n+1)`.

use std::sync::{OnceLock, RwLock};

use rug::ops::Pow;
use rug::{Float, Rational};
use serde::Serialize;

use crate::exact_algebra::{Parity, UniPoly};

/// Truncation order used when the caller does not choose one.
pub const DEFAULT_ORDER: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    ParabolicP,
    Gamma,
    CubicP,
}

/// Which recursion a series or solution belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Parabolic,
    Cubic,
}

/// A generated prefix of one polynomial family.
#[derive(Clone, Debug, Serialize)]
pub struct PolyFamily {
    pub kind: FamilyKind,
    pub table: Vec<UniPoly>,
}

impl PolyFamily {
    pub fn generate(kind: FamilyKind, up_to: usize) -> Self {
        let table = (0..=up_to)
            .map(|k| match kind {
                FamilyKind::ParabolicP => parabolic_p(k),
                FamilyKind::Gamma => gamma_poly(k),
                FamilyKind::CubicP => cubic_p(k),
            })
            .collect();
        PolyFamily { kind, table }
    }

    pub fn generated_up_to(&self) -> usize {
        self.table.len().saturating_sub(1)
    }

    /// Checks the structural invariants of every entry and reports the first
    /// violation.
    pub fn check_invariants(&self) -> Result<(), String> {
        let one = Rational::from(1);
        let two = Rational::from(2);
        for (k, p) in self.table.iter().enumerate() {
            match self.kind {
                FamilyKind::ParabolicP => {
                    if p.degree() != Some(k) {
                        return Err(format!("P_{k} has degree {:?}", p.degree()));
                    }
                    let want = if k % 2 == 0 { Parity::Even } else { Parity::Odd };
                    if p.parity() != Some(want) {
                        return Err(format!("P_{k} has wrong parity"));
                    }
                    let lead_neg = p.leading_coeff().is_some_and(|c| *c < 0);
                    if lead_neg != (k % 2 == 1) {
                        return Err(format!("P_{k} has wrong leading sign"));
                    }
                }
                FamilyKind::Gamma => {
                    if k > 0 && p.eval(&one) + p.eval(&two) != 0 {
                        return Err(format!("gamma_{k}(1) + gamma_{k}(2) != 0"));
                    }
                }
                FamilyKind::CubicP => {
                    if p.degree() != Some(2 * k) || p.parity() != Some(Parity::Even) {
                        return Err(format!("cubic P_{k} is not even of degree {}", 2 * k));
                    }
                }
            }
        }
        Ok(())
    }
}

type Memo = RwLock<Vec<UniPoly>>;

fn memo(kind: FamilyKind) -> &'static Memo {
    static PARABOLIC: OnceLock<Memo> = OnceLock::new();
    static GAMMA: OnceLock<Memo> = OnceLock::new();
    static CUBIC: OnceLock<Memo> = OnceLock::new();
    let cell = match kind {
        FamilyKind::ParabolicP => &PARABOLIC,
        FamilyKind::Gamma => &GAMMA,
        FamilyKind::CubicP => &CUBIC,
    };
    cell.get_or_init(|| RwLock::new(Vec::new()))
}

/// Returns entry `k`, extending the table with `next(prefix)` which must
/// produce the entry following `prefix`.
fn memoised(kind: FamilyKind, k: usize, next: fn(&[UniPoly]) -> UniPoly) -> UniPoly {
    let table = memo(kind);
    if let Some(p) = table.read().unwrap().get(k) {
        return p.clone();
    }
    let mut w = table.write().unwrap();
    while w.len() <= k {
        let p = next(&w);
        w.push(p);
    }
    w[k].clone()
}

fn z_plus(a: i64) -> UniPoly {
    UniPoly::from_ints("z", &[a, 1])
}

fn parabolic_next(prev: &[UniPoly]) -> UniPoly {
    let Some(k) = prev.len().checked_sub(1) else {
        return UniPoly::one("z");
    };
    let (zp, zm) = (z_plus(1), z_plus(-1));
    let mut acc = UniPoly::zero("z");
    for i in 0..=k {
        let inner = &(&zp * &prev[i].shift(&Rational::from(1)))
            + &(&zm * &prev[i].shift(&Rational::from(-1)));
        acc = &acc + &(&prev[k - i] * &inner);
    }
    -acc
}

/// Parabolic asymptotic polynomial `P_k`, from
/// `-P_{k+1}(z) = Σ_{i+j=k} P_j(z)[(z+1)P_i(z+1) + (z-1)P_i(z-1)]`.
pub fn parabolic_p(k: usize) -> UniPoly {
    memoised(FamilyKind::ParabolicP, k, parabolic_next)
}

fn gamma_next(prev: &[UniPoly]) -> UniPoly {
    gamma_from(prev.len(), prev)
}

fn gamma_from(k: usize, lower: &[UniPoly]) -> UniPoly {
    let z = UniPoly::identity("z");
    let mut g = parabolic_p(k + 1);
    g = &g + &parabolic_p(k).scalar_mul(&Rational::from(3 * (k as i64 + 1)));
    let mut conv = UniPoly::zero("z");
    for i in 0..=k {
        conv = &conv + &(&parabolic_p(i) * &parabolic_p(k - i));
    }
    g = &g + &(&z * &conv);
    for (l, gl) in lower.iter().enumerate() {
        g = &g - &(gl * &parabolic_p(k - l));
    }
    g
}

/// `γ_l`, obtained by solving
/// `-P_{k+1} = 3(k+1)P_k + z Σ P_iP_j - Σ_{i+l=k} γ_l P_i` for the top `γ`.
pub fn gamma_poly(l: usize) -> UniPoly {
    memoised(FamilyKind::Gamma, l, gamma_next)
}

fn cubic_next(prev: &[UniPoly]) -> UniPoly {
    let Some(l) = prev.len().checked_sub(1) else {
        return UniPoly::one("z");
    };
    let sh = |p: &UniPoly, a: i64| p.shift(&Rational::from(a));
    let w1 = &z_plus(1) * &z_plus(-1);
    let w2 = &z_plus(1) * &z_plus(2);
    let w3 = &z_plus(-1) * &z_plus(-2);
    let mut acc = UniPoly::zero("z");
    for i in 0..=l {
        let (pi_p1, pi_m1) = (sh(&prev[i], 1), sh(&prev[i], -1));
        for j in 0..=l - i {
            let k = l - i - j;
            let bracket = &(&(&(&pi_p1 * &sh(&prev[j], -1)) * &w1)
                + &(&(&pi_p1 * &sh(&prev[j], 2)) * &w2))
                + &(&(&pi_m1 * &sh(&prev[j], -2)) * &w3);
            acc = &acc + &(&prev[k] * &bracket);
        }
    }
    -acc
}

/// Cubic asymptotic polynomial `P_l` from the triple-convolution recursion
/// with shifts `z±1`, `z±2`.
pub fn cubic_p(l: usize) -> UniPoly {
    memoised(FamilyKind::CubicP, l, cubic_next)
}

/// A truncated series value together with the size of the first omitted
/// term, a heuristic gauge of the truncation error.
#[derive(Clone, Debug)]
pub struct Truncated {
    pub value: Float,
    pub first_omitted: Float,
}

fn ladder_coeffs(flavor: Flavor, n: usize, k: usize) -> Vec<(usize, Rational)> {
    let z = Rational::from(n as u64 + 1);
    (0..=k)
        .map(|l| match flavor {
            Flavor::Parabolic => (l + 1, Rational::from(&z * &parabolic_p(l).eval(&z))),
            Flavor::Cubic => (2 * l + 1, Rational::from(&z * &cubic_p(l).eval(&z))),
        })
        .collect()
}

/// `v_n` through order `k` as an exact polynomial in `eps`.
pub fn truncated_v_symbolic(flavor: Flavor, n: usize, k: usize) -> UniPoly {
    let mut coeffs = Vec::new();
    for (pow, c) in ladder_coeffs(flavor, n, k) {
        if coeffs.len() <= pow {
            coeffs.resize(pow + 1, Rational::new());
        }
        coeffs[pow] = c;
    }
    UniPoly::from_coeffs("eps", coeffs)
}

/// `v_n` through order `k` evaluated at `eps` (working precision of `eps`).
pub fn truncated_v(flavor: Flavor, n: usize, eps: &Float, k: usize) -> Truncated {
    let value = truncated_v_symbolic(flavor, n, k).eval_real(eps);
    let (pow, c) = ladder_coeffs(flavor, n, k + 1).pop().unwrap();
    let first_omitted = Float::with_val(eps.prec(), eps.pow(pow as u32)) * c;
    Truncated {
        value,
        first_omitted: first_omitted.abs(),
    }
}

/// `f_n = -1 + ε Σ_{l≤k} ε^l γ_l(n+1)` as an exact polynomial in `eps`.
pub fn truncated_f_symbolic(n: usize, k: usize) -> UniPoly {
    let z = Rational::from(n as u64 + 1);
    let mut coeffs = vec![Rational::from(-1)];
    coeffs.extend((0..=k).map(|l| gamma_poly(l).eval(&z)));
    UniPoly::from_coeffs("eps", coeffs)
}

pub fn truncated_f(n: usize, eps: &Float, k: usize) -> Truncated {
    let value = truncated_f_symbolic(n, k).eval_real(eps);
    let z = Rational::from(n as u64 + 1);
    let c = gamma_poly(k + 1).eval(&z);
    let first_omitted = Float::with_val(eps.prec(), eps.pow(k as u32 + 2)) * c;
    Truncated {
        value,
        first_omitted: first_omitted.abs(),
    }
}

/// Lowest power of the variable with a nonzero coefficient.
pub fn lowest_order(p: &UniPoly) -> Option<usize> {
    p.coeffs().iter().position(|c| c.cmp0() != std::cmp::Ordering::Equal)
}

/// `v_n(v_{n+1} + v_{n-1} + 1) - (n+1)ε` with the order-`k` series
/// substituted; the linear recursion multiplied through by `v_n`.
pub fn parabolic_series_residual(n: usize, k: usize) -> UniPoly {
    let v = |m: usize| truncated_v_symbolic(Flavor::Parabolic, m, k);
    let prev = if n == 0 { UniPoly::zero("eps") } else { v(n - 1) };
    let bracket = &(&v(n + 1) + &prev) + &UniPoly::one("eps");
    let rhs = UniPoly::monomial("eps", 1, Rational::from(n as u64 + 1));
    &(&v(n) * &bracket) - &rhs
}

/// `v_n(v_{n+1}v_{n+2} + v_{n-1}v_{n-2} + v_{n+1}v_{n-1} + 1) - (n+1)ε`
/// with the order-`k` cubic series substituted (`v_{-1} = 0`).
pub fn cubic_series_residual(n: usize, k: usize) -> UniPoly {
    let v = |m: isize| {
        if m < 0 {
            UniPoly::zero("eps")
        } else {
            truncated_v_symbolic(Flavor::Cubic, m as usize, k)
        }
    };
    let n = n as isize;
    let bracket = &(&(&(&v(n + 1) * &v(n + 2)) + &(&v(n - 1) * &v(n - 2)))
        + &(&v(n + 1) * &v(n - 1)))
        + &UniPoly::one("eps");
    let rhs = UniPoly::monomial("eps", 1, Rational::from(n as i64 + 1));
    &(&v(n) * &bracket) - &rhs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(c: &[i64]) -> UniPoly {
        UniPoly::from_ints("z", c)
    }
    fn eps(c: &[i64]) -> UniPoly {
        UniPoly::from_ints("eps", c)
    }

    #[test]
    fn first_parabolic_polynomials() {
        assert_eq!(parabolic_p(0), z(&[1]));
        assert_eq!(parabolic_p(1), z(&[0, -2]));
        assert_eq!(parabolic_p(2), z(&[4, 0, 8]));
        assert_eq!(parabolic_p(3), z(&[0, -72, 0, -40]));
        assert_eq!(parabolic_p(4), z(&[240, 0, 928, 0, 224]));
    }

    #[test]
    fn parabolic_values_at_one() {
        let want: [i64; 12] = [
            1,
            -2,
            12,
            -112,
            1392,
            -21472,
            394752,
            -8421632,
            204525312,
            -5572091392,
            168331164672,
            -5585571889152,
        ];
        for (k, w) in want.iter().enumerate() {
            assert_eq!(parabolic_p(k).eval(&Rational::from(1)), *w, "k = {k}");
        }
    }

    #[test]
    fn gamma_table() {
        let g1 = &z(&[-1, 1]) * &z(&[-2, 1]);
        assert_eq!(gamma_poly(0), z(&[3, -1]));
        assert_eq!(gamma_poly(1), g1.scalar_mul(&Rational::from(2)));
        assert_eq!(gamma_poly(2), (&g1 * &z(&[-3, 2])).scalar_mul(&Rational::from(-4)));
        assert_eq!(gamma_poly(3), (&g1 * &z(&[14, -15, 5])).scalar_mul(&Rational::from(8)));
    }

    #[test]
    fn cubic_table() {
        assert_eq!(cubic_p(0), z(&[1]));
        assert_eq!(cubic_p(1), z(&[-3, 0, -3]));
        assert_eq!(cubic_p(2), z(&[81, 0, 198, 0, 27]));
        assert_eq!(cubic_p(3), z(&[-245, 0, -897, 0, -264, 0, -12]).scalar_mul(&Rational::from(27)));
        let at = |l: usize, n: i64| cubic_p(l).eval(&Rational::from(n));
        assert_eq!([at(1, 1), at(1, 2), at(1, 3), at(1, 4)], [-6, -15, -30, -51]);
        assert_eq!([at(2, 1), at(2, 2), at(2, 3), at(2, 4)], [306, 1305, 4050, 10161]);
    }

    #[test]
    fn family_invariants_hold() {
        for kind in [FamilyKind::ParabolicP, FamilyKind::Gamma] {
            PolyFamily::generate(kind, 16).check_invariants().unwrap();
        }
        PolyFamily::generate(FamilyKind::CubicP, 6).check_invariants().unwrap();
    }

    #[test]
    fn gamma_shift_identity() {
        for k in 0..=12 {
            let g = gamma_poly(k);
            let lhs = &g.shift(&Rational::from(1)) + &g;
            let rhs = if k == 0 {
                z(&[5, -2])
            } else {
                (&z(&[-1, 1]) * &parabolic_p(k).shift(&Rational::from(-1))).scalar_mul(&Rational::from(-2))
            };
            assert_eq!(lhs, rhs, "k = {k}");
        }
    }

    #[test]
    fn gamma_alternating_sum() {
        for k in 1..=8 {
            let (g, p) = (gamma_poly(k), parabolic_p(k));
            for n in 2..=12i64 {
                let mut sum = Rational::new();
                for j in 1..n {
                    let term = Rational::from(j) * p.eval(&Rational::from(j));
                    if (n - 1 - j) % 2 == 0 {
                        sum += term;
                    } else {
                        sum -= term;
                    }
                }
                let anchor = g.eval(&Rational::from(2)) / Rational::from(2);
                if (n - 1) % 2 == 0 {
                    sum -= anchor;
                } else {
                    sum += anchor;
                }
                let lhs = -g.eval(&Rational::from(n + 1)) / Rational::from(2);
                assert_eq!(lhs, sum, "k = {k}, n = {n}");
            }
        }
    }

    #[test]
    fn symbolic_truncations() {
        assert_eq!(truncated_v_symbolic(Flavor::Parabolic, 0, 3), eps(&[0, 1, -2, 12, -112]));
        assert_eq!(
            truncated_v_symbolic(Flavor::Cubic, 1, 2),
            eps(&[0, 2, 0, -30, 0, 2610])
        );
        assert_eq!(truncated_f_symbolic(0, 0), eps(&[-1, 2]));
        assert_eq!(truncated_f_symbolic(1, 0), eps(&[-1, 1]));
        assert_eq!(truncated_f_symbolic(2, 1), eps(&[-1, 0, 4]));
    }

    #[test]
    fn numeric_truncation_vanishes_with_eps() {
        let e = Float::with_val(128, 1e-30);
        let t = truncated_v(Flavor::Parabolic, 3, &e, DEFAULT_ORDER);
        assert!(t.value.to_f64() < 1e-28);
        let e = Float::with_val(128, 0.01);
        let t = truncated_v(Flavor::Parabolic, 0, &e, 3);
        let want = 0.01 - 2e-4 + 12e-6 - 112e-8;
        assert!((t.value.to_f64() - want).abs() < 1e-17);
        assert!((t.first_omitted.to_f64() - 1392e-10).abs() < 1e-20);
    }

    #[test]
    fn series_solves_recursions_to_order() {
        for k in 0..=6 {
            for n in 0..=5 {
                let r = parabolic_series_residual(n, k);
                assert!(lowest_order(&r).map_or(true, |o| o >= k + 2), "parabolic n={n} k={k}");
            }
        }
        for k in 0..=3 {
            for n in 0..=5 {
                let r = cubic_series_residual(n, k);
                assert!(lowest_order(&r).map_or(true, |o| o >= 2 * k + 3), "cubic n={n} k={k}");
            }
        }
    }
}
