//! Darboux ladder over `H₀ = -∂² - 2/(9s²)`.
//!
//! Every `ψ_κ = √s B_{1/6}(κs)` solves `H₀ψ_κ = -κ²ψ_κ`. With
//! `h_N = -χ_N'/χ_N` and `A_N = ∂ + h_N`, the ladder is
//!
//! ```text
//! χ_N = A_{N-1} ... A_1 (√s B_{1/6}(κ_N s)),
//! W_{N-1} = h_N² - h_N' - κ_N²,   W_N = W_{N-1} + 2h_N' = W₀ - 2 Σ_{i≤N} (ln χ_i)'',
//! -χ_N'' + W_{N-1} χ_N = -κ_N² χ_N.
//! ```
//!
//! Everything is evaluated pointwise through Taylor jets.

use rug::{Float, Rational};

use crate::error::{QmsError, Result};
use crate::riccati::v0_closed_form;
use crate::special::{bessel_jet, pi, to_decimal, BesselKind, Jet};

const GUARD: u32 = 32;

#[derive(Clone, Debug)]
pub struct LadderSpec {
    levels: Vec<(Float, BesselKind)>,
}

impl LadderSpec {
    /// Levels `(κ_i, kind_i)`; `κ₁ = 1` and the `κ_i` strictly increase.
    pub fn new(levels: Vec<(Float, BesselKind)>) -> Result<Self> {
        if levels.is_empty() {
            return Err(QmsError::InvalidInput("a ladder needs at least one level".into()));
        }
        if levels[0].0 != 1 {
            return Err(QmsError::InvalidInput("the first kappa must be 1".into()));
        }
        if levels.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(QmsError::InvalidInput("kappas must be strictly increasing".into()));
        }
        Ok(LadderSpec { levels })
    }

    /// All-`K` ladder with the given `κ`s.
    pub fn decaying(kappas: &[f64], prec: u32) -> Result<Self> {
        Self::new(kappas.iter().map(|&k| (Float::with_val(prec, k), BesselKind::K)).collect())
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn kappa(&self, i: usize) -> &Float {
        &self.levels[i - 1].0
    }

    pub fn kind(&self, i: usize) -> BesselKind {
        self.levels[i - 1].1
    }

    fn check_level(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.len() {
            return Err(QmsError::InvalidInput(format!("level {n} outside 1..={}", self.len())));
        }
        Ok(())
    }
}

fn sixth() -> Rational {
    Rational::from((1, 6))
}

/// Refuses a value that cannot be told apart from zero: `|value|` at or
/// below the rounding level of the terms that produced it.
fn check_node(value: &Float, scale: &Float, level: usize, s: &Float, prec: u32) -> Result<()> {
    let mut floor = Float::with_val(scale.prec(), scale);
    floor >>= prec - 8;
    if value.is_zero() || Float::with_val(scale.prec(), value.abs_ref()) <= floor {
        return Err(QmsError::NodeEncountered {
            level,
            s: to_decimal(&Float::with_val(prec, s)),
        });
    }
    Ok(())
}

/// Jets of `χ_1, ..., χ_N` at one point.
#[derive(Clone, Debug)]
pub struct LadderJets {
    /// `chis[i - 1]` is `χ_i`, of order `m + N - i`.
    pub chis: Vec<Jet>,
    /// Order of the Bessel jet each `χ_i` started from.
    pub base_orders: Vec<usize>,
}

impl LadderJets {
    pub fn chi(&self, i: usize) -> &Jet {
        &self.chis[i - 1]
    }

    /// `h_i = -χ_i'/χ_i`.
    pub fn h(&self, i: usize) -> Jet {
        self.chi(i).log_derivative().neg()
    }

    /// `(ln χ_i)''` at the base point.
    pub fn log_second(&self, i: usize) -> Float {
        self.chi(i).log_derivative().d[1].clone()
    }
}

/// Jets of `χ_1..χ_N` with `χ_N` to order `m`; `χ_i` is carried to order
/// `m + N - i`, exactly what the outer factors `A_i` consume.
pub fn ladder_jets(spec: &LadderSpec, n: usize, s: &Float, m: usize, prec: u32) -> Result<LadderJets> {
    spec.check_level(n)?;
    let wp = prec + GUARD;
    let s = Float::with_val(wp, s);
    let mut chis: Vec<Jet> = Vec::with_capacity(n);
    let mut base_orders = Vec::with_capacity(n);
    for i in 1..=n {
        let order = m + n - i;
        let base = order + i - 1;
        base_orders.push(base);
        let mut f = bessel_jet(spec.kind(i), &sixth(), spec.kappa(i), &s, base, wp)?;
        let mut scale = Float::with_val(wp, f.d[0].abs_ref());
        for chi_j in &chis {
            let h = chi_j.log_derivative().neg();
            let df = f.derivative();
            let hf = h.mul(&f);
            scale = Float::with_val(wp, df.d[0].abs_ref()) + Float::with_val(wp, hf.d[0].abs_ref());
            f = df.add(&hf);
        }
        debug_assert_eq!(f.order(), order);
        check_node(&f.d[0], &scale, i, &s, prec)?;
        chis.push(f);
    }
    Ok(LadderJets { chis, base_orders })
}

/// Jet of `χ_N` to order `m`.
pub fn ladder_chi(spec: &LadderSpec, n: usize, s: &Float, m: usize, prec: u32) -> Result<Jet> {
    let jets = ladder_jets(spec, n, s, m, prec)?;
    let chi = jets.chis[n - 1].truncate(m);
    Ok(Jet::new(
        Float::with_val(prec, &chi.s),
        chi.d.iter().map(|v| Float::with_val(prec, v)).collect(),
    ))
}

/// `W₀ = -2/(9s²)`.
pub fn w0(s: &Float, prec: u32) -> Float {
    Float::with_val(prec, s * s).recip() * -2i32 / 9u32
}

/// `W_N` along the three available routes.
#[derive(Clone, Debug)]
pub struct LadderPotential {
    /// `W₀ - 2 Σ_{i≤N} (ln χ_i)''`.
    pub telescoped: Float,
    /// `h_N² + h_N' - κ_N²`, the factorised form at level `N`.
    pub factorised: Float,
    /// `W₀ + 2 Σ_{i≤N} (ln χ_i)''`, the opposite sign convention.
    pub opposite_sign: Float,
}

fn telescoped(jets: &LadderJets, upto: usize, s: &Float, wp: u32) -> (Float, Float) {
    let mut sum = Float::new(wp);
    for i in 1..=upto {
        sum += jets.log_second(i);
    }
    let base = w0(s, wp);
    let minus = Float::with_val(wp, &base - Float::with_val(wp, &sum * 2u32));
    let plus = Float::with_val(wp, &base + Float::with_val(wp, &sum * 2u32));
    (minus, plus)
}

pub fn ladder_w_routes(spec: &LadderSpec, n: usize, s: &Float, prec: u32) -> Result<LadderPotential> {
    let wp = prec + GUARD;
    let s_w = Float::with_val(wp, s);
    if n == 0 {
        let w = w0(&s_w, prec);
        return Ok(LadderPotential {
            telescoped: w.clone(),
            factorised: w.clone(),
            opposite_sign: w,
        });
    }
    let jets = ladder_jets(spec, n, &s_w, 2, prec)?;
    let (minus, plus) = telescoped(&jets, n, &s_w, wp);
    let h = jets.h(n);
    let k = spec.kappa(n);
    let fact = Float::with_val(wp, h.d[0].square_ref()) + &h.d[1] - Float::with_val(wp, k * k);
    Ok(LadderPotential {
        telescoped: Float::with_val(prec, minus),
        factorised: Float::with_val(prec, fact),
        opposite_sign: Float::with_val(prec, plus),
    })
}

/// `W_N = W₀ - 2 Σ_{i≤N} (ln χ_i)''`.
pub fn ladder_w(spec: &LadderSpec, n: usize, s: &Float, prec: u32) -> Result<Float> {
    Ok(ladder_w_routes(spec, n, s, prec)?.telescoped)
}

/// `|-χ_N'' + W_{N-1}χ_N + κ_N²χ_N| / max(|χ_N|, 1)`.
pub fn eigen_residual(spec: &LadderSpec, n: usize, s: &Float, prec: u32) -> Result<Float> {
    let wp = prec + GUARD;
    let s_w = Float::with_val(wp, s);
    let jets = ladder_jets(spec, n, &s_w, 2, prec)?;
    let (w_prev, _) = telescoped(&jets, n - 1, &s_w, wp);
    let chi = jets.chi(n);
    let k = spec.kappa(n);
    let r = -Float::with_val(wp, &chi.d[2]) + Float::with_val(wp, &w_prev * &chi.d[0])
        + Float::with_val(wp, k * k) * &chi.d[0];
    let denom = Float::with_val(wp, chi.d[0].abs_ref()).max(&Float::with_val(wp, 1));
    Ok(Float::with_val(prec, r.abs() / denom))
}

/// Largest pairwise gap among `h_{N-1}² + h_{N-1}' - κ_{N-1}²`,
/// `h_N² - h_N' - κ_N²` and `W_{N-1}`, with `h₀ = ψ₀'/ψ₀` and `κ₀ = 1`.
pub fn factorisation_consistency(spec: &LadderSpec, n: usize, s: &Float, prec: u32) -> Result<Float> {
    let wp = prec + GUARD;
    let s_w = Float::with_val(wp, s);
    let jets = ladder_jets(spec, n, &s_w, 2, prec)?;
    let (w_prev, _) = telescoped(&jets, n - 1, &s_w, wp);
    let (h_lo, k_lo) = if n == 1 {
        let psi0 = bessel_jet(BesselKind::K, &sixth(), &Float::with_val(wp, 1), &s_w, 2, wp)?;
        (psi0.log_derivative(), Float::with_val(wp, 1))
    } else {
        (jets.h(n - 1), Float::with_val(wp, spec.kappa(n - 1)))
    };
    let upper = Float::with_val(wp, h_lo.d[0].square_ref()) + &h_lo.d[1] - Float::with_val(wp, k_lo.square_ref());
    let h = jets.h(n);
    let k = spec.kappa(n);
    let lower = Float::with_val(wp, h.d[0].square_ref()) - &h.d[1] - Float::with_val(wp, k * k);
    let gaps = [
        Float::with_val(wp, &upper - &lower).abs(),
        Float::with_val(wp, &upper - &w_prev).abs(),
        Float::with_val(wp, &lower - &w_prev).abs(),
    ];
    let worst = gaps.into_iter().fold(Float::new(wp), |a, b| a.max(&b));
    Ok(Float::with_val(prec, worst))
}

/// `|(∂ + h₀)(-∂ + h₀)ψ - ψ - H₀ψ| / max(|ψ''|, 1)` for a test jet `ψ` of
/// order at least 2, with `h₀ = ψ₀'/ψ₀`.
pub fn factorisation_residual(test: &Jet, prec: u32) -> Result<Float> {
    let wp = prec + GUARD;
    let s = Float::with_val(wp, &test.s);
    let psi0 = bessel_jet(BesselKind::K, &sixth(), &Float::with_val(wp, 1), &s, 2, wp)?;
    let h0 = psi0.log_derivative();
    let f = Jet::new(s.clone(), test.d.iter().map(|v| Float::with_val(wp, v)).collect()).truncate(2);
    let inner = f.derivative().neg().add(&h0.mul(&f));
    let lhs = Float::with_val(wp, &inner.d[1] + Float::with_val(wp, &h0.d[0] * &inner.d[0])) - &f.d[0];
    let rhs = -Float::with_val(wp, &f.d[2]) + Float::with_val(wp, w0(&s, wp) * &f.d[0]);
    let scale = Float::with_val(wp, f.d[2].abs_ref()).max(&Float::with_val(wp, 1));
    Ok(Float::with_val(prec, (lhs - rhs).abs() / scale))
}

/// `|-ψ'' - 2ψ/(9s²) + κ²ψ| / max(|ψ|, 1)` for `ψ = √s B_{1/6}(κs)`.
pub fn bessel_eigen_residual(kind: BesselKind, kappa: &Float, s: &Float, prec: u32) -> Result<Float> {
    let wp = prec + GUARD;
    let s = Float::with_val(wp, s);
    let j = bessel_jet(kind, &sixth(), kappa, &s, 2, wp)?;
    let r = -Float::with_val(wp, &j.d[2]) + Float::with_val(wp, w0(&s, wp) * &j.d[0])
        + Float::with_val(wp, kappa * kappa) * &j.d[0];
    let scale = Float::with_val(wp, j.d[0].abs_ref()).max(&Float::with_val(wp, 1));
    Ok(Float::with_val(prec, r.abs() / scale))
}

/// `|h₀ - (1/(3s) - 2v₀ - 1)|` with `h₀` the logarithmic derivative of
/// `√s K_{1/6}(s)` and `v₀` from its closed form.
pub fn h0_recursion_residual(s: &Float, prec: u32) -> Result<Float> {
    let wp = prec + GUARD;
    let s = Float::with_val(wp, s);
    let psi0 = bessel_jet(BesselKind::K, &sixth(), &Float::with_val(wp, 1), &s, 1, wp)?;
    let h0 = psi0.log_derivative().d[0].clone();
    let (v0, _) = v0_closed_form(&s, wp)?;
    let rhs = Float::with_val(wp, 3u32 * &s).recip() - Float::with_val(wp, &v0 * 2u32) - 1u32;
    Ok(Float::with_val(prec, (h0 - rhs).abs()))
}

/// `(-1)^{N-1} χ_N e^{κ_N s}` next to its large-`s` limit
/// `∏_{i<N}(κ_N - κ_i) · √(π/(2κ_N))` for an all-`K` ladder.
pub fn asymptotic_signature(spec: &LadderSpec, n: usize, s: &Float, prec: u32) -> Result<(Float, Float)> {
    if (1..=n).any(|i| spec.kind(i) != BesselKind::K) {
        return Err(QmsError::InvalidInput("the signature limit is stated for all-K ladders".into()));
    }
    let wp = prec + GUARD;
    let s_w = Float::with_val(wp, s);
    let chi = ladder_chi(spec, n, &s_w, 0, wp)?;
    let k = spec.kappa(n);
    let mut observed = Float::with_val(wp, &chi.d[0] * Float::with_val(wp, k * &s_w).exp());
    if n % 2 == 0 {
        observed = -observed;
    }
    let mut predicted = (pi(wp) / Float::with_val(wp, k * 2u32)).sqrt();
    for i in 1..n {
        predicted *= Float::with_val(wp, k - spec.kappa(i));
    }
    Ok((Float::with_val(prec, observed), Float::with_val(prec, predicted)))
}
