//! Globally adaptive Gauss–Kronrod (7/15-point) quadrature at arbitrary
//! precision.

use rug::Float;

use crate::error::{QmsError, Result};
use crate::special::to_decimal;

const XGK: [&str; 8] = [
    "0.991455371120812639206854697526328516642044",
    "0.949107912342758524526189684047851262400771",
    "0.864864423359769072789712788640926201210972",
    "0.741531185599394439863864773280788407074148",
    "0.586087235467691130294144838258729598436781",
    "0.405845151377397166906606412076961463347382",
    "0.207784955007898467600689403773244913479784",
    "0",
];

const WGK: [&str; 8] = [
    "0.0229353220105292249637320080589695919935608",
    "0.0630920926299785532907006631892042866650712",
    "0.104790010322250183839876322541518017443757",
    "0.14065325971552591874518959051023792039989",
    "0.169004726639267902826583426598550284106245",
    "0.190350578064785409913256402421013682826078",
    "0.204432940075298892414161999234649084716518",
    "0.209482141084727828012999174891714263697762",
];

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7)
const WG: [&str; 4] = [
    "0.129484966168869693270611432679082018328587",
    "0.279705391489276667901467771423779582486925",
    "0.381830050505118944950369775488975133878365",
    "0.417959183673469387755102040816326530612245",
];

/// The tabulated nodes carry about 42 digits, which caps attainable accuracy
/// near `1e-40` relative regardless of the working precision.
pub const RULE_DIGITS: u32 = 42;

#[derive(Clone, Debug)]
pub struct QuadResult {
    pub value: Float,
    pub error: Float,
    pub intervals: usize,
}

struct Rule {
    xgk: Vec<Float>,
    wgk: Vec<Float>,
    wg: Vec<Float>,
}

impl Rule {
    fn new(prec: u32) -> Self {
        let p = |s: &str| Float::with_val(prec, Float::parse(s).expect("tabulated constant"));
        Rule {
            xgk: XGK.iter().map(|s| p(s)).collect(),
            wgk: WGK.iter().map(|s| p(s)).collect(),
            wg: WG.iter().map(|s| p(s)).collect(),
        }
    }

    fn apply<F>(&self, f: &mut F, a: &Float, b: &Float, prec: u32) -> Result<(Float, Float)>
    where
        F: FnMut(&Float) -> Result<Float>,
    {
        let center = Float::with_val(prec, a + b) / 2u32;
        let half = Float::with_val(prec, b - a) / 2u32;
        let mut kron = Float::new(prec);
        let mut gauss = Float::new(prec);
        for j in 0..8 {
            let dx = Float::with_val(prec, &half * &self.xgk[j]);
            let vals = if j == 7 {
                vec![f(&center)?]
            } else {
                vec![
                    f(&Float::with_val(prec, &center - &dx))?,
                    f(&Float::with_val(prec, &center + &dx))?,
                ]
            };
            for v in &vals {
                kron += Float::with_val(prec, v * &self.wgk[j]);
                if j % 2 == 1 {
                    gauss += Float::with_val(prec, v * &self.wg[j / 2]);
                }
            }
        }
        kron *= &half;
        gauss *= &half;
        let err = Float::with_val(prec, &kron - &gauss).abs();
        Ok((kron, err))
    }
}

/// Integrates `f` over `[a, b]` until the estimated error is below
/// `max(rel_tol·|I|, abs_tol)`.
pub fn integrate<F>(mut f: F, a: &Float, b: &Float, prec: u32, rel_tol: f64, abs_tol: f64) -> Result<QuadResult>
where
    F: FnMut(&Float) -> Result<Float>,
{
    const MAX_INTERVALS: usize = 4000;
    let rule = Rule::new(prec);
    let mut pieces: Vec<(Float, Float, Float, Float)> = Vec::new();
    let (v, e) = rule.apply(&mut f, a, b, prec)?;
    pieces.push((Float::with_val(prec, a), Float::with_val(prec, b), v, e));
    loop {
        let mut total = Float::new(prec);
        let mut err = Float::new(prec);
        let mut worst = 0;
        for (i, p) in pieces.iter().enumerate() {
            total += &p.2;
            err += &p.3;
            if p.3 > pieces[worst].3 {
                worst = i;
            }
        }
        let target = (Float::with_val(prec, total.abs_ref()) * rel_tol).max(&Float::with_val(prec, abs_tol));
        if err <= target {
            return Ok(QuadResult {
                value: total,
                error: err,
                intervals: pieces.len(),
            });
        }
        if pieces.len() >= MAX_INTERVALS {
            return Err(QmsError::QuadratureFailure {
                a: to_decimal(a),
                b: to_decimal(b),
            });
        }
        let (lo, hi, _, _) = pieces.swap_remove(worst);
        let mid = Float::with_val(prec, &lo + &hi) / 2u32;
        let (v1, e1) = rule.apply(&mut f, &lo, &mid, prec)?;
        let (v2, e2) = rule.apply(&mut f, &mid, &hi, prec)?;
        pieces.push((lo, mid.clone(), v1, e1));
        pieces.push((mid, hi, v2, e2));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::float::Constant;
    use rug::ops::Pow;

    #[test]
    fn polynomials_up_to_degree_22_are_exact_on_one_panel() {
        let prec = 160;
        let (a, b) = (Float::with_val(prec, -1), Float::with_val(prec, 1));
        let rule = Rule::new(prec);
        let mut f = |x: &Float| Ok(Float::with_val(prec, x.pow(22u32)) + 1u32);
        let (v, _) = rule.apply(&mut f, &a, &b, prec).unwrap();
        let want = Float::with_val(prec, 2) / 23u32 + 2u32;
        assert!(Float::with_val(prec, v - want).abs().to_f64() < 1e-40);
    }

    #[test]
    fn gaussian_integral() {
        let prec = 200;
        let (a, b) = (Float::with_val(prec, 0), Float::with_val(prec, 12));
        let r = integrate(|x| Ok((-Float::with_val(prec, x.square_ref())).exp()), &a, &b, prec, 1e-35, 0.0).unwrap();
        let want = Float::with_val(prec, Constant::Pi).sqrt() / 2u32;
        assert!(Float::with_val(prec, &r.value - &want).abs().to_f64() < 1e-34);
        assert!(r.intervals > 1);
    }

    #[test]
    fn integrable_endpoint_singularity() {
        let prec = 128;
        let (a, b) = (Float::with_val(prec, 0), Float::with_val(prec, 1));
        let r = integrate(|x| Ok(Float::with_val(prec, x.cbrt_ref()).recip()), &a, &b, prec, 1e-10, 0.0).unwrap();
        assert!((r.value.to_f64() - 1.5).abs() < 1e-9);
    }

    #[test]
    fn errors_propagate_from_the_integrand() {
        let prec = 64;
        let (a, b) = (Float::with_val(prec, 0), Float::with_val(prec, 1));
        let r = integrate(|_| Err(QmsError::InvalidInput("boom".into())), &a, &b, prec, 1e-6, 0.0);
        assert!(r.is_err());
    }
}
