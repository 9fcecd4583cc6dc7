use std::cmp::Ordering;

use rug::float::Round;
use rug::Float;

use super::{add_rounding, certified_positive, residual_report, Iteration, VSequence, ERR_PREC};
use crate::error::{QmsError, Result};
use crate::series::Flavor;
use crate::special::to_decimal;

/// Precision used when the caller gives none: the recursion loses a bounded
/// number of digits per step, so it grows linearly with the depth.
pub fn default_precision(n: usize) -> u32 {
    64 + 12 * n as u32
}

/// One step of the recursion with its propagated error bound.
struct Stepper<'a> {
    eps: &'a Float,
    prec: u32,
}

impl Stepper<'_> {
    fn step(&self, n: usize, prev: &Float, cur: &Float, e_prev: &Float, e_cur: &Float) -> (Float, Float) {
        let prec = self.prec;
        let (num, o1) = Float::with_val_round(prec, self.eps * (n as u32 + 1), Round::Nearest);
        let (t, o2) = Float::with_val_round(prec, &num / cur, Round::Nearest);
        let (u, o3) = Float::with_val_round(prec, &t - prev, Round::Nearest);
        let (v, o4) = Float::with_val_round(prec, &u - 1u32, Round::Nearest);

        // |num/(c±e) - num/c| <= num·e/(|c|(|c|-e))
        let abs_cur = Float::with_val(ERR_PREC, cur.abs_ref());
        let gap = Float::with_val(ERR_PREC, &abs_cur - e_cur);
        let num_abs = Float::with_val(ERR_PREC, num.abs_ref());
        let mut err = Float::with_val(ERR_PREC, &num_abs * e_cur) / (abs_cur * &gap);
        err += e_prev;
        if o1 != Ordering::Equal {
            let mut r = Float::with_val(ERR_PREC, &num_abs / &gap);
            r >>= prec;
            err += r;
        }
        add_rounding(&mut err, &t, o2, prec);
        add_rounding(&mut err, &u, o3, prec);
        add_rounding(&mut err, &v, o4, prec);
        // absorb the rounding of the bound arithmetic itself
        err *= 1.0 + 1e-15;
        (v, err)
    }
}

/// Iterates from `v0` until `v_n` for `n = n_max` or the first non-positive
/// value.
pub fn iterate_parabolic(v0: &Float, eps: &Float, n_max: usize, prec: u32) -> Result<Iteration> {
    if *v0 <= 0 || *eps <= 0 {
        return Err(QmsError::InvalidInput("iterate_parabolic needs v0 > 0 and eps > 0".into()));
    }
    let st = Stepper { eps, prec };
    let mut values = vec![Float::with_val(prec, v0)];
    let mut errors = vec![Float::new(ERR_PREC)];
    let mut prev = Float::new(prec);
    let mut e_prev = Float::new(ERR_PREC);
    for n in 0..n_max {
        let (v, e) = st.step(n, &prev, &values[n], &e_prev, &errors[n]);
        let positive = certified_positive(&v, &e, n + 1, prec)?;
        prev = values[n].clone();
        e_prev = errors[n].clone();
        values.push(v);
        errors.push(e);
        if !positive {
            return Ok(Iteration {
                values,
                errors,
                survival: n + 1,
            });
        }
    }
    Ok(Iteration {
        values,
        errors,
        survival: n_max + 1,
    })
}

/// First index at which the iteration from `v0` stops being positive, or
/// `None` if it survives `cap` steps or its sign stops being decidable.
fn failure_index(v0: &Float, eps: &Float, prec: u32, cap: usize) -> Result<Option<usize>> {
    let st = Stepper { eps, prec };
    let mut prev = Float::new(prec);
    let mut cur = Float::with_val(prec, v0);
    let mut e_prev = Float::new(ERR_PREC);
    let mut e_cur = Float::new(ERR_PREC);
    for n in 0..cap {
        let (v, e) = st.step(n, &prev, &cur, &e_prev, &e_cur);
        match certified_positive(&v, &e, n + 1, prec) {
            Ok(true) => {}
            Ok(false) => return Ok(Some(n + 1)),
            // the seed is within rounding of the positive solution
            Err(QmsError::PrecisionExhausted { .. }) => return Ok(None),
            Err(e) => return Err(e),
        }
        prev = std::mem::replace(&mut cur, v);
        e_prev = std::mem::replace(&mut e_cur, e);
    }
    Ok(None)
}

/// Solves for the positive sequence and also returns every intermediate
/// bracket of the bisection.
pub fn shoot_parabolic_traced(eps: &Float, n: usize, prec: u32) -> Result<(VSequence, Vec<(Float, Float)>)> {
    if *eps <= 0 {
        return Err(QmsError::InvalidInput("eps must be positive".into()));
    }
    let wp = prec + 64;
    let cap = 8 * prec as usize + n;
    let eps_w = Float::with_val(wp, eps);

    // The two ways of leaving the positive cone (a zero crossing versus an
    // overshoot that drives the next value negative) fail at indices of
    // opposite parity. Probe the endpoints to learn which is which.
    let hi0 = eps_w.clone();
    let hi_fail = failure_index(&hi0, &eps_w, wp, cap)?.ok_or_else(|| QmsError::BracketNotFound {
        detail: "upper endpoint eps never fails".into(),
    })?;
    let hi_parity = hi_fail % 2;
    let mut lo = Float::with_val(wp, &eps_w / 2u32);
    let mut found = false;
    for _ in 0..200 {
        match failure_index(&lo, &eps_w, wp, cap)? {
            Some(i) if i % 2 != hi_parity => {
                found = true;
                break;
            }
            _ => lo /= 2u32,
        }
    }
    if !found {
        return Err(QmsError::BracketNotFound {
            detail: format!("no lower endpoint below {} with opposite failure parity", to_decimal(eps)),
        });
    }
    let mut hi = hi0;

    let mut trace = vec![(Float::with_val(prec, &lo), Float::with_val(prec, &hi))];
    let mut tol = Float::with_val(wp, 1);
    tol >>= prec + 8;
    while Float::with_val(wp, &hi - &lo) >= tol {
        let mid = Float::with_val(wp, &lo + &hi) / 2u32;
        match failure_index(&mid, &eps_w, wp, cap)? {
            None => {
                lo = mid.clone();
                hi = mid;
            }
            Some(i) if i % 2 == hi_parity => hi = mid,
            Some(_) => lo = mid,
        }
        trace.push((Float::with_val(prec, &lo), Float::with_val(prec, &hi)));
    }

    let v0 = Float::with_val(prec, Float::with_val(wp, &lo + &hi) / 2u32);
    let it = iterate_parabolic(&v0, eps, n, prec)?;
    if it.survival <= n {
        return Err(QmsError::PrecisionExhausted {
            index: it.survival,
            prec,
        });
    }
    let residual = residual_report(Flavor::Parabolic, eps, &it.values);
    let seq = VSequence {
        flavor: Flavor::Parabolic,
        eps: eps.clone(),
        v: it.values,
        errors: it.errors,
        prec,
        brackets: vec![(Float::with_val(prec, &lo), Float::with_val(prec, &hi))],
        residual,
    };
    Ok((seq, trace))
}

/// Bisection on `v0` for the sequence that stays positive, returned to
/// depth `n`.
pub fn shoot_parabolic(eps: &Float, n: usize, prec: u32) -> Result<VSequence> {
    shoot_parabolic_traced(eps, n, prec).map(|(s, _)| s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::truncated_v;

    fn f(prec: u32, x: f64) -> Float {
        Float::with_val(prec, x)
    }

    #[test]
    fn v0_equal_to_eps_hits_zero_at_once() {
        for e in [0.3, 0.01, 1e-5] {
            let eps = f(128, e);
            let it = iterate_parabolic(&eps, &eps, 10, 128).unwrap();
            assert_eq!(it.survival, 1);
            assert!(it.values[1].is_zero());
        }
    }

    #[test]
    fn huge_v0_overshoots() {
        let eps = f(128, 0.01);
        let it = iterate_parabolic(&f(128, 1000.0), &eps, 10, 128).unwrap();
        assert_eq!(it.survival, 1);
        assert!(it.values[1] < 0);
    }

    #[test]
    fn series_seed_survival_tracks_its_truncation_error() {
        // perturbations grow roughly like 1/((n+1)eps) per step, so a seed
        // off by 4e-11 lasts about seven steps at eps = 0.01
        let eps = f(256, 0.01);
        let seed = truncated_v(Flavor::Parabolic, 0, &eps, 8).value;
        let it = iterate_parabolic(&seed, &eps, 40, 256).unwrap();
        assert_eq!(it.survival, 7);
        let shot = shoot_parabolic(&eps, 40, 256).unwrap();
        assert_eq!(shot.depth(), 40);
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        let eps = f(64, 0.01);
        assert!(iterate_parabolic(&f(64, -1.0), &eps, 3, 64).is_err());
        assert!(shoot_parabolic(&f(64, 0.0), 3, 64).is_err());
    }

    #[test]
    fn shooting_matches_series_and_scaling() {
        let prec = 256;
        let eps = f(prec, 0.01);
        let seq = shoot_parabolic(&eps, 20, prec).unwrap();
        let series = truncated_v(Flavor::Parabolic, 0, &eps, 3);
        // truncation error of the four-term series is ~1392 eps^5
        let diff = Float::with_val(prec, &seq.v[0] - &series.value).abs().to_f64();
        assert!(diff < 2.0 * series.first_omitted.to_f64());
        for (v, e) in seq.v.iter().zip(&seq.errors) {
            assert!(*v > 0 && Float::with_val(64, v.abs_ref()) > *e);
        }
        let small = f(prec, 1e-6);
        let s = shoot_parabolic(&small, 5, prec).unwrap();
        let ratio = Float::with_val(prec, &s.v[0] / &small).to_f64();
        assert!((ratio - 1.0).abs() < 3e-6);
    }

    #[test]
    fn bracket_shrinks_monotonically() {
        let prec = 128;
        let (_, trace) = shoot_parabolic_traced(&f(prec, 0.02), 10, prec).unwrap();
        for w in trace.windows(2) {
            assert!(w[1].0 >= w[0].0 && w[1].1 <= w[0].1);
        }
    }

    #[test]
    fn perturbation_is_located_by_the_report() {
        let prec = 192;
        let eps = f(prec, 0.01);
        let mut seq = shoot_parabolic(&eps, 15, prec).unwrap();
        seq.v[7] += 1e-6;
        let rep = residual_report(Flavor::Parabolic, &eps, &seq.v);
        assert_eq!(rep.worst().at, 7);
        assert!(rep.worst().max > 1e-7);
    }
}
