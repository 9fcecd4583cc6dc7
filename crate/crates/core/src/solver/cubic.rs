use rug::float::Round;
use rug::Float;

use super::{add_rounding, certified_positive, residual_report, Iteration, VSequence, ERR_PREC};
use crate::error::{QmsError, Result};
use crate::series::{truncated_v, Flavor};
use crate::special::to_decimal;

/// Tuning of the two-parameter refinement.
#[derive(Clone, Debug)]
pub struct CubicOptions {
    /// Order of the small-ε series used as matching target.
    pub series_order: usize,
    /// Newton iterations allowed per matching depth.
    pub max_newton: usize,
}

impl Default for CubicOptions {
    fn default() -> Self {
        CubicOptions {
            series_order: 6,
            max_newton: 60,
        }
    }
}

fn get(v: &[Float], i: isize, prec: u32) -> Float {
    if i < 0 {
        Float::new(prec)
    } else {
        v[i as usize].clone()
    }
}

/// `v_{n+2} = (ε_n/v_n - 1)/v_{n+1} - v_{n-1}(v_{n-2}/v_{n+1} + 1)`.
fn next_value(v: &[Float], n: usize, eps: &Float, prec: u32) -> Float {
    let ni = n as isize;
    let (vn, vn1) = (&v[n], &v[n + 1]);
    let (vm1, vm2) = (get(v, ni - 1, prec), get(v, ni - 2, prec));
    let a = Float::with_val(prec, eps * (n as u32 + 1)) / vn - 1u32;
    let inner = Float::with_val(prec, &vm2 / vn1) + 1u32;
    Float::with_val(prec, a / vn1) - Float::with_val(prec, &vm1 * inner)
}

/// Iterates the cubic recursion from `(v0, v1)` with running error bounds.
pub fn iterate_cubic(v0: &Float, v1: &Float, eps: &Float, n_max: usize, prec: u32) -> Result<Iteration> {
    if *v0 <= 0 || *v1 <= 0 || *eps <= 0 {
        return Err(QmsError::InvalidInput("iterate_cubic needs v0, v1, eps > 0".into()));
    }
    let mut values = vec![Float::with_val(prec, v0), Float::with_val(prec, v1)];
    let mut errors = vec![Float::new(ERR_PREC), Float::new(ERR_PREC)];
    if n_max == 0 {
        values.truncate(1);
        errors.truncate(1);
        return Ok(Iteration {
            values,
            errors,
            survival: 1,
        });
    }
    for n in 0..n_max - 1 {
        let ni = n as isize;
        let (vn, vn1) = (values[n].clone(), values[n + 1].clone());
        let (vm1, vm2) = (get(&values, ni - 1, prec), get(&values, ni - 2, prec));
        let e = |i: isize| if i < 0 { Float::new(ERR_PREC) } else { errors[i as usize].clone() };

        let (epsn, o0) = Float::with_val_round(prec, eps * (n as u32 + 1), Round::Nearest);
        let (q, o1) = Float::with_val_round(prec, &epsn / &vn, Round::Nearest);
        let (a, o2) = Float::with_val_round(prec, &q - 1u32, Round::Nearest);
        let (t1, o3) = Float::with_val_round(prec, &a / &vn1, Round::Nearest);
        let (r, o4) = Float::with_val_round(prec, &vm2 / &vn1, Round::Nearest);
        let (r1, o5) = Float::with_val_round(prec, &r + 1u32, Round::Nearest);
        let (t2, o6) = Float::with_val_round(prec, &vm1 * &r1, Round::Nearest);
        let (v, o7) = Float::with_val_round(prec, &t1 - &t2, Round::Nearest);

        // first-order propagation with denominators replaced by lower bounds
        let lb = |x: &Float, ex: &Float| Float::with_val(ERR_PREC, x.abs_ref()) - ex;
        let (lb_n, lb_n1) = (lb(&vn, &e(ni)), lb(&vn1, &e(ni + 1)));
        let abs = |x: &Float| Float::with_val(ERR_PREC, x.abs_ref());
        let num_n1 = abs(&a) + abs(&Float::with_val(ERR_PREC, &vm1 * &vm2));
        let d_n1 = num_n1 / Float::with_val(ERR_PREC, &lb_n1 * &lb_n1);
        let d_n = abs(&epsn) / (Float::with_val(ERR_PREC, &lb_n * &lb_n) * &lb_n1);
        let d_m1 = abs(&vm2) / &lb_n1 + 1u32;
        let d_m2 = abs(&vm1) / &lb_n1;
        let mut err = d_n1 * e(ni + 1) + d_n * e(ni) + d_m1 * e(ni - 1) + d_m2 * e(ni - 2);
        if o0 != std::cmp::Ordering::Equal {
            let mut x = abs(&epsn) / (Float::with_val(ERR_PREC, &lb_n * &lb_n1));
            x >>= prec;
            err += x;
        }
        let mut local = Float::new(ERR_PREC);
        add_rounding(&mut local, &q, o1, prec);
        add_rounding(&mut local, &a, o2, prec);
        err += Float::with_val(ERR_PREC, &local / &lb_n1);
        add_rounding(&mut err, &t1, o3, prec);
        let mut local = Float::new(ERR_PREC);
        add_rounding(&mut local, &r, o4, prec);
        add_rounding(&mut local, &r1, o5, prec);
        err += local * abs(&vm1);
        add_rounding(&mut err, &t2, o6, prec);
        add_rounding(&mut err, &v, o7, prec);
        err *= 1.0 + 1e-15;

        let positive = certified_positive(&v, &err, n + 2, prec)?;
        values.push(v);
        errors.push(err);
        if !positive {
            return Ok(Iteration {
                values,
                errors,
                survival: n + 2,
            });
        }
    }
    Ok(Iteration {
        values,
        errors,
        survival: n_max + 1,
    })
}

/// Values `v_0..=v_last` without positivity checks.
fn raw_sequence(v0: &Float, v1: &Float, eps: &Float, last: usize, prec: u32) -> Vec<Float> {
    let mut v = vec![v0.clone(), v1.clone()];
    for n in 0..last.saturating_sub(1) {
        let next = next_value(&v, n, eps, prec);
        v.push(next);
    }
    v
}

struct Matcher<'a> {
    eps: &'a Float,
    targets: &'a [Float],
    prec: u32,
}

impl Matcher<'_> {
    fn residual(&self, x: &[Float; 2], m: usize) -> [Float; 2] {
        let v = raw_sequence(&x[0], &x[1], self.eps, m + 1, self.prec);
        [
            Float::with_val(self.prec, &v[m] - &self.targets[m]),
            Float::with_val(self.prec, &v[m + 1] - &self.targets[m + 1]),
        ]
    }

    fn norm(&self, r: &[Float; 2]) -> Float {
        Float::with_val(self.prec, r[0].abs_ref()).max(&Float::with_val(self.prec, r[1].abs_ref()))
    }

    /// Damped Newton on `(v_m, v_{m+1}) = targets`; returns the last step size.
    fn solve(&self, x: &mut [Float; 2], m: usize, max_iter: usize) -> Result<[Float; 2]> {
        let prec = self.prec;
        let mut r = self.residual(x, m);
        let mut last_step = [Float::new(prec), Float::new(prec)];
        let mut step_tol = Float::with_val(prec, 1);
        step_tol >>= prec - 16;
        for _ in 0..max_iter {
            let mut jac = [[Float::new(prec), Float::new(prec)], [Float::new(prec), Float::new(prec)]];
            for j in 0..2 {
                let mut h = Float::with_val(prec, x[j].abs_ref());
                h >>= prec / 2;
                let mut xp = x.clone();
                xp[j] += &h;
                let rp = self.residual(&xp, m);
                for i in 0..2 {
                    jac[i][j] = Float::with_val(prec, &rp[i] - &r[i]) / &h;
                }
            }
            let det = Float::with_val(prec, &jac[0][0] * &jac[1][1]) - Float::with_val(prec, &jac[0][1] * &jac[1][0]);
            if det.is_zero() {
                break;
            }
            let dx0 = (Float::with_val(prec, &jac[1][1] * &r[0]) - Float::with_val(prec, &jac[0][1] * &r[1])) / &det;
            let dx1 = (Float::with_val(prec, &jac[0][0] * &r[1]) - Float::with_val(prec, &jac[1][0] * &r[0])) / &det;
            let norm0 = self.norm(&r);
            let mut lambda = Float::with_val(prec, 1);
            let mut accepted = false;
            for _ in 0..40 {
                let cand = [
                    Float::with_val(prec, &x[0] - Float::with_val(prec, &dx0 * &lambda)),
                    Float::with_val(prec, &x[1] - Float::with_val(prec, &dx1 * &lambda)),
                ];
                let rc = self.residual(&cand, m);
                if self.norm(&rc) < norm0 {
                    last_step = [
                        Float::with_val(prec, &cand[0] - &x[0]).abs(),
                        Float::with_val(prec, &cand[1] - &x[1]).abs(),
                    ];
                    *x = cand;
                    r = rc;
                    accepted = true;
                    break;
                }
                lambda /= 2u32;
            }
            let rel0 = Float::with_val(prec, &last_step[0] / &x[0]);
            let rel1 = Float::with_val(prec, &last_step[1] / &x[1]);
            if !accepted || (rel0 < step_tol && rel1 < step_tol) {
                return Ok(last_step);
            }
        }
        let scale = Float::with_val(prec, self.targets[m].abs_ref());
        let mut loose = Float::with_val(prec, 1);
        loose >>= prec / 4;
        if self.norm(&r) <= Float::with_val(prec, &scale * &loose) {
            return Ok(last_step);
        }
        Err(QmsError::NewtonDiverged {
            iterations: max_iter,
            residual: to_decimal(&self.norm(&r)),
        })
    }
}

/// Solves for `(v0, v1)` so that the cubic sequence matches its small-ε
/// series at successively deeper indices, then certifies positivity to
/// depth `n`.
///
/// The matching depth is stepped from 2 up to `n`, each solve seeding the
/// next; the final sequence therefore agrees with the series at the far
/// end, where the forward recursion is least sensitive to `(v0, v1)`.
pub fn shoot_cubic(eps: &Float, n: usize, prec: u32, opts: &CubicOptions) -> Result<VSequence> {
    if *eps <= 0 {
        return Err(QmsError::InvalidInput("eps must be positive".into()));
    }
    if n < 3 {
        return Err(QmsError::InvalidInput("cubic solve needs depth n >= 3".into()));
    }
    let wp = prec + 64;
    let eps_w = Float::with_val(wp, eps);
    let targets: Vec<Float> = (0..=n + 1)
        .map(|i| truncated_v(Flavor::Cubic, i, &eps_w, opts.series_order).value)
        .collect();
    let matcher = Matcher {
        eps: &eps_w,
        targets: &targets,
        prec: wp,
    };
    let mut x = [targets[0].clone(), targets[1].clone()];
    let mut step = [Float::new(wp), Float::new(wp)];
    for m in 2..=n {
        step = matcher.solve(&mut x, m, opts.max_newton)?;
    }

    let v0 = Float::with_val(prec, &x[0]);
    let v1 = Float::with_val(prec, &x[1]);
    let it = iterate_cubic(&v0, &v1, eps, n, prec)?;
    if it.survival <= n {
        return Err(QmsError::NewtonDiverged {
            iterations: opts.max_newton,
            residual: format!("refined sequence turns non-positive at index {}", it.survival),
        });
    }
    let floor = {
        let mut t = Float::with_val(prec, &v0);
        t >>= prec;
        t
    };
    let half_width = |s: &Float| Float::with_val(prec, s).max(&floor);
    let brackets = vec![
        (Float::with_val(prec, &v0 - half_width(&step[0])), Float::with_val(prec, &v0 + half_width(&step[0]))),
        (Float::with_val(prec, &v1 - half_width(&step[1])), Float::with_val(prec, &v1 + half_width(&step[1]))),
    ];
    let residual = residual_report(Flavor::Cubic, eps, &it.values);
    Ok(VSequence {
        flavor: Flavor::Cubic,
        eps: eps.clone(),
        v: it.values,
        errors: it.errors,
        prec,
        brackets,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(prec: u32, x: f64) -> Float {
        Float::with_val(prec, x)
    }

    #[test]
    fn leading_order_seeds_stop_at_the_second_value() {
        // v0 = eps makes the first factor of v2 vanish whatever v1 is
        let eps = f(256, 0.02);
        let it = iterate_cubic(&eps, &f(256, 0.04), &eps, 20, 256).unwrap();
        assert_eq!(it.survival, 2);
    }

    #[test]
    fn unit_ratio_gives_zero_second_value() {
        let eps = f(128, 0.02);
        let it = iterate_cubic(&eps, &f(128, 0.5), &eps, 10, 128).unwrap();
        assert_eq!(it.survival, 2);
        assert!(it.values[2].is_zero());
    }

    #[test]
    fn more_series_terms_survive_longer() {
        let eps = f(256, 0.02);
        let survival = |k| {
            let s0 = truncated_v(Flavor::Cubic, 0, &eps, k).value;
            let s1 = truncated_v(Flavor::Cubic, 1, &eps, k).value;
            iterate_cubic(&s0, &s1, &eps, 40, 256).unwrap().survival
        };
        let (s1, s2, s6) = (survival(1), survival(2), survival(6));
        assert_eq!(s1, 4);
        assert!(s2 >= 6 && s6 > s2, "survival {s2} {s6}");
    }

    #[test]
    fn refined_sequence_satisfies_low_index_relations() {
        let prec = 256;
        let eps = f(prec, 0.02);
        let seq = shoot_cubic(&eps, 12, prec, &CubicOptions::default()).unwrap();
        for name in ["cubic-spot-v0", "cubic-spot-v1-difference", "cubic-spot-v1-product"] {
            assert!(seq.residual.get(name).unwrap().max < 1e-20, "{name}");
        }
        let e = 0.02f64;
        let v0 = seq.v[0].to_f64();
        // next omitted terms: -38286 eps^7 and 10161 eps^4 respectively
        assert!((v0 - (e - 6.0 * e.powi(3) + 306.0 * e.powi(5))).abs() < 2.0 * 38286.0 * e.powi(7));
        let v3 = seq.v[3].to_f64() / (4.0 * e);
        assert!((v3 - (1.0 - 51.0 * e * e)).abs() < 2.0 * 10161.0 * e.powi(4));
        let d = seq.residual.get("cubic-difference-form").unwrap();
        let p = seq.residual.get("cubic-product-form").unwrap();
        assert!(d.max < 1e-60 && p.max < 1e-60);
    }
}
