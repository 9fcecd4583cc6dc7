use rug::ops::Pow;
use rug::Float;

/// Truncated Taylor stack `f(s), f'(s), ..., f^(m)(s)` at a base point.
///
/// Binary operations truncate to the lower order of the two operands.
#[derive(Clone, Debug)]
pub struct Jet {
    pub s: Float,
    pub d: Vec<Float>,
}

fn binomial_row(k: usize) -> Vec<u64> {
    let mut row = vec![1u64; k + 1];
    for j in 1..k {
        row[j] = row[j - 1] * (k - j + 1) as u64 / j as u64;
    }
    row
}

impl Jet {
    pub fn new(s: Float, d: Vec<Float>) -> Self {
        assert!(!d.is_empty(), "a jet needs at least its value");
        Jet { s, d }
    }

    pub fn constant(s: &Float, c: &Float, order: usize) -> Self {
        let prec = c.prec();
        let mut d = vec![Float::new(prec); order + 1];
        d[0] = c.clone();
        Jet { s: s.clone(), d }
    }

    /// The identity function `s` itself.
    pub fn variable(s: &Float, order: usize) -> Self {
        let prec = s.prec();
        let mut d = vec![Float::new(prec); order + 1];
        d[0] = s.clone();
        if order >= 1 {
            d[1] = Float::with_val(prec, 1);
        }
        Jet { s: s.clone(), d }
    }

    /// Jet of `s^p` for a real exponent at `s > 0`.
    pub fn power(s: &Float, p: &Float, order: usize) -> Self {
        let prec = s.prec().max(p.prec());
        let mut d = Vec::with_capacity(order + 1);
        let mut falling = Float::with_val(prec, 1);
        for k in 0..=order {
            let e = Float::with_val(prec, p - k as u32);
            let base = Float::with_val(prec, s.pow(&e));
            d.push(Float::with_val(prec, &falling * &base));
            falling *= Float::with_val(prec, p - k as u32);
        }
        Jet { s: s.clone(), d }
    }

    pub fn order(&self) -> usize {
        self.d.len() - 1
    }

    pub fn prec(&self) -> u32 {
        self.d[0].prec()
    }

    pub fn value(&self) -> &Float {
        &self.d[0]
    }

    pub fn truncate(&self, order: usize) -> Self {
        Jet {
            s: self.s.clone(),
            d: self.d[..=order.min(self.order())].to_vec(),
        }
    }

    /// Derivative jet; the order drops by one.
    pub fn derivative(&self) -> Self {
        assert!(self.order() >= 1, "cannot differentiate an order-0 jet");
        Jet {
            s: self.s.clone(),
            d: self.d[1..].to_vec(),
        }
    }

    pub fn add(&self, o: &Jet) -> Jet {
        self.zip(o, |a, b| Float::with_val(a.prec(), a + b))
    }

    pub fn sub(&self, o: &Jet) -> Jet {
        self.zip(o, |a, b| Float::with_val(a.prec(), a - b))
    }

    pub fn scale(&self, c: &Float) -> Jet {
        Jet {
            s: self.s.clone(),
            d: self.d.iter().map(|x| Float::with_val(x.prec(), x * c)).collect(),
        }
    }

    pub fn neg(&self) -> Jet {
        Jet {
            s: self.s.clone(),
            d: self.d.iter().map(|x| Float::with_val(x.prec(), -x)).collect(),
        }
    }

    fn zip(&self, o: &Jet, f: impl Fn(&Float, &Float) -> Float) -> Jet {
        let m = self.order().min(o.order());
        Jet {
            s: self.s.clone(),
            d: (0..=m).map(|k| f(&self.d[k], &o.d[k])).collect(),
        }
    }

    /// Leibniz product.
    pub fn mul(&self, o: &Jet) -> Jet {
        let m = self.order().min(o.order());
        let prec = self.prec().max(o.prec());
        let d = (0..=m)
            .map(|k| {
                let row = binomial_row(k);
                let mut acc = Float::new(prec);
                for j in 0..=k {
                    acc += Float::with_val(prec, &self.d[j] * &o.d[k - j]) * row[j];
                }
                acc
            })
            .collect();
        Jet { s: self.s.clone(), d }
    }

    /// Quotient `self / o`, solving `self = q·o` order by order.
    pub fn div(&self, o: &Jet) -> Jet {
        let m = self.order().min(o.order());
        let prec = self.prec().max(o.prec());
        let mut q: Vec<Float> = Vec::with_capacity(m + 1);
        for k in 0..=m {
            let row = binomial_row(k);
            let mut acc = Float::with_val(prec, &self.d[k]);
            for j in 1..=k {
                acc -= Float::with_val(prec, &o.d[j] * &q[k - j]) * row[j];
            }
            q.push(acc / &o.d[0]);
        }
        Jet { s: self.s.clone(), d: q }
    }

    /// Logarithmic derivative `f'/f` as a jet of one order less.
    pub fn log_derivative(&self) -> Jet {
        self.derivative().div(&self.truncate(self.order() - 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(prec: u32, x: f64) -> Float {
        Float::with_val(prec, x)
    }

    fn close(a: &Float, b: &Float, tol: f64) -> bool {
        Float::with_val(a.prec(), a - b).abs().to_f64() <= tol * (1.0 + b.to_f64().abs())
    }

    fn exp_jet(s: &Float, a: f64, order: usize) -> Jet {
        // d^k e^{a s} = a^k e^{a s}
        let prec = s.prec();
        let e = Float::with_val(prec, s * a).exp();
        Jet::new(s.clone(), (0..=order).map(|k| Float::with_val(prec, &e * a.powi(k as i32))).collect())
    }

    #[test]
    fn leibniz_matches_product_rule() {
        let s = f(128, 0.7);
        let a = exp_jet(&s, 2.0, 5);
        let b = exp_jet(&s, -0.5, 5);
        let ab = a.mul(&b);
        let want = exp_jet(&s, 1.5, 5);
        for k in 0..=5 {
            assert!(close(&ab.d[k], &want.d[k], 1e-35), "k = {k}");
        }
    }

    #[test]
    fn division_inverts_multiplication() {
        let s = f(128, 1.3);
        let a = Jet::power(&s, &f(128, 0.5), 6);
        let b = exp_jet(&s, -1.0, 6);
        let back = a.mul(&b).div(&b);
        for k in 0..=6 {
            assert!(close(&back.d[k], &a.d[k], 1e-33), "k = {k}");
        }
    }

    #[test]
    fn power_jet_against_finite_differences() {
        let prec = 256;
        let s = f(prec, 2.0);
        let p = Float::with_val(prec, 1) / 3u32;
        let jet = Jet::power(&s, &p, 2);
        let val = |x: &Float| Float::with_val(prec, x.pow(&p));
        let mut errs = Vec::new();
        for h in [1e-3, 5e-4] {
            let h = f(prec, h);
            let up = val(&Float::with_val(prec, &s + &h));
            let dn = val(&Float::with_val(prec, &s - &h));
            let fd1 = Float::with_val(prec, &up - &dn) / (Float::with_val(prec, &h * 2u32));
            let fd2 = (Float::with_val(prec, &up + &dn) - Float::with_val(prec, &jet.d[0] * 2u32))
                / Float::with_val(prec, h.square_ref());
            errs.push((
                Float::with_val(prec, fd1 - &jet.d[1]).abs().to_f64(),
                Float::with_val(prec, fd2 - &jet.d[2]).abs().to_f64(),
            ));
        }
        // second-order differences: halving h divides the error by ~4
        for i in 0..1 {
            let r1 = errs[i].0 / errs[i + 1].0;
            let r2 = errs[i].1 / errs[i + 1].1;
            assert!((3.5..4.5).contains(&r1), "ratio {r1}");
            assert!((3.5..4.5).contains(&r2), "ratio {r2}");
        }
    }

    #[test]
    fn derivative_and_log_derivative() {
        let s = f(128, 0.4);
        let e = exp_jet(&s, 3.0, 4);
        let ld = e.log_derivative();
        assert_eq!(ld.order(), 3);
        assert!(close(&ld.d[0], &f(128, 3.0), 1e-35));
        assert!(ld.d[1].to_f64().abs() < 1e-30);
        let v = Jet::variable(&s, 3);
        assert_eq!(v.derivative().d[0], 1);
    }
}
