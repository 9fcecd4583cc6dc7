use proptest::prelude::*;
use qmslab_core::darboux::{eigen_residual, LadderSpec};
use qmslab_core::quadrature::integrate;
use qmslab_core::semiclassical::{invert_radial, invert_radial_hyperbolic, rtilde, semiclassical_series};
use qmslab_core::series::{cubic_p, gamma_poly, parabolic_p, truncated_v, truncated_v_symbolic, FamilyKind, Flavor, PolyFamily};
use qmslab_core::solver::{iterate_parabolic, shoot_parabolic};
use qmslab_core::special::{BesselKind, BesselTable};
use qmslab_core::tau::build_u;
use rug::{Float, Rational};
use std::sync::OnceLock;

fn f(prec: u32, x: f64) -> Float {
    Float::with_val(prec, x)
}

fn tower() -> &'static qmslab_core::tau::UTower {
    static T: OnceLock<qmslab_core::tau::UTower> = OnceLock::new();
    T.get_or_init(|| build_u(10).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn families_keep_degree_parity_and_sign(k in 0usize..14) {
        for kind in [FamilyKind::ParabolicP, FamilyKind::Gamma, FamilyKind::CubicP] {
            prop_assert!(PolyFamily::generate(kind, k).check_invariants().is_ok());
        }
    }

    #[test]
    fn gamma_solves_the_convolution_relation(k in 0usize..9, z in -20i64..20) {
        // -P_{k+1} = 3(k+1) P_k + z sum P_i P_{k-i} - sum gamma_l P_{k-l}
        let z = Rational::from(z);
        let p = |i: usize| parabolic_p(i).eval(&z);
        let mut rhs = Rational::from(3 * (k as i64 + 1)) * p(k);
        for i in 0..=k {
            rhs += Rational::from(&z * p(i)) * p(k - i);
            rhs -= gamma_poly(i).eval(&z) * p(k - i);
        }
        prop_assert_eq!(-p(k + 1), rhs);
    }

    #[test]
    fn cubic_polynomials_are_even(l in 0usize..7, z in 1i64..30) {
        let p = cubic_p(l);
        prop_assert_eq!(p.eval(&Rational::from(z)), p.eval(&Rational::from(-z)));
    }

    #[test]
    fn symbolic_and_numeric_truncations_agree(n in 0usize..6, k in 0usize..6, e in 1e-4f64..0.05) {
        let eps = f(200, e);
        let sym = truncated_v_symbolic(Flavor::Parabolic, n, k).eval_real(&eps);
        let num = truncated_v(Flavor::Parabolic, n, &eps, k).value;
        prop_assert!(Float::with_val(200, &sym - &num).abs() < 1e-50);
    }

    #[test]
    fn seed_equal_to_eps_dies_at_once(e in 1e-6f64..1.0) {
        let eps = f(128, e);
        let it = iterate_parabolic(&eps, &eps, 5, 128).unwrap();
        prop_assert_eq!(it.survival, 1);
    }

    #[test]
    fn tower_ratios_follow_the_recursion(xn in 1i64..40, en in 1i64..40) {
        // exact rational iteration from v0 = x
        let x = Rational::from((xn, 97));
        let e = Rational::from((en, 89));
        let t = tower();
        let u = |k: i64| t.u(k).unwrap().eval(&x, &e);
        let mut prev = Rational::new();
        let mut cur = x.clone();
        let mut checked = 0;
        for n in 1..=8i64 {
            if cur == 0 {
                break;
            }
            let next = Rational::from(&e * n) / &cur - &prev - 1u32;
            let den = Rational::from(u(n - 3) * u(n - 1));
            if den == 0 {
                break;
            }
            let ratio = Rational::from(u(n) * u(n - 4)) / den;
            prop_assert_eq!(&ratio, &next, "n = {}", n);
            prev = std::mem::replace(&mut cur, next);
            checked += 1;
        }
        prop_assert!(checked >= 4);
    }

    #[test]
    fn bessel_wronskian(x in 0.05f64..60.0, num in prop::sample::select(vec![1i64, 2, 5, 7])) {
        let prec = 160;
        let nu = Rational::from((num, 6));
        let xf = f(prec, x);
        let mut t = BesselTable::new(&xf, prec).unwrap();
        let i = t.i(&nu);
        let k = t.k(&nu).unwrap();
        let di = t.derivative(BesselKind::I, &nu, 1).unwrap();
        let dk = t.derivative(BesselKind::K, &nu, 1).unwrap();
        // I K' - I' K = -1/x
        let w = Float::with_val(prec, &i * &dk) - Float::with_val(prec, &di * &k);
        let scale = Float::with_val(prec, &i * &k).abs() * x + 1u32;
        let r = (w * x + 1u32).abs() / scale;
        prop_assert!(r < 1e-35, "residual {}", r);
    }

    #[test]
    fn quadrature_integrates_polynomials(c in prop::collection::vec(-5i64..5, 1..10), b in 0.1f64..4.0) {
        let prec = 128;
        let eval = |x: &Float| {
            let mut acc = Float::new(prec);
            for &ci in c.iter().rev() {
                acc = acc * x + ci;
            }
            acc
        };
        let r = integrate(|x| Ok(eval(x)), &f(prec, 0.0), &f(prec, b), prec, 1e-30, 1e-30).unwrap();
        let mut exact = Float::new(prec);
        for (k, &ci) in c.iter().enumerate() {
            let bk = Float::with_val(prec, b).pow_u(k as u32 + 1);
            exact += bk * ci / (k as u32 + 1);
        }
        let err = Float::with_val(prec, &r.value - &exact).abs();
        prop_assert!(err < 1e-30 * (exact.to_f64().abs() + 1.0));
    }

    #[test]
    fn ladder_eigen_equation(d1 in 0.2f64..2.0, d2 in 0.2f64..2.0, s in 0.3f64..12.0) {
        let prec = 192;
        let spec = LadderSpec::decaying(&[1.0, 1.0 + d1, 1.0 + d1 + d2], prec).unwrap();
        for n in 1..=3 {
            let r = eigen_residual(&spec, n, &f(prec, s), prec).unwrap();
            prop_assert!(r < 1e-30, "N = {} residual {}", n, r);
        }
    }

    #[test]
    fn radial_round_trip(r in 1e-4f64..30.0) {
        let prec = 128;
        let r = f(prec, r);
        let x = rtilde(&r) * 9u32;
        let y = invert_radial(&x).unwrap();
        let want = Float::with_val(prec, r.square_ref()) * 3u32;
        let rel = (Float::with_val(prec, &y - &want) / want).abs();
        prop_assert!(rel < 1e-33);
        let h = invert_radial_hyperbolic(&x).unwrap();
        prop_assert!((Float::with_val(prec, &y - &h) / &y).abs() < 1e-33);
    }

    #[test]
    fn rtilde_is_increasing(a in 0.0f64..10.0, d in 1e-6f64..1.0) {
        prop_assert!(rtilde(&f(128, a)) < rtilde(&f(128, a + d)));
    }

    #[test]
    fn semiclassical_series_is_odd(order in 1usize..14) {
        let s = semiclassical_series(order);
        prop_assert!(s.x_coeffs.iter().step_by(2).all(|c| *c == 0));
        prop_assert!(s.x_coeffs.iter().skip(1).step_by(2).all(|c| *c != 0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn shooting_gives_a_positive_sequence_below_eps(e in 1e-3f64..0.03) {
        let prec = 192;
        let eps = f(prec, e);
        let seq = shoot_parabolic(&eps, 12, prec).unwrap();
        prop_assert!(seq.v.iter().all(|v| *v > 0));
        prop_assert!(seq.v[0] < eps);
        let series = truncated_v(Flavor::Parabolic, 0, &eps, 1);
        let diff = Float::with_val(prec, &seq.v[0] - &series.value).abs();
        prop_assert!(diff < series.first_omitted.abs() * 2u32);
    }
}

trait PowU {
    fn pow_u(self, k: u32) -> Float;
}

impl PowU for Float {
    fn pow_u(self, k: u32) -> Float {
        use rug::ops::Pow;
        self.pow(k)
    }
}
