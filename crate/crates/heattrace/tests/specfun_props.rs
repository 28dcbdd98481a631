use std::f64::consts::PI;

use heattrace::number::q_int;
use heattrace::specfun::{
    bernoulli_number, bernoulli_polynomial_q, gamma, hurwitz_zeta, riemann_zeta, riemann_zeta_real,
};
use num_complex::Complex64 as C64;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn functional_equation(re in -10.0f64..-1.0, im in -30.0f64..30.0) {
        let s = C64::new(re, im);
        let lhs = riemann_zeta(s).unwrap();
        let rhs = C64::new(2.0, 0.0).powc(s)
            * C64::new(PI, 0.0).powc(s - 1.0)
            * (s * PI / 2.0).sin()
            * gamma(1.0 - s).unwrap()
            * riemann_zeta(1.0 - s).unwrap();
        prop_assert!((lhs - rhs).norm() / lhs.norm() <= 1e-10);
    }

    #[test]
    fn hurwitz_at_one_is_riemann(re in -8.0f64..8.0, im in -20.0f64..20.0) {
        prop_assume!((re - 1.0).abs() > 0.05 || im.abs() > 0.05);
        let s = C64::new(re, im);
        let h = hurwitz_zeta(s, 1.0).unwrap();
        let z = riemann_zeta(s).unwrap();
        prop_assert!((h - z).norm() <= 1e-11 * z.norm().max(1.0));
    }

    #[test]
    fn gamma_recurrence(re in -6.0f64..8.0, im in -15.0f64..15.0) {
        prop_assume!(im.abs() > 1e-3 || (re - re.round()).abs() > 1e-3);
        let s = C64::new(re, im);
        let a = gamma(s + 1.0).unwrap();
        let b = s * gamma(s).unwrap();
        prop_assert!((a - b).norm() <= 1e-11 * a.norm());
    }
}

#[test]
fn trivial_zeros() {
    for n in 1..=10 {
        let z = riemann_zeta_real(-2.0 * n as f64).unwrap();
        assert!(z.abs() <= 1e-12, "zeta(-{}) = {z}", 2 * n);
    }
}

/// With B₁ = +1/2 the numbers are the polynomial values at 1.
#[test]
fn bernoulli_polynomial_endpoints() {
    for n in 0..=30 {
        assert_eq!(bernoulli_polynomial_q(n, &q_int(1)), bernoulli_number(n), "n = {n}");
        let at0 = bernoulli_polynomial_q(n, &q_int(0));
        let want = if n == 1 { -bernoulli_number(1) } else { bernoulli_number(n) };
        assert_eq!(at0, want, "n = {n}");
    }
    assert_eq!(bernoulli_number(1), heattrace::number::q_frac(1, 2));
}
