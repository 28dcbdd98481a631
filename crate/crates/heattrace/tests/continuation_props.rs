use heattrace::catalog;
use heattrace::continuation::{continue_zeta, laurent_at, ClassTag, ContinuationData, Region};
use heattrace::dirichlet::{abscissa, zeta_direct};
use heattrace::number::{q_frac, q_int};
use heattrace::spectrum::SpectrumSpec;
use num_complex::Complex64 as C64;
use proptest::prelude::*;

fn region() -> Region {
    Region { r_max: 6.0, y_max: 30.0 }
}

/// Linear, equal-root and general quadratic eigenvalues with small
/// polynomial multiplicities.
fn spec_strategy() -> impl Strategy<Value = SpectrumSpec> {
    let a = prop_oneof![
        (1i64..4, 1i64..4).prop_map(|(a, d)| vec![q_frac(a, d), q_int(1)]),
        (1i64..3).prop_map(|k| vec![q_frac(k * k, 4), q_int(k), q_int(1)]),
        (1i64..5, 1i64..3).prop_map(|(c, b)| vec![q_int(c), q_int(b), q_int(1)]),
        Just(vec![q_int(1), q_int(0), q_int(0), q_int(1)]),
    ];
    let b = prop_oneof![
        (1i64..4).prop_map(|b| vec![q_int(b)]),
        (1i64..3, 1i64..3).prop_map(|(b0, b1)| vec![q_int(b0), q_int(b1)]),
    ];
    (a, b).prop_map(|(a, b)| SpectrumSpec::polynomial(a, b, 1).unwrap())
}

fn with_head(data: &ContinuationData, s: C64) -> C64 {
    data.zeta(s).unwrap() + data.head.iter().map(|&(l, m)| m * (-s * l.ln()).exp()).sum::<C64>()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn agrees_with_series(spec in spec_strategy(), dx in 0.5f64..5.0, y in -10.0f64..10.0) {
        let l = abscissa(&spec).abscissa_zeta;
        let data = continue_zeta(&spec, region(), 24).unwrap();
        let s = C64::new(l + dx, y);
        let direct = zeta_direct(&spec, s, 1e-14).unwrap();
        let cont = with_head(&data, s);
        prop_assert!((direct - cont).norm() <= 1e-9 * direct.norm(), "{direct} vs {cont}");
    }

    #[test]
    fn polynomial_poles_at_most_double(spec in spec_strategy()) {
        let data = continue_zeta(&spec, region(), 24).unwrap();
        for p in &data.z_poles {
            prop_assert!(p.order <= 2, "order {} at {}", p.order, p.location);
        }
    }
}

#[test]
fn conjugate_laurent_data() {
    for name in ["pow2_pow2", "q_exponential:0.5,1", "q_exponential:1/3,1,2"] {
        let spec = catalog::entry(name).unwrap().spec;
        let data = continue_zeta(&spec, region(), 24).unwrap();
        let complex: Vec<_> = data.z_poles.iter().filter(|p| p.location.im > 0.0).take(4).collect();
        assert!(!complex.is_empty(), "{name}");
        for p in complex {
            let lower = data.z_poles.iter().find(|q| q.location == p.location.conj()).expect("conjugate pole");
            for (a, b) in p.principal.iter().zip(&lower.principal) {
                assert!((a.conj() - b).norm() <= 1e-12 * a.norm().max(1e-300), "{name} at {}", p.location);
            }
            let probe = laurent_at(&data, p.location.conj(), p.order).unwrap();
            for (a, b) in p.principal.iter().zip(&probe.principal) {
                assert!((a.conj() - b).norm() <= 1e-9 * a.norm().max(1e-12) + probe.err_est(), "{name}");
            }
        }
    }
}

#[test]
fn even_power_cancellation() {
    let cases = [
        SpectrumSpec::polynomial(vec![q_int(0), q_int(0), q_int(1)], vec![q_int(1)], 1).unwrap(),
        SpectrumSpec::polynomial(vec![q_frac(1, 4), q_int(1), q_int(1)], vec![q_int(2)], 0).unwrap(),
        catalog::entry("sphere_Dpow:3,2").unwrap().spec,
    ];
    for spec in cases {
        let data = continue_zeta(&spec, Region { r_max: 10.0, y_max: 10.0 }, 24).unwrap();
        assert_eq!(data.class_tag, ClassTag::EvenPowerA);
        for n in 1..=8 {
            let z = data.zeta(C64::new(-(n as f64), 0.0)).unwrap();
            assert!(z.norm() <= 1e-10, "zeta(-{n}) = {z}");
        }
    }
}
