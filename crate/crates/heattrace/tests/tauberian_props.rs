use heattrace::catalog;
use heattrace::expansion::build_expansion;
use heattrace::number::{q_frac, q_int, q_to_f64};
use heattrace::spectrum::SpectrumSpec;
use heattrace::tauberian::{classify_lacunary, leading_order, SlowlyVarying};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// L from the counting function equals the largest pole of the expansion.
    #[test]
    fn l_matches_leading_pole(a in 1i64..4, g in 1usize..4, db in 0usize..3, n0 in 1u64..3) {
        let mut lam = vec![q_int(0); g + 1];
        lam[g] = q_int(a);
        let mut b = vec![q_int(0); db + 1];
        b[db] = q_int(1);
        let spec = SpectrumSpec::polynomial(lam, b, n0).unwrap();
        let exp = build_expansion(&spec, 2).unwrap();
        let top = exp.strips[0].phi.iter().map(|p| p.s0.re).fold(f64::NEG_INFINITY, f64::max);
        let report = leading_order(&spec).unwrap();
        prop_assert_eq!(report.l, top);
        prop_assert_eq!(report.l, q_to_f64(&q_frac(db as i64 + 1, g as i64)));
    }
}

#[test]
fn gaussian_lacunary_ratio_improves() {
    let spec = catalog::entry("lacunary_gauss").unwrap().spec;
    assert!(classify_lacunary(&spec).lacunary);
    let r = leading_order(&spec).unwrap();
    assert_eq!(r.slowly_varying, SlowlyVarying::LogPower { k: 1.0, a: 0.5 });
    assert_eq!(r.ratio_samples.len(), 3);
    let gaps: Vec<f64> = r.ratio_samples.iter().map(|x| (x.1 - 1.0).abs()).collect();
    assert!(gaps.windows(2).all(|w| w[1] <= w[0]), "{gaps:?}");
    assert!(r.ratio_samples.iter().all(|x| x.1.is_finite() && x.1 > 0.0));
}

#[test]
fn subexponential_log_power() {
    let spec = catalog::entry("subexp_n23").unwrap().spec;
    assert!(!classify_lacunary(&spec).lacunary);
    let r = leading_order(&spec).unwrap();
    assert_eq!(r.l, 0.0);
    let SlowlyVarying::LogPower { a, .. } = r.slowly_varying else { panic!("{:?}", r.slowly_varying) };
    assert!((a - 1.5).abs() < 1e-12);
}

#[test]
fn pow2_fails_slow_variation() {
    let r = leading_order(&catalog::entry("pow2_pow2").unwrap().spec).unwrap();
    assert_eq!(r.l, 1.0);
    assert!(!r.slow_variation_ok);
    assert_eq!(r.slowly_varying, SlowlyVarying::Unknown);
}
