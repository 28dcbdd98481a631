use heattrace::catalog;
use heattrace::dirichlet::heat_trace_direct;
use heattrace::expansion::{
    build_expansion, evaluate_expansion, evaluate_expansion_cells_reversed, evaluate_expansion_complex,
    Classification,
};
use heattrace::number::{q_frac, q_to_f64};
use heattrace::spectrum::SpectrumSpec;
use proptest::prelude::*;

fn spec(name: &str) -> SpectrumSpec {
    catalog::entry(name).unwrap().spec
}

const EXACT: [&str; 5] = ["sphere_absD:1", "sphere_absD:3", "circle_trivial_spin", "q_exponential:0.5,1", "pow2_pow2"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn remainder_within_bound(i in 0usize..EXACT.len(), n in 1usize..6, t in 0.001f64..0.125) {
        let s = spec(EXACT[i]);
        let exp = build_expansion(&s, n).unwrap();
        let b = exp.strips[n - 1].remainder.unwrap();
        let direct = heat_trace_direct(&s, t, 1e-16 / t).unwrap();
        let f = (direct - evaluate_expansion(&exp, t, n)).abs();
        prop_assert!(f <= 1.05 * b.remainder_bound(t) + 1e-14 * direct, "{f} > {}", b.remainder_bound(t));
    }

    #[test]
    fn exact_classes_converge(i in 0usize..EXACT.len(), t in 0.05f64..3.0) {
        let s = spec(EXACT[i]);
        let exp = build_expansion(&s, 14).unwrap();
        let direct = heat_trace_direct(&s, t, 1e-16).unwrap();
        let e4 = (direct - evaluate_expansion(&exp, t, 4)).abs();
        let e14 = (direct - evaluate_expansion(&exp, t, 14)).abs();
        prop_assert!(e14 <= e4 + 1e-13 * direct, "{e14} vs {e4}");
    }

    #[test]
    fn output_is_real(i in 0usize..EXACT.len(), t in 0.01f64..5.0) {
        let exp = build_expansion(&spec(EXACT[i]), 6).unwrap();
        let z = evaluate_expansion_complex(&exp, t, 6);
        prop_assert!(z.im.abs() <= 1e-12 * z.re.abs().max(1.0));
    }

    #[test]
    fn cell_order_irrelevant(i in 3usize..EXACT.len(), t in 0.01f64..5.0) {
        let exp = build_expansion(&spec(EXACT[i]), 6).unwrap();
        let a = evaluate_expansion(&exp, t, 6);
        let b = evaluate_expansion_cells_reversed(&exp, t, 6);
        prop_assert!((a - b).abs() < 1e-10 * a.abs().max(1.0));
    }

    #[test]
    fn scaling_covariance(i in 0usize..EXACT.len(), p in 1i64..9, d in 1i64..5, t in 0.02f64..0.5) {
        let s = spec(EXACT[i]);
        let a = q_frac(p, d);
        let scaled = s.with_scale(a.clone()).unwrap();
        let e1 = build_expansion(&s, 5).unwrap();
        let e2 = build_expansion(&scaled, 5).unwrap();
        let v1 = evaluate_expansion(&e1, q_to_f64(&a) * t, 5);
        let v2 = evaluate_expansion(&e2, t, 5);
        prop_assert!((v1 - v2).abs() <= 1e-10 * v1.abs());
        let ex1: Vec<f64> = e1.strips.iter().flat_map(|s| s.phi.iter().map(|p| p.s0.re)).collect();
        let ex2: Vec<f64> = e2.strips.iter().flat_map(|s| s.phi.iter().map(|p| p.s0.re)).collect();
        prop_assert_eq!(ex1, ex2);
    }
}

/// F_R/t^R along t = 2^{−j}, j = 3..20, for the strip with R near 1: bounded,
/// and no larger at j = 20 than at j = 10.
#[test]
fn residual_law_dyadic() {
    for name in ["sphere_absD:1", "sphere_absD:3", "q_exponential:0.5,1", "sphere_Dpow:3,2"] {
        let s = spec(name);
        let exp = build_expansion(&s, 4).unwrap();
        let n = exp.strips.iter().position(|st| st.r >= 0.5).unwrap() + 1;
        let r = exp.strips[n - 1].r;
        let ratio = |j: i32| {
            let t = 2f64.powi(-j);
            let direct = heat_trace_direct(&s, t, 1e-16 / t).unwrap();
            let f = (direct - evaluate_expansion(&exp, t, n)).abs();
            (f - 1e-13 * direct).max(0.0) / t.powf(r)
        };
        let seq: Vec<f64> = (3..=20).map(ratio).collect();
        let first = seq[0].max(1e-300);
        assert!(seq.iter().all(|x| *x <= 10.0 * first + 1.0), "{name}: {seq:?}");
        assert!(ratio(20) <= ratio(10) * 1.01 + 1e-12, "{name}: R = {r} {seq:?}");
    }
}

#[test]
fn theta_residual_is_jacobi_term() {
    let s = spec("theta_operator");
    let exp = build_expansion(&s, 5).unwrap();
    let Classification::AlmostExact { f_inf: Some(j), .. } = exp.classification else { panic!() };
    for t in [0.25, 0.5, 1.0, 2.0, 4.0] {
        let direct = heat_trace_direct(&s, t, 1e-16).unwrap();
        let resid = direct - evaluate_expansion(&exp, t, 5);
        assert!((resid - j.eval(t)).abs() < 1e-12, "t = {t}");
    }
}
