use heattrace::catalog;
use heattrace::dirichlet::{abscissa, heat_trace_direct, mellin_direct, zeta_direct};
use heattrace::specfun::gamma;
use heattrace::spectrum::SpectrumSpec;
use num_complex::Complex64 as C64;
use proptest::prelude::*;

const NAMES: [&str; 6] =
    ["sphere_absD:3", "circle_trivial_spin", "theta_operator", "q_exponential:0.5,1", "sphere_Dpow:3,2", "pow2_pow2"];

fn spec(name: &str) -> SpectrumSpec {
    catalog::entry(name).unwrap().spec
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn decreasing_in_t(i in 0usize..NAMES.len(), t in 0.01f64..5.0, f in 1.01f64..2.0) {
        let s = spec(NAMES[i]);
        let a = heat_trace_direct(&s, t, 1e-15).unwrap();
        let b = heat_trace_direct(&s, t * f, 1e-15).unwrap();
        prop_assert!(b < a);
    }

    #[test]
    fn truncation_identity(i in 0usize..NAMES.len(), n in 1u64..30, t in 0.02f64..4.0) {
        let s = spec(NAMES[i]);
        let start = s.first_index();
        let head: f64 = s.kernel.iter().map(|m| m.1 * (-t * m.0).exp()).sum::<f64>()
            + (start..start + n).map(|k| s.multiplicity(k) * (-t * s.eigenvalue(k)).exp()).sum::<f64>();
        let full = heat_trace_direct(&s, t, 1e-15).unwrap();
        let rest = heat_trace_direct(&s.shifted(n).unwrap(), t, 1e-15).unwrap();
        prop_assert!((head + rest - full).abs() <= 1e-13 * full);
    }
}

/// t^α·h(t) along t = 2^{−j} stays bounded for α = L + 1/4.
#[test]
fn small_time_growth() {
    for name in ["sphere_absD:3", "theta_operator", "circle_trivial_spin"] {
        let s = spec(name);
        let alpha = abscissa(&s).abscissa_zeta + 0.25;
        let seq: Vec<f64> = (0..=20)
            .map(|j| {
                let t = 2f64.powi(-j);
                t.powf(alpha) * heat_trace_direct(&s, t, 1e-12 / t).unwrap()
            })
            .collect();
        let early = seq[..10].iter().cloned().fold(0.0, f64::max);
        let late = seq[10..].iter().cloned().fold(0.0, f64::max);
        assert!(late <= early, "{name}: {seq:?}");
    }
}

#[test]
fn mellin_matches_gamma_zeta() {
    let s = spec("circle_nontrivial_spin");
    let m = mellin_direct(&s, 2.5, 1e-9).unwrap();
    let z = zeta_direct(&s, C64::new(2.5, 0.0), 1e-14).unwrap().re;
    let g = gamma(C64::new(2.5, 0.0)).unwrap().re;
    assert!((m - g * z).abs() <= 1e-6 * m);
}
