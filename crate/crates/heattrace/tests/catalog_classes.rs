use heattrace::catalog::{self, ExpectedClass};
use heattrace::expansion::{build_expansion, ExpansionError};

const NAMES: [&str; 16] = [
    "sphere_absD:1",
    "sphere_absD:2",
    "sphere_absD:3",
    "sphere_absD:4",
    "sphere_Dpow:1,2",
    "sphere_Dpow:2,2",
    "sphere_Dpow:3,2",
    "sphere_Dpow:4,2",
    "sphere_Dpow:3,4",
    "circle_trivial_spin",
    "circle_nontrivial_spin",
    "theta_operator",
    "q_exponential:0.5,1",
    "pow2_pow2",
    "lacunary_gauss",
    "subexp_n23",
];

#[test]
fn expected_classes_match() {
    for name in NAMES {
        let e = catalog::entry(name).unwrap();
        let Some(want) = e.expected.classification else { continue };
        let got = match build_expansion(&e.spec, 8) {
            Ok(exp) => exp.classification.name(),
            Err(ExpansionError::NoContinuation(_)) => "NoContinuation",
            Err(other) => panic!("{name}: {other}"),
        };
        assert_eq!(got, want.name(), "{name}");
    }
}

#[test]
fn sphere_dpow_odd_has_no_divergent_tail() {
    let e = catalog::entry("sphere_Dpow:1,2").unwrap();
    assert_eq!(e.expected.classification, Some(ExpectedClass::AlmostExact));
}
