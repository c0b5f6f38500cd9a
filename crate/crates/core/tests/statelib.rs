use entpdf::analysis::{extract_markers, negativity, wootters_concurrence};
use entpdf::qstate::{eigendecompose, nested_resolution, DensityMatrix, PureState};
use entpdf::statelib::{
    gen_cross_tensor, gen_product, gen_pseudopure, gen_quadrupolar, gen_vector_polarized, ExpectedSummary,
    Family, FamilySpec, PlaneTag,
};
use entpdf::Error;
use proptest::prelude::*;

fn check_summary(rho: &DensityMatrix, exp: &ExpectedSummary) {
    let ms = extract_markers(rho).unwrap();
    for (a, b) in ms.weights().iter().zip(&exp.weights) {
        assert!((a - b).abs() < 1e-8, "weights {:?} vs {:?}", ms.weights(), exp.weights);
    }
    if let Some(d) = exp.delta {
        assert!((ms.e1 - d).abs() < 1e-6, "e1 {} vs {d}", ms.e1);
    }
    match exp.plane {
        Some(PlaneTag::Separable) => assert!(ms.e_max < 1e-6, "{ms:?}"),
        Some(PlaneTag::BellPlane) => assert!((ms.e_max - 1.0).abs() < 1e-6 && (ms.e_cusp - 1.0).abs() < 1e-6),
        None => {}
    }
    if let Some(e) = exp.e_perp {
        assert!((ms.e_perp - e).abs() < 1e-6, "e_perp {} vs {e}", ms.e_perp);
    }
}

#[test]
fn representative_families_match_summaries() {
    for spec in FamilySpec::representative() {
        let (rho, exp) = spec.generate().unwrap();
        assert!((exp.weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        check_summary(&rho, &exp);
    }
}

#[test]
fn family_examples() {
    let (rho, exp) = gen_product(0.0, 0.0).unwrap();
    assert!(rho.matrix().max_abs_diff(DensityMatrix::maximally_mixed().matrix()) < 1e-15);
    assert_eq!(exp.weights, [0.0, 0.0, 0.0, 1.0]);

    let (rho, exp) = gen_product(1.0, 1.0).unwrap();
    assert!((rho.matrix()[(0, 0)].re - 1.0).abs() < 1e-15);
    assert_eq!(exp.weights[0], 1.0);
    assert_eq!(exp.delta, Some(0.0));

    let (_, exp) = gen_pseudopure(-0.25).unwrap();
    assert!((exp.weights[0] - 4.0 / 7.0).abs() < 1e-15 && (exp.weights[3] - 3.0 / 7.0).abs() < 1e-15);
    assert_eq!(exp.delta, Some(1.0));
    assert!(exp.plane.is_none() && exp.e_perp.is_none());

    let (rho, exp) = gen_pseudopure(0.2).unwrap();
    check_summary(&rho, &exp);
    assert_eq!(exp.e_perp, Some(1.0));

    let (rho, exp) = gen_cross_tensor(0.1).unwrap();
    let ev = eigendecompose(&rho).unwrap().eigenvalues;
    for (a, b) in ev.iter().zip(&[0.45, 0.25, 0.25, 0.05]) {
        assert!((a - b).abs() < 1e-12);
    }
    check_summary(&rho, &exp);

    let (rho, exp) = gen_vector_polarized(0.5, 0.5).unwrap();
    assert!(rho.matrix()[(3, 3)].re.abs() < 1e-15);
    check_summary(&rho, &exp);
}

#[test]
fn quadrupolar_eigenvectors_are_bell_states() {
    let (rho, exp) = gen_quadrupolar(0.15, 0.08).unwrap();
    check_summary(&rho, &exp);
    let res = nested_resolution(&eigendecompose(&rho).unwrap()).unwrap();
    for v in &res.eigenvectors {
        assert!((entpdf::localops::pure_concurrence(v) - 1.0).abs() < 1e-12);
    }
    let singlet = PureState::from_real([0.0, 1.0, -1.0, 0.0]).unwrap();
    assert!(res.eigenvectors[0].ray_distance(&PureState::from_real([0.0, 1.0, 1.0, 0.0]).unwrap()) < 1e-12);
    assert!(res.eigenvectors[3].ray_distance(&PureState::from_real([1.0, 0.0, 0.0, -1.0]).unwrap()) < 1e-12);
    assert!(res.eigenvectors.iter().any(|v| v.ray_distance(&singlet) < 1e-12));
}

#[test]
fn constraint_violations_are_reported() {
    let err = gen_cross_tensor(0.2).unwrap_err();
    assert!(matches!(&err, Error::Domain(m) if m.contains("p ≤ 1/8")), "{err}");
    assert!(gen_vector_polarized(0.7, 0.6).is_err());
    assert!(gen_pseudopure(0.5).is_err());
    assert!(gen_pseudopure(-1.5).is_err());
    assert!(gen_quadrupolar(0.05, 0.1).is_err());
    assert!(gen_quadrupolar(0.2, 0.1).is_err());
    assert!(gen_product(1.2, 0.0).is_err());
    assert!(gen_product(f64::NAN, 0.0).is_err());
}

#[test]
fn family_specs_parse_and_validate() {
    assert_eq!("cross_tensor".parse::<Family>().unwrap(), Family::CrossTensor);
    assert!("nope".parse::<Family>().is_err());
    assert!(FamilySpec::new(Family::Pseudopure, &[]).generate().is_err());
    assert!(FamilySpec::new(Family::Pseudopure, &[("k", 0.1), ("p", 0.1)]).generate().is_err());
    let json = serde_json::to_string(&FamilySpec::new(Family::Quadrupolar, &[("lam", 0.1), ("mu_q", 0.0)])).unwrap();
    let back: FamilySpec = serde_json::from_str(&json).unwrap();
    assert_eq!(back.family, Family::Quadrupolar);
    assert!(json.contains("\"quadrupolar\""));
}

#[test]
fn nmr_regime_is_resolved() {
    let (rho, exp) = gen_pseudopure(-1e-6).unwrap();
    assert_eq!(wootters_concurrence(&rho), 0.0);
    assert!(negativity(&rho) < 1e-15);
    let w1 = extract_markers(&rho).unwrap().w1;
    let want = 4e-6 / (1.0 + 3e-6);
    assert!(w1 > 0.0 && (w1 - want).abs() < 1e-15);
    assert!((exp.weights[0] - want).abs() < 1e-18);
}

fn family_params() -> impl Strategy<Value = FamilySpec> {
    prop_oneof![
        (0.0..=1.0f64, 0.0..=1.0f64).prop_map(|(a, b)| FamilySpec::new(Family::Product, &[("k1", a), ("k2", b)])),
        (0.0..=1.0f64, 0.0..=1.0f64)
            .prop_map(|(a, t)| FamilySpec::new(Family::VectorPolarized, &[("p1", a), ("p2", (1.0 - a) * t)])),
        (-1.0..=1.0 / 3.0f64).prop_map(|k| FamilySpec::new(Family::Pseudopure, &[("k", k)])),
        (0.0..=0.125f64).prop_map(|p| FamilySpec::new(Family::CrossTensor, &[("p", p)])),
        (0.0..=0.25f64, 0.0..=1.0f64).prop_map(|(s, t)| {
            // lam + mu_q = s, mu_q ≤ lam
            let mu = s * t / 2.0;
            FamilySpec::new(Family::Quadrupolar, &[("lam", s - mu), ("mu_q", mu)])
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn generated_states_are_valid(spec in family_params()) {
        let (rho, exp) = spec.generate().unwrap();
        let ev = eigendecompose(&rho).unwrap().eigenvalues;
        prop_assert!(ev.iter().all(|&v| v >= 0.0));
        prop_assert!((rho.matrix().trace().re - 1.0).abs() < 1e-12);
        prop_assert!(exp.weights.iter().all(|&w| w >= 0.0));
        prop_assert!((exp.weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let ms = extract_markers(&rho).unwrap();
        for (a, b) in ms.weights().iter().zip(&exp.weights) {
            prop_assert!((a - b).abs() < 1e-8, "{:?}: {:?} vs {:?}", spec, ms.weights(), exp.weights);
        }
    }
}
