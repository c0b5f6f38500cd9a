use entpdf::qstate::random::{random_density_matrix, random_state_with_spectrum};
use entpdf::qstate::{
    eigendecompose, nested_resolution, project_onto, ComplexMatrix4, DensityMatrix, PureState, C64,
};
use entpdf::statelib::{gen_pseudopure, worked_example_state};
use entpdf::Error;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn invalid_matrices_are_rejected() {
    let mut m = ComplexMatrix4::diag([0.5, 0.5, 0.0, 0.0]);
    m[(0, 1)] = C64::new(0.1, 0.0);
    assert!(matches!(DensityMatrix::new(m), Err(Error::InvalidState { .. })));

    let m = ComplexMatrix4::diag([0.5, 0.4, 0.0, 0.0]);
    assert!(matches!(DensityMatrix::new(m), Err(Error::InvalidState { .. })));

    let m = ComplexMatrix4::diag([0.7, 0.4, -0.1, 0.0]);
    assert!(matches!(DensityMatrix::new(m), Err(Error::InvalidState { .. })));

    let mut m = ComplexMatrix4::diag([0.5, 0.5, 0.0, 0.0]);
    m[(2, 2)] = C64::new(f64::NAN, 0.0);
    assert!(DensityMatrix::new(m).is_err());
}

#[test]
fn tiny_negative_eigenvalues_are_clamped() {
    let m = ComplexMatrix4::diag([0.6, 0.4 + 5e-11, -5e-11, 0.0]);
    let rho = DensityMatrix::new(m).unwrap();
    let s = eigendecompose(&rho).unwrap();
    assert!(s.eigenvalues.iter().all(|&v| v >= 0.0));
    assert!((s.eigenvalues.iter().sum::<f64>() - 1.0).abs() < 1e-15);
}

#[test]
fn spectra_of_reference_states() {
    let s = eigendecompose(&DensityMatrix::maximally_mixed()).unwrap();
    assert_eq!(s.eigenvalues, [0.25; 4]);

    let s = eigendecompose(&worked_example_state()).unwrap();
    for (a, b) in s.eigenvalues.iter().zip(&[0.385, 0.288, 0.231, 0.096]) {
        assert!((a - b).abs() < 1e-12);
    }

    let (rho, _) = gen_pseudopure(-0.25).unwrap();
    let s = eigendecompose(&rho).unwrap();
    for (a, b) in s.eigenvalues.iter().zip(&[0.4375, 0.1875, 0.1875, 0.1875]) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn reference_weights() {
    let w = nested_resolution(&eigendecompose(&worked_example_state()).unwrap())
        .unwrap()
        .weights;
    assert!((w[0] - (0.385 - 0.288) / 0.385).abs() < 1e-12);
    assert!((w[0] - 0.252).abs() < 1e-3);

    let (rho, _) = gen_pseudopure(-0.25).unwrap();
    let w = nested_resolution(&eigendecompose(&rho).unwrap()).unwrap().weights;
    assert!((w[0] - 4.0 / 7.0).abs() < 1e-12 && (w[3] - 3.0 / 7.0).abs() < 1e-12);
    assert!(w[1].abs() < 1e-12 && w[2].abs() < 1e-12);

    let psi = PureState::from_real([0.3, 0.1, -0.5, 0.2]).unwrap();
    let w = nested_resolution(&eigendecompose(&DensityMatrix::from_pure(&psi)).unwrap())
        .unwrap()
        .weights;
    assert!((w[0] - 1.0).abs() < 1e-12 && w[1..].iter().all(|v| v.abs() < 1e-12));
}

#[test]
fn projection_examples() {
    let psi = PureState::from_real([0.1, 0.2, 0.3, 0.4]).unwrap();
    let p = project_onto(&ComplexMatrix4::identity(), &psi).unwrap();
    assert!(p.ray_distance(&psi) < 1e-15);
    assert!(project_onto(&PureState::basis(0).projector(), &PureState::basis(1)).is_none());

    let res = nested_resolution(&eigendecompose(&worked_example_state()).unwrap()).unwrap();
    let psi1 = res.eigenvectors[0];
    let p = project_onto(res.projection(2), &psi1).unwrap();
    assert!(p.ray_distance(&psi1) < 1e-9);
}

#[test]
fn degenerate_blocks_are_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let rho = random_state_with_spectrum(&mut rng, [0.4, 0.2, 0.2, 0.2]);
    let a = eigendecompose(&rho).unwrap();
    let b = eigendecompose(&rho).unwrap();
    assert_eq!(a, b);
    let res = nested_resolution(&a).unwrap();
    assert!(res.reconstruct().max_abs_diff(rho.matrix()) < 1e-9);
}

fn check_resolution(rho: &DensityMatrix) -> Result<(), TestCaseError> {
    let spec = eigendecompose(rho).unwrap();
    prop_assert!(spec.reconstruct().max_abs_diff(rho.matrix()) < 1e-9);
    prop_assert!(spec.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
    for i in 0..4 {
        for j in 0..4 {
            let ov = spec.eigenvectors[i].inner(&spec.eigenvectors[j]).norm();
            let want = if i == j { 1.0 } else { 0.0 };
            prop_assert!((ov - want).abs() < 1e-10);
        }
    }
    let res = nested_resolution(&spec).unwrap();
    prop_assert!((res.weights.iter().sum::<f64>() - 1.0).abs() < 1e-10);
    prop_assert!(res.weights.iter().all(|&w| w >= 0.0));
    prop_assert!(res.reconstruct().max_abs_diff(rho.matrix()) < 1e-9);
    for m in 1..=4 {
        let p = res.projection(m);
        prop_assert!((p.trace().re - m as f64).abs() < 1e-9);
        prop_assert!((*p * *p).max_abs_diff(p) < 1e-9);
        if m < 4 {
            let next = res.projection(m + 1);
            prop_assert!((*p * *next).max_abs_diff(p) < 1e-9);
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn random_states_resolve_consistently(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        check_resolution(&random_density_matrix(&mut rng))?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn degenerate_spectra_resolve_consistently(seed in any::<u64>(), pattern in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spectrum = match pattern {
            0 => [0.25; 4],
            1 => [0.4, 0.2, 0.2, 0.2],
            2 => [0.3, 0.3, 0.3, 0.1],
            _ => [0.5, 0.5, 0.0, 0.0],
        };
        check_resolution(&random_state_with_spectrum(&mut rng, spectrum))?;
    }
}
