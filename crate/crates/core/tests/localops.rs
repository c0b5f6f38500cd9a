use std::f64::consts::{FRAC_PI_2, PI};

use entpdf::entdensity::plane_markers;
use entpdf::localops::{
    canonical_plane, complement_plane, find_separable_in_plane, pure_concurrence, schmidt_canonical,
    triple_canonical, CanonicalPlane, LocalUnitaryPair,
};
use entpdf::qstate::random::{random_orthonormal_basis, random_pure_state};
use entpdf::qstate::{eigendecompose, nested_resolution, ComplexMatrix4, PureState, C64};
use entpdf::statelib::worked_example_state;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn worked_example_vectors() -> [PureState; 4] {
    nested_resolution(&eigendecompose(&worked_example_state()).unwrap())
        .unwrap()
        .eigenvectors
}

/// Distance of `v` from span{a, b}.
fn off_plane(v: &PureState, a: &PureState, b: &PureState) -> f64 {
    let (ca, cb) = (a.inner(v), b.inner(v));
    let (av, bv, vv) = (a.amplitudes(), b.amplitudes(), v.amplitudes());
    (0..4)
        .map(|i| (vv[i] - ca * av[i] - cb * bv[i]).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

#[test]
fn concurrence_examples() {
    assert_eq!(pure_concurrence(&PureState::basis(0)), 0.0);
    let singlet = PureState::from_real([0.0, 1.0, -1.0, 0.0]).unwrap();
    assert!((pure_concurrence(&singlet) - 1.0).abs() < 1e-15);
    let psi4 = PureState::from_real([0.0, 0.383, -0.784, 0.489]).unwrap();
    assert!((pure_concurrence(&psi4) - 0.6005).abs() < 1e-3);
}

#[test]
fn schmidt_examples() {
    let (t, _) = schmidt_canonical(&PureState::basis(0));
    assert!(t.abs() < 1e-15);
    let singlet = PureState::from_real([0.0, 1.0, -1.0, 0.0]).unwrap();
    let (t, _) = schmidt_canonical(&singlet);
    assert!((t - FRAC_PI_2).abs() < 1e-12);
    let psi1 = PureState::from_real([0.998, 0.0, 0.031, 0.050]).unwrap();
    let (t, _) = schmidt_canonical(&psi1);
    assert!((t.sin() - pure_concurrence(&psi1)).abs() < 1e-10);
    assert!((t.sin() - 0.0998).abs() < 1e-3);
}

#[test]
fn separable_state_examples() {
    let b1 = PureState::from_real([0.0, 1.0, 1.0, 0.0]).unwrap();
    let b2 = PureState::from_real([0.0, 1.0, -1.0, 0.0]).unwrap();
    let s = find_separable_in_plane(&b1, &b2).unwrap();
    assert!(s.ray_distance(&PureState::basis(1)) < 1e-12);

    // brute-force scan of the worked-example plane confirms a separable state exists
    let v = worked_example_vectors();
    let s = find_separable_in_plane(&v[0], &v[1]).unwrap();
    assert!(pure_concurrence(&s) < 1e-9);
    assert!(off_plane(&s, &v[0], &v[1]) < 1e-9);
    let mut best = f64::INFINITY;
    for i in 0..=400 {
        for j in 0..400 {
            let th = PI * i as f64 / 400.0;
            let ph = 2.0 * PI * j as f64 / 400.0;
            let a = C64::from_polar((th / 2.0).cos(), ph / 2.0);
            let b = C64::from_polar((th / 2.0).sin(), -ph / 2.0);
            let (u, w) = (v[0].amplitudes(), v[1].amplitudes());
            let psi: [C64; 4] = std::array::from_fn(|k| a * u[k] + b * w[k]);
            best = best.min(2.0 * (psi[0] * psi[3] - psi[1] * psi[2]).norm());
        }
    }
    assert!(best < 0.02, "grid minimum {best}");
}

#[test]
fn canonical_plane_examples() {
    let cp = canonical_plane(&PureState::basis(0), &PureState::basis(3)).unwrap();
    assert!(cp.x.abs() < 1e-15 && cp.y.abs() < 1e-15 && (cp.z - 1.0).abs() < 1e-15);

    let v = worked_example_vectors();
    let cp = canonical_plane(&v[0], &v[1]).unwrap();
    assert!((cp.x - 0.00945).abs() < 1e-3, "{cp:?}");
    assert!((cp.y - 0.5290).abs() < 1e-3);
    assert!((cp.z - 0.8485).abs() < 1e-3);

    let b1 = PureState::from_real([0.0, 1.0, 1.0, 0.0]).unwrap();
    let b2 = PureState::from_real([0.0, 1.0, -1.0, 0.0]).unwrap();
    let cp = canonical_plane(&b1, &b2).unwrap();
    assert!(cp.x.abs() < 1e-12 && cp.y.abs() < 1e-12 && (cp.z - 1.0).abs() < 1e-12);
}

#[test]
fn complement_examples() {
    let cp = CanonicalPlane::from_xyz(0.0, 0.0, 1.0).unwrap();
    let (a, b) = complement_plane(&cp);
    assert_eq!(a, PureState::basis(1));
    assert!((b.amplitudes()[2] + 1.0).norm() < 1e-15);

    let v = worked_example_vectors();
    let cp = canonical_plane(&v[0], &v[1]).unwrap();
    let (a, b) = complement_plane(&cp);
    let cc = canonical_plane(&a, &b).unwrap();
    let (m1, m2) = (plane_markers(cp.x, cp.y, cp.z), plane_markers(cc.x, cc.y, cc.z));
    assert!((m1.e_max - m2.e_max).abs() < 1e-9 && (m1.e_cusp - m2.e_cusp).abs() < 1e-9);
}

#[test]
fn complement_entanglement_map_is_identical() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..50 {
        let b = random_orthonormal_basis(&mut rng);
        let cp = canonical_plane(&b[0], &b[1]).unwrap();
        let (k1, k2) = complement_plane(&cp);
        assert!(pure_concurrence(&k1) < 1e-12);
        for &(al, be) in &[(0.3, 0.8), (0.9, 0.1), (0.5, 0.5)] {
            let n = ((al * al + be * be) as f64).sqrt();
            let (a, b) = (C64::new(al / n, 0.0), C64::new(0.0, be / n));
            let on: [C64; 4] = std::array::from_fn(|i| a * cp.chi1.amplitudes()[i] + b * cp.chi2.amplitudes()[i]);
            let off: [C64; 4] = std::array::from_fn(|i| a * k1.amplitudes()[i] + b * k2.amplitudes()[i]);
            let c_on = pure_concurrence(&PureState::new(on).unwrap());
            let c_off = pure_concurrence(&PureState::new(off).unwrap());
            assert!((c_on - c_off).abs() < 1e-12);
        }
    }
}

#[test]
fn triple_examples() {
    let singlet = PureState::from_real([0.0, 1.0, -1.0, 0.0]).unwrap();
    let ct = triple_canonical(&(ComplexMatrix4::identity() - singlet.projector())).unwrap();
    assert!((ct.e_perp - 1.0).abs() < 1e-12);
    let ct = triple_canonical(&(ComplexMatrix4::identity() - PureState::basis(0).projector())).unwrap();
    assert!(ct.e_perp.abs() < 1e-12);

    let res = nested_resolution(&eigendecompose(&worked_example_state()).unwrap()).unwrap();
    let ct = triple_canonical(res.projection(3)).unwrap();
    assert!((ct.e_perp - 0.6005).abs() < 1e-3);
    for v in &res.eigenvectors[..3] {
        assert!(v.inner(&ct.psi_perp).norm() < 1e-10);
    }
    assert!(triple_canonical(res.projection(2)).is_err());
}

#[test]
fn canonical_triple_matrix_shape() {
    let (c1, c2) = (C64::new(0.6, 0.0), C64::new(0.0, 0.8));
    let mid = PureState::new([C64::new(0.0, 0.0), c1, c2, C64::new(0.0, 0.0)]).unwrap();
    let pi3 = PureState::basis(0).projector() + PureState::basis(3).projector() + mid.projector();
    let rho = pi3.scale(1.0 / 3.0);
    assert!((rho[(0, 0)].re - 1.0 / 3.0).abs() < 1e-10 && (rho[(3, 3)].re - 1.0 / 3.0).abs() < 1e-10);
    assert!((rho[(1, 2)] - c1 * c2.conj() / 3.0).norm() < 1e-10);
    assert!((rho[(2, 1)] - c1.conj() * c2 / 3.0).norm() < 1e-10);
    assert!((rho[(1, 1)].re - c1.norm_sqr() / 3.0).abs() < 1e-10);
    let ct = triple_canonical(&pi3).unwrap();
    let expect = pure_concurrence(&ct.psi_perp);
    assert!((ct.e_perp - expect).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn concurrence_is_lo_invariant(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = random_pure_state(&mut rng);
        let lo = LocalUnitaryPair::random(&mut rng);
        prop_assert!((pure_concurrence(&psi) - pure_concurrence(&lo.apply(&psi))).abs() < 1e-10);
    }

    #[test]
    fn schmidt_form_is_reached(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = random_pure_state(&mut rng);
        let (theta, lo) = schmidt_canonical(&psi);
        prop_assert!((0.0..=FRAC_PI_2 + 1e-12).contains(&theta));
        prop_assert!((theta.sin() - pure_concurrence(&psi)).abs() < 1e-10);
        let target = PureState::from_real([(theta / 2.0).cos(), 0.0, 0.0, (theta / 2.0).sin()]).unwrap();
        prop_assert!(lo.apply(&psi).ray_distance(&target) < 1e-9);
    }

    #[test]
    fn canonical_plane_is_lo_invariant(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = random_orthonormal_basis(&mut rng);
        let cp = canonical_plane(&b[0], &b[1]).unwrap();
        prop_assert!(cp.x >= 0.0 && cp.y >= 0.0 && cp.z >= 0.0);
        prop_assert!((cp.x * cp.x + cp.y * cp.y + cp.z * cp.z - 1.0).abs() < 1e-10);
        prop_assert_eq!(cp.chi1, PureState::basis(0));
        // lo maps the plane onto span{χ₁, χ₂}
        for v in &b[..2] {
            prop_assert!(off_plane(&cp.lo.apply(v), &cp.chi1, &cp.chi2) < 1e-9);
        }
        let lo = LocalUnitaryPair::random(&mut rng);
        let moved = canonical_plane(&lo.apply(&b[0]), &lo.apply(&b[1])).unwrap();
        prop_assert!((moved.x - cp.x).abs() < 1e-8, "{:?} vs {:?}", moved, cp);
        prop_assert!((moved.y - cp.y).abs() < 1e-8);
        prop_assert!((moved.z - cp.z).abs() < 1e-8);
    }

    #[test]
    fn complement_twice_preserves_markers(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = random_orthonormal_basis(&mut rng);
        let cp = canonical_plane(&b[0], &b[1]).unwrap();
        let (a1, a2) = complement_plane(&cp);
        let c1 = canonical_plane(&a1, &a2).unwrap();
        let (d1, d2) = complement_plane(&c1);
        let c2 = canonical_plane(&d1, &d2).unwrap();
        let m0 = plane_markers(cp.x, cp.y, cp.z);
        let m2 = plane_markers(c2.x, c2.y, c2.z);
        prop_assert!((m0.e_max - m2.e_max).abs() < 1e-9 && (m0.e_cusp - m2.e_cusp).abs() < 1e-9);
        for v in [&cp.chi1, &cp.chi2] {
            prop_assert!(a1.inner(v).norm() < 1e-12 && a2.inner(v).norm() < 1e-12);
        }
    }
}
