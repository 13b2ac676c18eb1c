use num_complex::Complex64;
use stable_extremum::charexp::{self, StableParams};
use stable_extremum::oracle::spectrally_one_sided_sup;
use stable_extremum::whf::{self, GridSpec, RayAngles, WhfGrids};

type C = Complex64;

fn grids(p: &StableParams, complex_q: bool) -> WhfGrids {
    let cone = charexp::admissible_cone(p, complex_q).unwrap();
    let a = if complex_q { RayAngles::complex_q(&cone) } else { RayAngles::real_q(&cone) };
    whf::build_grids(p, &cone, a, GridSpec::new(1e-12, 0.5)).unwrap()
}

#[test]
fn factors_multiply_to_the_resolvent_symbol() {
    let p = StableParams::new(1.2, 0.3, 0.7, -0.02).unwrap();
    let g = grids(&p, true);
    for q in [C::new(0.8, 0.0), C::new(2.0, -5.0)] {
        assert!(whf::wh_identity_residual(&g, q, &whf::validation_points()).unwrap() < 1e-12);
    }
    let p = StableParams::new(0.4, 0.3, 0.2, 0.05).unwrap();
    let g = grids(&p, false);
    assert!(whf::wh_identity_residual(&g, C::new(3.0, 0.0), &whf::validation_points()).unwrap() < 1e-12);
}

#[test]
fn factors_are_characteristic_functions() {
    let p = StableParams::new(1.5, 0.2, 0.4, 0.1).unwrap();
    let g = grids(&p, true);
    let q = C::new(1.3, 0.0);
    let zero = C::new(0.0, 0.0);
    assert!((whf::phi_plus(&g, q, zero).unwrap() - 1.0).norm() < 1e-12);
    assert!((whf::phi_minus(&g, q, zero).unwrap() - 1.0).norm() < 1e-12);
    // |E e^{iξX}| ≤ 1 on the real axis
    for xi in [-4.0, -0.3, 2.0, 30.0] {
        assert!(whf::phi_plus(&g, q, C::new(xi, 0.0)).unwrap().norm() <= 1.0 + 1e-12);
    }
}

/// Mirroring the process swaps the factors.
#[test]
fn mirrored_process_swaps_factors() {
    let p = StableParams::new(1.3, 0.2, 0.5, 0.04).unwrap();
    let m = StableParams::new(1.3, 0.5, 0.2, -0.04).unwrap();
    let (g, h) = (grids(&p, true), grids(&m, true));
    let q = C::new(0.9, 1.5);
    for xi in [-2.5, 0.4, 6.0] {
        let a = whf::phi_plus(&g, q, C::new(xi, 0.0)).unwrap();
        let b = whf::phi_minus(&h, q, C::new(-xi, 0.0)).unwrap();
        assert!((a - b).norm() < 1e-12, "xi={xi}: {a} vs {b}");
    }
}

#[test]
fn one_sided_factor_is_rational() {
    let p = StableParams::new(1.5, 0.0, 0.4, 0.1).unwrap();
    let o = spectrally_one_sided_sup(&p).unwrap();
    let g = grids(&p, true);
    for q in [C::new(0.5, 0.0), C::new(2.0, 3.0)] {
        for xi in [-3.0, 0.2, 7.0] {
            let xi = C::new(xi, 0.0);
            assert!((whf::phi_plus(&g, q, xi).unwrap() - o.phi(q, xi).unwrap()).norm() < 1e-12);
        }
    }
}

#[test]
fn identity_gives_the_opposite_factor() {
    let p = StableParams::new(1.7, 0.3, 0.3, 0.0).unwrap();
    let g = grids(&p, true);
    let (q, xi) = (C::new(1.0, 0.5), C::new(0.8, 0.0));
    let plus = whf::phi_plus(&g, q, xi).unwrap();
    let minus = whf::phi_opposite_via_identity(&p, q, xi, plus).unwrap();
    assert!((minus - whf::phi_minus(&g, q, xi).unwrap()).norm() < 1e-12);
}
