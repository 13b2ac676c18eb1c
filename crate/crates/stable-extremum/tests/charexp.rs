use std::f64::consts::PI;

use num_complex::Complex64;
use stable_extremum::charexp::{self, RegimeTag, ScaleConvention, StableParams};
use stable_extremum::oracle::{path_rng, sample_stable};
use stable_extremum::Error;

type C = Complex64;

/// `σ^α|ξ|^α(1 - iβ sign(ξ) tan(πα/2)) - iμξ` for real `ξ`.
fn textbook(alpha: f64, beta: f64, sigma: f64, mu: f64, xi: f64) -> C {
    let s = sigma.powf(alpha) * xi.abs().powf(alpha);
    C::new(s, -s * beta * xi.signum() * (PI * alpha / 2.0).tan()) - C::new(0.0, mu * xi)
}

#[test]
fn sigma_convention_matches_textbook_exponent() {
    for &(alpha, beta, sigma, mu) in &[(1.2, -0.2, 0.2, -0.02), (0.6, 0.5, 0.3, 0.01), (1.8, 0.9, 1.0, 0.0), (0.2, -0.2, 0.2, 0.02)] {
        let p = StableParams::from_beta(alpha, beta, sigma, mu, ScaleConvention::Sigma).unwrap();
        for xi in [-3.0, -0.7, 0.01, 0.7, 25.0] {
            let got = charexp::psi(&p, C::new(xi, 0.0)).unwrap();
            let want = textbook(alpha, beta, sigma, mu, xi);
            assert!((got - want).norm() <= 1e-13 * want.norm().max(1.0), "alpha={alpha} xi={xi}: {got} vs {want}");
        }
    }
}

#[test]
fn symmetric_index_one_is_cauchy() {
    let p = StableParams::new(1.0, 0.3, 0.3, 0.1).unwrap();
    for xi in [-2.0, 0.5, 4.0] {
        let got = charexp::psi(&p, C::new(xi, 0.0)).unwrap();
        let want = C::new(0.3 * PI * f64::abs(xi), -0.1 * xi);
        assert!((got - want).norm() < 1e-14);
    }
}

#[test]
fn conventions_fix_their_normalization() {
    let sum = StableParams::from_beta(1.4, 0.3, 1.0, 0.0, ScaleConvention::SumOne).unwrap();
    assert!((sum.c_plus + sum.c_minus - 1.0).abs() < 1e-15);
    assert!((sum.c_plus - sum.c_minus - 0.3).abs() < 1e-15);
    let abs = StableParams::from_beta(1.4, 0.3, 1.0, 0.0, ScaleConvention::AbsCOne).unwrap();
    assert!((abs.constants().c_plus.norm() - 1.0).abs() < 1e-14);
}

#[test]
fn regimes_are_classified() {
    let tag = |a, cp, cm, mu| charexp::classify(&StableParams::new(a, cp, cm, mu).unwrap()).tag;
    assert_eq!(tag(1.5, 0.2, 0.3, 0.1), RegimeTag::AlphaGt1);
    assert_eq!(tag(0.5, 0.2, 0.3, 0.0), RegimeTag::AlphaLt1ZeroDrift);
    assert_eq!(tag(0.5, 0.2, 0.3, 0.1), RegimeTag::AlphaLt1PosDrift);
    assert_eq!(tag(0.5, 0.2, 0.3, -0.1), RegimeTag::AlphaLt1NegDrift);
    assert_eq!(tag(1.0, 0.2, 0.2, 0.1), RegimeTag::Alpha1Symmetric);
    assert_eq!(tag(1.0, 0.2, 0.3, 0.0), RegimeTag::Alpha1Asymmetric);
    let drift = charexp::classify(&StableParams::new(0.5, 0.2, 0.3, 0.1).unwrap());
    assert!(!drift.sinh_bromwich_allowed && drift.supports_whf());
}

#[test]
fn invalid_parameters_are_rejected() {
    for (a, cp, cm, mu) in [(2.0, 0.1, 0.1, 0.0), (0.0, 0.1, 0.1, 0.0), (1.5, -0.1, 0.1, 0.0), (1.5, 0.0, 0.0, 0.0), (1.5, 0.1, 0.1, f64::NAN)] {
        assert!(matches!(StableParams::new(a, cp, cm, mu), Err(Error::InvalidParams(_))));
    }
    assert!(StableParams::from_beta(1.5, 1.2, 1.0, 0.0, ScaleConvention::Sigma).is_err());
}

#[test]
fn cone_keeps_exponent_in_right_half_plane() {
    for p in [
        StableParams::new(1.2, 0.3, 0.7, -0.02).unwrap(),
        StableParams::new(0.6, 0.5, 0.2, 0.0).unwrap(),
        StableParams::new(1.9, 0.0, 1.0, 0.0).unwrap(),
    ] {
        let cone = charexp::admissible_cone(&p, true).unwrap();
        assert!(cone.gamma_minus < 0.0 && cone.gamma_plus > 0.0);
        let m = charexp::max_arg_psi0_on_cone(&p, &cone).unwrap();
        assert!(m <= PI / 2.0 - cone.gamma0 + 1e-12, "{m} vs {}", PI / 2.0 - cone.gamma0);
    }
}

/// The empirical characteristic function of simulated increments agrees with `e^{-tψ}`.
#[test]
fn sampler_matches_characteristic_function() {
    let n = 100_000;
    for p in [
        StableParams::from_beta(1.2, -0.6, 0.5, 0.1, ScaleConvention::Sigma).unwrap(),
        StableParams::from_beta(0.7, 0.8, 0.5, 0.0, ScaleConvention::Sigma).unwrap(),
        StableParams::new(1.0, 0.2, 0.2, -0.3).unwrap(),
    ] {
        let t = 0.5;
        let mut rng = path_rng(7, 0);
        let xs: Vec<f64> = (0..n).map(|_| sample_stable(&p, t, &mut rng)).collect();
        for xi in [-2.0, 0.5, 3.0] {
            let emp: C = xs.iter().map(|&x| C::new(0.0, xi * x).exp()).sum::<C>() / n as f64;
            let exact = (-t * charexp::psi(&p, C::new(xi, 0.0)).unwrap()).exp();
            // each component has variance at most 1/n
            assert!((emp - exact).norm() < 5.0 / (n as f64).sqrt(), "{p:?} xi={xi}: {emp} vs {exact}");
        }
    }
}
