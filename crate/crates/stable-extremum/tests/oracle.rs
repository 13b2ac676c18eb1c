use stable_extremum::charexp::{ScaleConvention, StableParams};
use stable_extremum::oracle::{self, McConfig};

#[test]
fn simulation_is_deterministic_under_a_seed() {
    let p = StableParams::from_beta(1.3, 0.2, 0.3, 0.0, ScaleConvention::Sigma).unwrap();
    let cfg = McConfig::new(2_000, 16, 11).unwrap();
    let a = oracle::mc_joint_sup(&p, 0.5, &cfg).unwrap();
    let b = oracle::mc_joint_sup(&p, 0.5, &cfg).unwrap();
    assert_eq!(a, b);
    let c = oracle::mc_joint_sup(&p, 0.5, &McConfig::new(2_000, 16, 12).unwrap()).unwrap();
    assert_ne!(a, c);
}

#[test]
fn standard_error_shrinks_like_root_n() {
    let p = StableParams::from_beta(1.3, 0.2, 0.3, 0.0, ScaleConvention::Sigma).unwrap();
    let se = |n| oracle::mc_joint_sup(&p, 0.5, &McConfig::new(n, 8, 3).unwrap()).unwrap().cpdf_sup(0.2).se;
    let r = se(8_000) / se(32_000);
    assert!((r - 2.0).abs() < 0.15, "ratio {r}");
}

#[test]
fn supremum_dominates_terminal_value() {
    let p = StableParams::new(0.7, 0.3, 0.5, 0.02).unwrap();
    let s = oracle::mc_joint_sup(&p, 1.0, &McConfig::new(1_000, 32, 5).unwrap()).unwrap();
    assert!(s.x.iter().zip(&s.sup).all(|(x, m)| m >= x && *m >= 0.0));
}

/// `X - X̄` at an exponential time has the law of the infimum there.
#[test]
fn duality_at_exponential_time() {
    let p = StableParams::from_beta(1.5, 0.4, 0.5, 0.05, ScaleConvention::Sigma).unwrap();
    let (diff, inf) = oracle::mc_exponential_time(&p, 2.0, &McConfig::new(4_000, 64, 9).unwrap()).unwrap();
    let d = oracle::ks_two_sample(&diff, &inf);
    assert!(d < oracle::ks_critical_1pct(diff.len(), inf.len()), "ks {d}");
}

#[test]
fn closed_forms() {
    assert!((oracle::cauchy_cdf(0.4, 0.2, 1.5, 0.3) - 0.5).abs() < 1e-15);
    let p = StableParams::new(1.5, 0.0, 0.4, 0.1).unwrap();
    let o = oracle::spectrally_one_sided_sup(&p).unwrap();
    for q in [0.1, 1.0, 50.0] {
        let b = o.beta_root_real(q).unwrap();
        assert!(b > 0.0);
        assert!((o.kappa(num_complex::Complex64::new(b, 0.0)).unwrap().re - q).abs() < 1e-10 * q.max(1.0));
    }
    assert!(oracle::spectrally_one_sided_sup(&StableParams::new(1.5, 0.1, 0.4, 0.0).unwrap()).is_err());
}

#[test]
fn adaptive_quadrature() {
    let v = oracle::adaptive_gk(|x| num_complex::Complex64::new((-x).exp(), 0.0), 0.0, 1.0, 1e-14).unwrap();
    assert!((v.re - (1.0 - (-1.0f64).exp())).abs() < 1e-14);
}
