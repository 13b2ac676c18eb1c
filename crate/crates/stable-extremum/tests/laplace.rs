use num_complex::Complex64;
use stable_extremum::charexp::ConeSpec;
use stable_extremum::laplace::{self, GwrConfig};
use stable_extremum::Error;

type C = Complex64;

fn cone() -> ConeSpec {
    ConeSpec { gamma_minus: -0.7, gamma_plus: 0.7, sigma: 1.0, gamma0: 0.7 }
}

#[test]
fn stehfest_weights_reproduce_constants() {
    for m in [4, 6, 8] {
        let w = laplace::gaver_stehfest_weights(m);
        assert_eq!(w.len(), 2 * m);
        // transform of the constant 1 is 1/q
        let s: f64 = w.iter().enumerate().map(|(k, w)| w / (k + 1) as f64).sum();
        // the weights reach 1e6 at M = 8, so cancellation costs digits
        assert!((s - 1.0).abs() < 1e-7, "m={m}: {s}");
        assert!(w.iter().sum::<f64>().abs() < 1e-6 * w.iter().map(|x| x.abs()).sum::<f64>());
    }
}

#[test]
fn wynn_rho_accelerates_logarithmic_convergence() {
    let partial: Vec<f64> = (1..=14).scan(0.0, |s, k| {
        *s += 1.0 / (k * k) as f64;
        Some(*s)
    })
    .collect();
    let target = std::f64::consts::PI.powi(2) / 6.0;
    assert!((partial[13] - target).abs() > 0.05);
    assert!((laplace::wynn_rho(&partial) - target).abs() < 1e-8);
}

#[test]
fn backends_invert_an_exponential() {
    let f = |q: C| 1.0 / (q + 1.0);
    let exact = |t: f64| (-t).exp();
    for t in [0.25, 1.0, 2.0] {
        let cfg = laplace::choose_contour_for_cone(t, &cone(), 1e-13).unwrap();
        assert!((laplace::sinh_bromwich_invert(|q| Ok(f(q)), t, &cfg).unwrap() - exact(t)).abs() < 1e-13);
        let g = GwrConfig::new(16, 0.0).unwrap();
        assert!((laplace::gwr_invert(|q| Ok(f(C::new(q, 0.0)).re), t, &g).unwrap() - exact(t)).abs() < 1e-6);
        assert!((laplace::gaver_stehfest(|q| Ok(f(C::new(q, 0.0)).re), t, 8).unwrap() - exact(t)).abs() < 1e-4);
    }
}

#[test]
fn batch_and_pointwise_evaluation_agree() {
    let t = 0.7;
    let g = GwrConfig::new(16, 0.0).unwrap();
    let f = |q: f64| vec![1.0 / (q + 1.0), 1.0 / (q * q + 3.0 * q + 2.0)];
    let a = laplace::gwr_invert_vec(|q| Ok(f(q)), t, &g).unwrap();
    let b = laplace::gwr_invert_batch(|qs| Ok(qs.iter().map(|&q| f(q)).collect()), t, &g).unwrap();
    assert_eq!(a, b);
    let cfg = laplace::choose_contour_for_cone(t, &cone(), 1e-12).unwrap();
    let h = |q: C| vec![1.0 / (q + 1.0), q / (q * q + 1.0)];
    let a = laplace::sinh_bromwich_invert_vec(|q| Ok(h(q)), t, &cfg).unwrap();
    let b = laplace::sinh_bromwich_invert_batch(|qs| Ok(qs.iter().map(|&q| h(q)).collect()), t, &cfg).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() < 1e-15);
    }
    assert!((a[1] - t.cos()).abs() < 1e-12);
}

#[test]
fn nonpositive_horizon_is_rejected() {
    let g = GwrConfig::new(16, 0.0).unwrap();
    assert!(laplace::gwr_invert(|q| Ok(1.0 / q), 0.0, &g).is_err());
    assert!(GwrConfig::new(7, 0.0).is_err());
    let e = laplace::gwr_invert(|_| Err(Error::Domain("boom".into())), 1.0, &g);
    assert!(e.is_err());
}
