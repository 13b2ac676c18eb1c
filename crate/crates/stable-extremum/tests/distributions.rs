use proptest::prelude::*;
use stable_extremum::charexp::{ScaleConvention, StableParams};
use stable_extremum::distributions::{
    cpdf_sup, cpdf_sup_many, cpdf_x, cpdf_x_many, exchange_diag, exchange_expectation, exchange_kernel,
    exchange_payoff, general_expectation, joint_cpdf, joint_cpdf_many, joint_v1_many, EvalRequest, Method,
};
use stable_extremum::oracle::{self, McConfig};
use stable_extremum::Error;

fn table_params(alpha: f64, mu: f64) -> StableParams {
    StableParams::from_beta(alpha, -0.2, 0.2, mu, ScaleConvention::Sigma).unwrap()
}

#[test]
fn supremum_cdf_reproduces_first_table() {
    let req = EvalRequest::new(table_params(1.2, -0.02), 0.25, Method::SinhBromwich, 1e-10).unwrap();
    let v = cpdf_sup_many(&req, 0.0, &[0.025, 0.075]).unwrap();
    assert!((v[0] - 0.238098430142687).abs() < 1e-9, "{}", v[0]);
    assert!((v[1] - 0.603375861525033).abs() < 1e-9, "{}", v[1]);
}

#[test]
fn joint_cdf_reproduces_first_cell() {
    let req = EvalRequest::new(table_params(1.2, -0.02), 0.25, Method::SinhBromwich, 1e-10).unwrap();
    let v = joint_v1_many(&req, 0.0, &[(0.0125 - 0.075, 0.0125)]).unwrap();
    assert!((v[0] - 0.12244233311163).abs() < 1e-8, "{}", v[0]);
}

#[test]
fn backends_agree_within_the_real_axis_ceiling() {
    let req = EvalRequest::new(table_params(0.2, 0.0), 0.25, Method::SinhBromwich, 1e-10).unwrap();
    let a = [0.0125, 0.05];
    let s = cpdf_sup_many(&req, 0.0, &a).unwrap();
    let g = cpdf_sup_many(&req.with_method(Method::Gwr).unwrap(), 0.0, &a).unwrap();
    for (x, y) in s.iter().zip(&g) {
        assert!((x - y).abs() < 1e-6);
    }
}

#[test]
fn cdf_of_x_matches_cauchy() {
    let p = StableParams::new(1.0, 0.25, 0.25, -0.1).unwrap();
    let req = EvalRequest::new(p, 2.0, Method::DirectFourier, 1e-13).unwrap();
    for y in [-3.0, -0.2, 0.0, 1.5] {
        let v = cpdf_x(&req, 0.0, y).unwrap();
        assert!((v - oracle::cauchy_cdf(0.25, -0.1, 2.0, y)).abs() < 1e-12);
    }
}

/// `P[X ≤ a₁, X̄ ≤ a₂] + P[X ≤ a₁, X̄ > a₂] = P[X ≤ a₁]`.
#[test]
fn joint_and_complement_add_up_to_marginal() {
    let p = StableParams::from_beta(1.5, 0.3, 0.3, 0.05, ScaleConvention::Sigma).unwrap();
    let req = EvalRequest::new(p, 0.5, Method::SinhBromwich, 1e-10).unwrap();
    let cells = [(-0.1, 0.2), (0.1, 0.3)];
    let j = joint_cpdf_many(&req, 0.0, &cells).unwrap();
    let v = joint_v1_many(&req, 0.0, &cells).unwrap();
    let fx = cpdf_x_many(&req.with_method(Method::DirectFourier).unwrap(), 0.0, &[-0.1, 0.1]).unwrap();
    for k in 0..2 {
        assert!((j[k] + v[k] - fx[k]).abs() < 1e-9, "{} + {} vs {}", j[k], v[k], fx[k]);
    }
    // a₁ ≥ a₂ collapses to the supremum
    let s = cpdf_sup(&req, 0.0, 0.2).unwrap();
    assert!((joint_cpdf(&req, 0.0, 0.0, 0.5, 0.2).unwrap() - s).abs() < 1e-14);
}

#[test]
fn supremum_cdf_is_bracketed_by_monte_carlo() {
    let p = table_params(1.2, -0.02);
    let req = EvalRequest::new(p, 0.25, Method::SinhBromwich, 1e-8).unwrap();
    let a = [0.025, 0.1];
    let v = cpdf_sup_many(&req, 0.0, &a).unwrap();
    let s = oracle::mc_joint_sup_refined(&p, 0.25, &McConfig::new(20_000, 64, 1).unwrap()).unwrap();
    for (&a, &v) in a.iter().zip(&v) {
        assert!(s.z_score(v, |m| m.cpdf_sup(a)) <= 3.0);
    }
}

#[test]
fn sinh_is_refused_for_drifting_index_below_one() {
    let p = StableParams::new(0.5, 0.2, 0.2, 0.01).unwrap();
    assert!(matches!(EvalRequest::new(p, 1.0, Method::SinhBromwich, 1e-8), Err(Error::Regime(_))));
    let q = StableParams::new(1.0, 0.2, 0.3, 0.0).unwrap();
    assert!(matches!(EvalRequest::new(q, 1.0, Method::Gwr, 1e-8), Err(Error::Regime(_))));
    assert!(EvalRequest::new(q, 1.0, Method::DirectFourier, 1e-8).is_ok());
}

#[test]
fn exchange_values_and_divergence() {
    let req = EvalRequest::new(StableParams::new(1.2, 0.05, 0.05, 0.0).unwrap(), 0.25, Method::SinhBromwich, 1e-10).unwrap();
    let v: Vec<f64> = [0.5, 0.1, 0.02, 0.0].iter().map(|&l| exchange_expectation(&req, 0.0, 0.0, 2.0, l).unwrap()).collect();
    assert!(v.windows(2).all(|w| w[1] > w[0]), "{v:?}");
    let light = EvalRequest::new(StableParams::new(0.8, 0.05, 0.05, 0.0).unwrap(), 0.25, Method::SinhBromwich, 1e-10).unwrap();
    assert!(matches!(exchange_expectation(&light, 0.0, 0.0, 2.0, 0.0), Err(Error::Divergence(_))));
    assert!(exchange_expectation(&req, 0.0, -0.1, 2.0, 0.5).is_err());
}

/// The structured exchange evaluation agrees with the generic double integral.
#[test]
fn exchange_matches_generic_payoff_path() {
    let req = EvalRequest::new(StableParams::new(1.2, 0.05, 0.05, 0.0).unwrap(), 0.25, Method::Gwr, 1e-8).unwrap();
    let (beta, lambda, x2) = (2.0, 0.5, 0.05);
    let fast = exchange_expectation(&req, 0.0, x2, beta, lambda).unwrap();
    let generic = general_expectation(
        &req,
        0.0,
        x2,
        &exchange_payoff(beta, lambda, x2),
        |e, x| exchange_kernel(beta, lambda, x2, e, x),
        |e| exchange_diag(beta, lambda, x2, e),
    )
    .unwrap();
    assert!((fast - generic).abs() < 1e-6, "{fast} vs {generic}");
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn supremum_cdf_is_a_monotone_probability(
        alpha in prop_oneof![0.3f64..0.9, 1.1f64..1.9],
        beta in -0.9f64..0.9,
        t in 0.1f64..2.0,
    ) {
        let p = StableParams::from_beta(alpha, beta, 0.3, 0.0, ScaleConvention::Sigma).unwrap();
        let req = EvalRequest::new(p, t, Method::SinhBromwich, 1e-8).unwrap();
        let a = [0.01, 0.1, 0.5, 2.0];
        let s = cpdf_sup_many(&req, 0.0, &a).unwrap();
        let x = cpdf_x_many(&req.with_method(Method::DirectFourier).unwrap(), 0.0, &a).unwrap();
        for k in 0..a.len() {
            prop_assert!((-1e-8..=1.0 + 1e-8).contains(&s[k]));
            prop_assert!(s[k] <= x[k] + 1e-8);
            if k > 0 {
                prop_assert!(s[k] >= s[k - 1] - 1e-8);
            }
        }
    }
}
