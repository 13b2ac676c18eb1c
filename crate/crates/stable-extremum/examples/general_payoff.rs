//! A payoff supplied through its transforms: the indicator of
//! `{x₁ + X_T ≤ a₁, x₁ + X̄_T ≤ a₂}` reproduces the joint cdf.
//!
//! `cargo run --release --example general_payoff`

use num_complex::Complex64;
use stable_extremum::charexp::{ScaleConvention, StableParams};
use stable_extremum::distributions::{general_expectation, joint_cpdf, EvalRequest, Method, PayoffTerm, PayoffTransform};

type C = Complex64;
const I: C = C::new(0.0, 1.0);

fn main() -> stable_extremum::Result<()> {
    let p = StableParams::from_beta(1.2, -0.2, 0.2, -0.02, ScaleConvention::Sigma)?;
    let req = EvalRequest::new(p, 0.25, Method::SinhBromwich, 1e-8)?;
    let (a1, a2) = (-0.05, 0.1);
    // x ↦ 1{x ≤ a₁}: transform e^{-ia₁ξ}·i/ξ
    let first = PayoffTransform {
        terms: vec![PayoffTerm { shift: a1, transform: Box::new(|xi: C| I / xi) }],
        alpha0: 0.0,
        delta: 0.0,
    };
    let kernel = move |eta: C, xi: C| (I * (a2 - a1) * xi).exp() * (I * (0.0 - a2) * eta).exp() / (xi * (xi - eta));
    let v = general_expectation(&req, 0.0, 0.0, &first, kernel, |_| C::new(0.0, 0.0))?;
    let direct = joint_cpdf(&req, 0.0, 0.0, a1, a2)?;
    println!("general path {v:.12}, joint cdf {direct:.12}, difference {:.1e}", (v - direct).abs());
    Ok(())
}
