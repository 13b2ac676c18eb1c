//! Distribution of `X_T`: direct Fourier inversion, the Laplace path, and the
//! Cauchy closed form.
//!
//! `cargo run --example cpdf_x`

use stable_extremum::charexp::{ScaleConvention, StableParams};
use stable_extremum::distributions::{cpdf_x_many, EvalRequest, Method};
use stable_extremum::oracle::cauchy_cdf;

fn main() -> stable_extremum::Result<()> {
    let p = StableParams::from_beta(1.2, -0.2, 0.2, -0.02, ScaleConvention::Sigma)?;
    let a = [-0.1, -0.025, 0.0, 0.025, 0.1];
    for m in [Method::DirectFourier, Method::SinhBromwich, Method::Gwr] {
        let req = EvalRequest::new(p, 0.25, m, 1e-10)?;
        let v = cpdf_x_many(&req, 0.0, &a)?;
        println!("{m:>8}: {}", v.iter().map(|x| format!("{x:.12}")).collect::<Vec<_>>().join(" "));
    }

    let (c, mu, t) = (0.3, 0.1, 0.5);
    let cauchy = StableParams::new(1.0, c, c, mu)?;
    let req = EvalRequest::new(cauchy, t, Method::DirectFourier, 1e-13)?;
    let worst = a
        .iter()
        .map(|&y| Ok((cpdf_x_many(&req, 0.0, &[y])?[0] - cauchy_cdf(c, mu, t, y)).abs()))
        .collect::<stable_extremum::Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    println!("Cauchy closed form, worst difference {worst:.1e}");
    Ok(())
}
