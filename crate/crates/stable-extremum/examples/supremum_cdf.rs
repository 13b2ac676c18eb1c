//! `P[X̄_T ≤ a]` for the first benchmark configuration, with node counts and timing.
//!
//! `cargo run --release --example supremum_cdf`

use std::time::Instant;

use stable_extremum::charexp::{ScaleConvention, StableParams};
use stable_extremum::distributions::{cpdf_sup_many, sup_node_counts, EvalRequest, Method};

fn main() -> stable_extremum::Result<()> {
    let p = StableParams::from_beta(1.2, -0.2, 0.2, -0.02, ScaleConvention::Sigma)?;
    let a = [0.0125, 0.025, 0.0375, 0.05, 0.0625, 0.075];
    for (m, eps) in [(Method::SinhBromwich, 1e-12), (Method::Gwr, 1e-10)] {
        let req = EvalRequest::new(p, 0.25, m, eps)?;
        let t0 = Instant::now();
        let v = cpdf_sup_many(&req, 0.0, &a)?;
        let ms = t0.elapsed().as_secs_f64() * 1e3;
        println!("{m} (eps {eps:.0e}, {ms:.0} ms, nodes {:?})", sup_node_counts(&req, 0.0, &a)?);
        for (ai, vi) in a.iter().zip(&v) {
            println!("  a = {ai:<7} {vi:.15}");
        }
    }
    Ok(())
}
