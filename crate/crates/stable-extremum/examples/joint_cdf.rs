//! Joint law of `(X_T, X̄_T)`: `V₁ = P[X_T ≤ a₁, X̄_T > a₂]` and the joint cdf.
//!
//! `cargo run --release --example joint_cdf`

use stable_extremum::charexp::{ScaleConvention, StableParams};
use stable_extremum::distributions::{cpdf_sup, joint_cpdf, joint_v1_many, EvalRequest, Method};

fn main() -> stable_extremum::Result<()> {
    let p = StableParams::from_beta(1.2, -0.2, 0.2, -0.02, ScaleConvention::Sigma)?;
    let req = EvalRequest::new(p, 0.25, Method::SinhBromwich, 1e-10)?;
    let a2 = 0.0125;
    let cells: Vec<(f64, f64)> = [-0.075, -0.05, -0.025].iter().map(|d| (a2 + d, a2)).collect();
    for ((a1, a2), v) in cells.iter().zip(joint_v1_many(&req, 0.0, &cells)?) {
        println!("V1(a1 = {a1:.4}, a2 = {a2}) = {v:.14}");
    }
    println!("P[X_T <= 0, sup <= 0.05] = {:.12}", joint_cpdf(&req, 0.0, 0.0, 0.0, 0.05)?);
    println!(
        "a1 = a2 reduces to the supremum: {:.12} vs {:.12}",
        joint_cpdf(&req, 0.0, 0.0, 0.05, 0.05)?,
        cpdf_sup(&req, 0.0, 0.05)?
    );
    // the floor x2 does not matter while it stays below a2
    println!("x2 = 0.03: {:.12}", joint_cpdf(&req, 0.0, 0.03, 0.0, 0.05)?);
    Ok(())
}
