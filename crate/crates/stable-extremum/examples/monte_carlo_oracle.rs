//! Monte-Carlo oracle: random-walk paths, bias envelope from two monitoring
//! grids, and z-scores against the library.
//!
//! `cargo run --release --example monte_carlo_oracle`

use stable_extremum::charexp::{ScaleConvention, StableParams};
use stable_extremum::distributions::{cpdf_sup, cpdf_x, EvalRequest, Method};
use stable_extremum::oracle::{mc_joint_sup_refined, McConfig};

fn main() -> stable_extremum::Result<()> {
    let p = StableParams::from_beta(1.2, -0.2, 0.2, -0.02, ScaleConvention::Sigma)?;
    let t = 0.25;
    let req = EvalRequest::new(p, t, Method::SinhBromwich, 1e-10)?;
    let mc = mc_joint_sup_refined(&p, t, &McConfig::new(50_000, 128, 7)?)?;
    for a in [0.0125, 0.05] {
        let v = cpdf_sup(&req, 0.0, a)?;
        let (e, env) = mc.bracket(|s| s.cpdf_sup(a));
        println!(
            "P[sup <= {a}]: library {v:.6}, MC {:.6} ± {:.6}, bias envelope {env:.6}, z {:.2}",
            e.mean,
            e.se,
            mc.z_score(v, |s| s.cpdf_sup(a))
        );
    }
    let v = cpdf_x(&req, 0.0, 0.0)?;
    let e = mc.fine.cpdf_x(0.0);
    println!("P[X_T <= 0]: library {v:.6}, MC {:.6} ± {:.6}", e.mean, e.se);
    Ok(())
}
