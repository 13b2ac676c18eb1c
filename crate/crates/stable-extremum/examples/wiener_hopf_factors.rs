//! Wiener–Hopf factors on the deformed rays and the identity `φ⁺φ⁻ = q/(q+ψ)`.
//!
//! `cargo run --example wiener_hopf_factors`

use num_complex::Complex64;
use stable_extremum::charexp::{self, StableParams};
use stable_extremum::whf::{self, GridSpec, RayAngles, Side};

fn main() -> stable_extremum::Result<()> {
    let p = StableParams::new(0.6, 0.5, 0.2, 0.05)?;
    // drift and index below one: only real q are admissible
    let cone = charexp::admissible_cone(&p, false)?;
    let g = whf::build_grids(&p, &cone, RayAngles::real_q(&cone), GridSpec::new(1e-12, 0.5))?;
    let (neg, pos) = g.node_counts();
    println!("step {:.4}, nodes per ray {neg} + {pos}", g.zeta);
    for q in [0.5, 2.0, 20.0] {
        let q = Complex64::new(q, 0.0);
        let ap = whf::asym_constant(&g, q, Side::Plus)?;
        let am = whf::asym_constant(&g, q, Side::Minus)?;
        let res = whf::wh_identity_residual(&g, q, &whf::validation_points())?;
        let xi = Complex64::new(1.0, 0.0);
        println!(
            "q = {}: phi+(1) = {:.10}, phi-(1) = {:.10}, a+ = {ap:.6}, a- = {am:.6}, identity residual {res:.1e}",
            q.re,
            whf::phi_plus(&g, q, xi)?,
            whf::phi_minus(&g, q, xi)?,
        );
    }
    Ok(())
}
