//! Spectrally negative process: the supremum at an exponential time is exponential
//! with rate `β(q)`, which checks the factor and the supremum cdf in closed form.
//!
//! `cargo run --release --example one_sided_oracle`

use num_complex::Complex64;
use stable_extremum::charexp::{self, StableParams};
use stable_extremum::distributions::{cpdf_sup_transform, EvalRequest, Method, Prepared};
use stable_extremum::oracle::spectrally_one_sided_sup;
use stable_extremum::whf::{self, GridSpec, RayAngles};

fn main() -> stable_extremum::Result<()> {
    let p = StableParams::new(1.5, 0.0, 0.4, 0.1)?;
    let o = spectrally_one_sided_sup(&p)?;
    let cone = charexp::admissible_cone(&p, true)?;
    let g = whf::build_grids(&p, &cone, RayAngles::complex_q(&cone), GridSpec::new(1e-12, 0.5))?;
    for q in [0.5, 1.0, 4.0] {
        let qc = Complex64::new(q, 0.0);
        let xi = Complex64::new(0.7, 0.0);
        let diff = (whf::phi_plus(&g, qc, xi)? - o.phi(qc, xi)?).norm();
        println!("q = {q}: beta(q) = {:.12}, |phi+ - beta/(beta - i xi)| = {diff:.1e}", o.beta_root_real(q)?);
    }
    // P[X̄_{T_q} > a] = e^{-β(q)a}, also for complex q
    let req = EvalRequest::new(p, 1.0, Method::SinhBromwich, 1e-10)?;
    let prep = Prepared::new(&req, Some(0.3), None)?;
    let q = Complex64::new(1.0, 2.0);
    let lib = cpdf_sup_transform(&prep.grids, q, 0.3)?;
    let exact = o.exceedance(q, 0.3)?;
    println!("exceedance at q = {q}: {lib:.12} vs {exact:.12}");
    Ok(())
}
