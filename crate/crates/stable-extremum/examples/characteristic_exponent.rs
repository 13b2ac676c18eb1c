//! Characteristic exponent, regime classification and admissible deformation cones.
//!
//! `cargo run --example characteristic_exponent`

use num_complex::Complex64;
use stable_extremum::charexp::{self, ScaleConvention, StableParams};

fn main() -> stable_extremum::Result<()> {
    let cases = [
        ("index 1.2, skewed", StableParams::from_beta(1.2, -0.2, 0.2, -0.02, ScaleConvention::Sigma)?),
        ("index 0.6, no drift", StableParams::new(0.6, 0.5, 0.2, 0.0)?),
        ("index 0.6, drift", StableParams::new(0.6, 0.5, 0.2, 0.05)?),
        ("Cauchy", StableParams::new(1.0, 0.3, 0.3, 0.1)?),
        ("index 1, skewed", StableParams::new(1.0, 0.4, 0.1, 0.0)?),
    ];
    for (name, p) in cases {
        let reg = charexp::classify(&p);
        let psi = charexp::psi(&p, Complex64::new(1.0, 0.0))?;
        println!("{name}: {:?}, psi(1) = {psi:.6}, sinh contour allowed: {}", reg.tag, reg.sinh_bromwich_allowed);
        match charexp::admissible_cone(&p, reg.sinh_bromwich_allowed) {
            Ok(c) => println!(
                "    cone [{:.4}, {:.4}], Bromwich half-angle excess {:.4}",
                c.gamma_minus, c.gamma_plus, c.gamma0
            ),
            Err(e) => println!("    no cone: {e}"),
        }
    }
    Ok(())
}
