//! The three Laplace inversion backends on known transform pairs.
//!
//! `cargo run --example laplace_inversion`

use num_complex::Complex64;
use stable_extremum::cli::selftest::{pair_cone, transform_pairs};
use stable_extremum::laplace::{self, GwrConfig};

fn main() -> stable_extremum::Result<()> {
    let t = 1.0;
    let gwr = GwrConfig::new(16, 0.0)?;
    let sinh = laplace::choose_contour_for_cone(t, &pair_cone(), 1e-14)?;
    println!("sinh contour: {:?}, {} nodes", sinh.contour, sinh.plan.n_plus + 1);
    println!("{:<14} {:>12} {:>12} {:>12}", "transform", "sinh", "gwr(16)", "stehfest(8)");
    for p in transform_pairs() {
        let exact = (p.original)(t);
        let s = laplace::sinh_bromwich_invert(|q| Ok((p.transform)(q)), t, &sinh)? - exact;
        let real = |q: f64| Ok((p.transform)(Complex64::new(q, 0.0)).re);
        let g = laplace::gwr_invert(real, t, &gwr)? - exact;
        let gs = laplace::gaver_stehfest(real, t, 8)? - exact;
        println!("{:<14} {:>12.2e} {:>12.2e} {:>12.2e}", p.name, s.abs(), g.abs(), gs.abs());
    }
    Ok(())
}
