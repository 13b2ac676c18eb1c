//! Scale calibration on the first benchmark value, then a table reproduction.
//!
//! `cargo run --release --example table_calibration`

use stable_extremum::cli::tables::{bench_table, calibration_candidates};

fn main() -> stable_extremum::Result<()> {
    for c in calibration_candidates()? {
        println!("{:?} scale {:.15} residual {:.2e}", c.convention, c.scale, c.residual);
    }
    let rep = bench_table(2, None, 1e-10)?;
    for r in &rep.rows {
        println!("{:<10} {:.15} {:.15} {:.1e}", r.point, r.value, r.reference, r.abs_error);
    }
    println!("worst {:.1e}, gate {:.0e}", rep.worst(), rep.gate);
    Ok(())
}
