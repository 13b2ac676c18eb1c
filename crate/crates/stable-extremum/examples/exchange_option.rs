//! Damped exchange payoff `E[(β(x₁+X_T) - M)₊ e^{-λM}]`, `M = max(x₂, x₁+X̄_T)`.
//!
//! `cargo run --release --example exchange_option`

use stable_extremum::charexp::StableParams;
use stable_extremum::distributions::{exchange_expectation, EvalRequest, Method};
use stable_extremum::Error;

fn main() -> stable_extremum::Result<()> {
    let p = StableParams::new(1.2, 0.05, 0.05, 0.0)?;
    let req = EvalRequest::new(p, 0.25, Method::SinhBromwich, 1e-10)?;
    for lambda in [0.5, 0.1, 0.02, 0.0] {
        println!("lambda = {lambda:<5} value {:.14}", exchange_expectation(&req, 0.0, 0.0, 2.0, lambda)?);
    }
    println!("x2 = 0.05: {:.14}", exchange_expectation(&req, 0.0, 0.05, 2.0, 0.5)?);

    let light = EvalRequest::new(StableParams::new(0.8, 0.05, 0.05, 0.0)?, 0.25, Method::SinhBromwich, 1e-10)?;
    match exchange_expectation(&light, 0.0, 0.0, 2.0, 0.0) {
        Err(Error::Divergence(m)) => println!("index 0.8 without damping: {m}"),
        other => println!("unexpected: {other:?}"),
    }
    Ok(())
}
