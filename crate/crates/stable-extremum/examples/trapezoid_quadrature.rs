//! Simplified trapezoid rule after the exponential change of variables.
//!
//! Integrates `∫_0^∞ ξ e^{-ξ²}·ξ^{-1/2} dξ = Γ(3/4)/2` along the rotated ray
//! `ξ = e^{iω+y}` with a planned step and truncation.
//!
//! `cargo run --example trapezoid_quadrature`

use num_complex::Complex64;
use stable_extremum::quadrature::{
    exp_ray_nodes, plan_step, plan_truncation, DecaySpec, ErrorBudget, RaySpec, TailBound, TrapezoidPlan,
};

fn main() -> stable_extremum::Result<()> {
    let exact = 0.5 * 1.225_416_702_465_177_6; // Γ(3/4)/2
    let omega = 0.2;
    for eps in [1e-6, 1e-10, 1e-14] {
        // analytic for |Im y| < π/4 - ω; use most of that strip
        let d = 0.8 * (std::f64::consts::FRAC_PI_4 - omega);
        let zeta = plan_step(&ErrorBudget::new(eps, d, 4.0)?);
        let decay = DecaySpec {
            left: TailBound::Exponential { c: 1.0, rate: 1.5 },
            right: TailBound::SuperExponential { c: 1.0, scale: 0.5, kappa: 2.0 },
        };
        let (n_minus, n_plus) = plan_truncation(&decay, zeta, eps)?;
        let plan = TrapezoidPlan::new(zeta, n_minus, n_plus)?;
        let ray = RaySpec { omega, orientation: 1 };
        let sum: Complex64 = exp_ray_nodes(&ray, &plan)
            .iter()
            .map(|n| n.weight * n.xi.powf(0.5) * (-n.xi * n.xi).exp())
            .sum();
        println!(
            "eps {eps:.0e}: step {zeta:.4}, nodes {}, value {:.16}, error {:.2e}",
            plan.len(),
            sum.re,
            (sum.re - exact).abs()
        );
    }
    Ok(())
}
