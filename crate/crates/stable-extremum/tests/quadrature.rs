use std::f64::consts::PI;

use num_complex::Complex64;
use stable_extremum::quadrature::{
    compensated_sum, gauss_legendre, gauss_legendre_integrate, plan_step, tail_count, trapezoid_sum, trapezoid_sum_par,
    ErrorBudget, SinhContour, TailBound, TrapezoidPlan,
};

type C = Complex64;

#[test]
fn trapezoid_on_gaussian_is_spectrally_accurate() {
    let plan = TrapezoidPlan::new(0.5, 20, 20).unwrap();
    let g = |_: i64, y: f64| Ok(C::new((-y * y).exp(), 0.0));
    let v = trapezoid_sum(&plan, g).unwrap();
    assert!((v.re - PI.sqrt()).abs() < 1e-15);
    assert_eq!(v, trapezoid_sum_par(&plan, g).unwrap());
}

#[test]
fn planned_step_meets_its_budget() {
    let b = ErrorBudget::new(1e-10, 0.7, 3.0).unwrap();
    let z = plan_step(&b);
    let r = (-2.0 * PI * b.d / z).exp();
    assert!((b.h_norm * r / (1.0 - r) - b.eps / 2.0).abs() < 1e-6 * b.eps);
    // the discretization error of sech on its strip stays inside the budget
    let d = 0.7 * PI / 2.0;
    let step = plan_step(&ErrorBudget::new(1e-10, d, 4.0).unwrap());
    let n = (40.0 / step).ceil() as usize;
    let plan = TrapezoidPlan::new(step, n, n).unwrap();
    let v = trapezoid_sum(&plan, |_, y| Ok(C::new(1.0 / y.cosh(), 0.0))).unwrap();
    assert!((v.re - PI).abs() < 1e-10);
}

#[test]
fn tail_count_truncates_exponential_tail() {
    let bound = TailBound::Exponential { c: 1.0, rate: 2.0 };
    let zeta = 0.1;
    let n = tail_count(&bound, zeta, 1e-12).unwrap();
    let rest: f64 = (n + 1..n + 10_000).map(|j| zeta * (-2.0 * j as f64 * zeta).exp()).sum();
    assert!(rest <= 1e-12);
}

#[test]
fn gauss_legendre_is_exact_for_polynomials() {
    let (x, w) = gauss_legendre(6);
    let sum: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(10)).sum();
    assert!((sum - 2.0 / 11.0).abs() < 1e-15);
    let v = gauss_legendre_integrate(|x| Ok(x.sin()), 0.0, PI, 4, 12).unwrap();
    assert!((v - 2.0).abs() < 1e-15);
}

#[test]
fn compensated_sum_recovers_small_terms() {
    let mut terms = vec![C::new(1.0, 0.0)];
    terms.extend(std::iter::repeat(C::new(1e-16, 0.0)).take(10_000));
    assert!((compensated_sum(terms).re - (1.0 + 1e-12)).abs() < 1e-16);
}

#[test]
fn sinh_contour_passes_through_sigma() {
    let c = SinhContour::new(1.0, 2.0, 0.3).unwrap();
    let q0 = c.q(0.0);
    assert!((q0 - C::new(1.0 - 2.0 * 0.3f64.sin(), 0.0)).norm() < 1e-15);
    // derivative by central difference
    let h = 1e-6;
    let fd = (c.q(0.4 + h) - c.q(0.4 - h)) / (2.0 * h);
    assert!((fd / C::new(0.0, 1.0) - c.dq_over_i(0.4)).norm() < 1e-8);
    assert!(SinhContour::new(0.5, 2.0, 2.0).is_err());
    assert!(SinhContour::new(0.5, 2.0, 0.3).is_err());
}
