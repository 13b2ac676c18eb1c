//! Simplified trapezoid rule on conformally deformed contours.
//!
//! The integrals in this crate are of analytic functions on the real line after
//! one of two changes of variables: the exponential ray map `ξ = e^{iω+y}` and the
//! sinh map `q = σ + ib sinh(iω+y)`. The step comes from the strip width of
//! analyticity, the truncation from tail bounds.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapezoidPlan {
    pub zeta: f64,
    pub n_minus: usize,
    pub n_plus: usize,
}

impl TrapezoidPlan {
    pub fn new(zeta: f64, n_minus: usize, n_plus: usize) -> Result<Self> {
        if !(zeta > 0.0 && zeta.is_finite()) {
            return Err(Error::InvalidParams(format!("step {zeta} must be positive")));
        }
        Ok(TrapezoidPlan { zeta, n_minus, n_plus })
    }

    pub fn len(&self) -> usize {
        self.n_minus + self.n_plus + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn j_range(&self) -> std::ops::RangeInclusive<i64> {
        -(self.n_minus as i64)..=self.n_plus as i64
    }

    pub fn y(&self, j: i64) -> f64 {
        j as f64 * self.zeta
    }
}

/// Target tolerance, strip half-width and an estimate of the Hardy norm `H(g, d)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorBudget {
    pub eps: f64,
    pub d: f64,
    pub h_norm: f64,
}

impl ErrorBudget {
    pub fn new(eps: f64, d: f64, h_norm: f64) -> Result<Self> {
        if !(eps > 0.0 && d > 0.0 && h_norm > 0.0) {
            return Err(Error::InvalidParams(format!(
                "error budget needs eps, d, H > 0 (got {eps}, {d}, {h_norm})"
            )));
        }
        Ok(ErrorBudget { eps, d, h_norm })
    }
}

/// Largest step with `H e^{-2πd/ζ} / (1 - e^{-2πd/ζ}) ≤ eps/2`.
pub fn plan_step(b: &ErrorBudget) -> f64 {
    2.0 * PI * b.d / (2.0 * b.h_norm / b.eps).ln_1p()
}

/// Bound on `|g|` as `|y| → ∞` on one side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailBound {
    /// `c e^{-rate |y|}`.
    Exponential { c: f64, rate: f64 },
    /// `c exp(-scale e^{kappa |y|})`.
    SuperExponential { c: f64, scale: f64, kappa: f64 },
}

impl TailBound {
    pub fn eval(&self, y_abs: f64) -> f64 {
        match *self {
            TailBound::Exponential { c, rate } => c * (-rate * y_abs).exp(),
            TailBound::SuperExponential { c, scale, kappa } => c * (-scale * (kappa * y_abs).exp()).exp(),
        }
    }

    fn decays(&self) -> bool {
        match *self {
            TailBound::Exponential { rate, .. } => rate > 0.0,
            TailBound::SuperExponential { scale, kappa, .. } => scale > 0.0 && kappa > 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecaySpec {
    pub left: TailBound,
    pub right: TailBound,
}

/// Minimal `N` with `ζ Σ_{j>N} bound(jζ) ≤ budget`.
pub fn tail_count(bound: &TailBound, zeta: f64, budget: f64) -> Result<usize> {
    if !bound.decays() {
        return Err(Error::Domain(format!("tail bound {bound:?} does not decay")));
    }
    match *bound {
        TailBound::Exponential { c, rate } => {
            let x = rate * zeta;
            let need = (zeta * c / (budget * -(-x).exp_m1())).ln() / x;
            Ok((need.ceil() - 1.0).max(0.0) as usize)
        }
        TailBound::SuperExponential { .. } => tail_count_fn(|y| bound.eval(y), zeta, budget),
    }
}

/// Minimal `N` with `ζ Σ_{j>N} b(jζ) ≤ budget` for a bound that eventually decreases
/// faster than any geometric sequence.
pub fn tail_count_fn(b: impl Fn(f64) -> f64, zeta: f64, budget: f64) -> Result<usize> {
    let mut terms = Vec::new();
    let mut j = 1usize;
    loop {
        let t = zeta * b(j as f64 * zeta);
        if !t.is_finite() {
            return Err(Error::Domain(format!("tail bound not finite at y = {}", j as f64 * zeta)));
        }
        terms.push(t);
        if t < budget * 1e-20 && j > 2 && terms[j - 2] > t {
            break;
        }
        j += 1;
        if j > 50_000_000 {
            return Err(Error::Domain("tail bound decays too slowly".into()));
        }
    }
    let mut acc = 0.0;
    let mut n = terms.len();
    while n > 0 {
        if acc + terms[n - 1] > budget {
            break;
        }
        acc += terms[n - 1];
        n -= 1;
    }
    Ok(n)
}

/// Truncation so that each tail contributes at most `eps/4`.
pub fn plan_truncation(decay: &DecaySpec, zeta: f64, eps: f64) -> Result<(usize, usize)> {
    let budget = eps / 4.0;
    Ok((tail_count(&decay.left, zeta, budget)?, tail_count(&decay.right, zeta, budget)?))
}

/// Neumaier-compensated complex accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: Complex64,
    comp: Complex64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: Complex64) {
        self.sum.re = two_sum(self.sum.re, x.re, &mut self.comp.re);
        self.sum.im = two_sum(self.sum.im, x.im, &mut self.comp.im);
    }

    pub fn value(&self) -> Complex64 {
        self.sum + self.comp
    }
}

#[inline]
fn two_sum(s: f64, x: f64, c: &mut f64) -> f64 {
    let t = s + x;
    if s.abs() >= x.abs() {
        *c += (s - t) + x;
    } else {
        *c += (x - t) + s;
    }
    t
}

pub fn compensated_sum<I: IntoIterator<Item = Complex64>>(it: I) -> Complex64 {
    let mut acc = CompensatedSum::new();
    for x in it {
        acc.add(x);
    }
    acc.value()
}

/// `ζ Σ_{j=-N₋}^{N₊} g(j, jζ)`, accumulated in ascending `j`.
pub fn trapezoid_sum<F>(plan: &TrapezoidPlan, g: F) -> Result<Complex64>
where
    F: Fn(i64, f64) -> Result<Complex64>,
{
    let mut acc = CompensatedSum::new();
    for j in plan.j_range() {
        let v = g(j, plan.y(j)).map_err(|e| Error::Node { node: j, source: Box::new(e) })?;
        acc.add(v);
    }
    Ok(acc.value() * plan.zeta)
}

/// Parallel evaluation of the nodes, sequential reduction in ascending `j`.
pub fn trapezoid_sum_par<F>(plan: &TrapezoidPlan, g: F) -> Result<Complex64>
where
    F: Fn(i64, f64) -> Result<Complex64> + Sync,
{
    let vals: Vec<Complex64> = plan
        .j_range()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|j| g(j, plan.y(j)).map_err(|e| Error::Node { node: j, source: Box::new(e) }))
        .collect::<Result<_>>()?;
    Ok(compensated_sum(vals) * plan.zeta)
}

/// A ray `e^{iω}ℝ₊`; orientation `-1` reverses the direction of traversal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RaySpec {
    pub omega: f64,
    pub orientation: i8,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayNode {
    pub y: f64,
    pub xi: Complex64,
    /// `orientation · ζ · dξ/dy`.
    pub weight: Complex64,
}

pub fn exp_ray_nodes(ray: &RaySpec, plan: &TrapezoidPlan) -> Vec<RayNode> {
    let o = ray.orientation as f64;
    plan.j_range()
        .map(|j| {
            let y = plan.y(j);
            let xi = Complex64::new(y, ray.omega).exp();
            RayNode { y, xi, weight: xi * (o * plan.zeta) }
        })
        .collect()
}

/// Contour `q(y) = σ + ib sinh(iω + y)` for the Bromwich integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinhContour {
    pub sigma_l: f64,
    pub b_l: f64,
    pub omega_l: f64,
}

impl SinhContour {
    pub fn new(sigma_l: f64, b_l: f64, omega_l: f64) -> Result<Self> {
        if !(b_l > 0.0 && omega_l > 0.0 && omega_l < PI / 2.0) {
            return Err(Error::InvalidParams(format!(
                "sinh contour needs b > 0 and omega in (0, pi/2) (got b = {b_l}, omega = {omega_l})"
            )));
        }
        if sigma_l - b_l * omega_l.sin() <= 0.0 {
            return Err(Error::Contour(format!(
                "sigma - b sin(omega) = {} must be positive",
                sigma_l - b_l * omega_l.sin()
            )));
        }
        Ok(SinhContour { sigma_l, b_l, omega_l })
    }

    pub fn q(&self, y: f64) -> Complex64 {
        let i = Complex64::i();
        self.sigma_l + i * self.b_l * Complex64::new(y, self.omega_l).sinh()
    }

    /// `dq/dy / i = b cosh(iω + y)`.
    pub fn dq_over_i(&self, y: f64) -> Complex64 {
        self.b_l * Complex64::new(y, self.omega_l).cosh()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinhNode {
    pub y: f64,
    pub q: Complex64,
    pub weight: Complex64,
}

/// Nodes `j = 0..=N₊` of the folded sinh-Bromwich sum; `plan.n_minus` is ignored
/// because the negative half is recovered by conjugation.
pub fn sinh_nodes(contour: &SinhContour, plan: &TrapezoidPlan) -> Vec<SinhNode> {
    (0..=plan.n_plus as i64)
        .map(|j| {
            let y = plan.y(j);
            let half = if j == 0 { 0.5 } else { 1.0 };
            SinhNode { y, q: contour.q(y), weight: contour.dq_over_i(y) * (plan.zeta * half) }
        })
        .collect()
}

/// Coarse estimate of `H(g, d) = ∫ |g(y + id)| + |g(y - id)| dy`, never below one.
pub fn estimate_hardy_norm<F>(g: F, d: f64, y_lo: f64, y_hi: f64) -> f64
where
    F: Fn(Complex64) -> Complex64,
{
    let n = 16;
    let h = (y_hi - y_lo) / (n - 1) as f64;
    let mut s = 0.0;
    for k in 0..n {
        let y = y_lo + k as f64 * h;
        let v = g(Complex64::new(y, d)).norm() + g(Complex64::new(y, -d)).norm();
        if v.is_finite() {
            s += v * h;
        } else {
            return f64::INFINITY;
        }
    }
    s.max(1.0)
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
                p1 = z;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// `∫_a^b f` by a composite Gauss–Legendre rule.
pub fn gauss_legendre_integrate<F>(f: F, a: f64, b: f64, panels: usize, order: usize) -> Result<f64>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let (x, w) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let pts: Vec<(f64, f64)> = (0..panels)
        .flat_map(|p| {
            let lo = a + p as f64 * h;
            x.iter().zip(&w).map(move |(&xi, &wi)| (lo + 0.5 * h * (xi + 1.0), 0.5 * h * wi)).collect::<Vec<_>>()
        })
        .collect();
    let vals: Vec<f64> = pts.par_iter().map(|&(t, _)| f(t)).collect::<Result<_>>()?;
    let mut acc = CompensatedSum::new();
    for (v, (_, wt)) in vals.iter().zip(&pts) {
        acc.add(Complex64::new(v * wt, 0.0));
    }
    Ok(acc.value().re)
}
