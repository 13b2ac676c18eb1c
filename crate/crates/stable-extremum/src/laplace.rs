//! Numerical Laplace inversion: Gaver–Stehfest, Gaver–Wynn-Rho and the
//! sinh-deformed Bromwich integral.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::charexp::{self, ConeSpec, StableParams};
use crate::error::{Error, Result};
use crate::quadrature::{plan_step, sinh_nodes, tail_count_fn, CompensatedSum, ErrorBudget, SinhContour, TrapezoidPlan};

type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GwrConfig {
    pub two_m: usize,
    pub shift_a: f64,
}

impl GwrConfig {
    pub fn new(two_m: usize, shift_a: f64) -> Result<Self> {
        if two_m < 2 || two_m % 2 != 0 {
            return Err(Error::InvalidParams(format!("GWR order 2M = {two_m} must be even and >= 2")));
        }
        if !(shift_a >= 0.0) {
            return Err(Error::InvalidParams(format!("GWR shift {shift_a} must be >= 0")));
        }
        Ok(GwrConfig { two_m, shift_a })
    }

    /// Order 16, no shift. A shift multiplies the extrapolation error by `e^{aT}`,
    /// which costs more than small Gaver nodes do for long horizons.
    pub fn for_horizon(_t: f64) -> Self {
        GwrConfig { two_m: 16, shift_a: 0.0 }
    }

    /// Distinct transform arguments used by the inversion at horizon `t`.
    pub fn nodes(&self, t: f64) -> Vec<f64> {
        let tau = LN_2 / t;
        (1..=self.two_m).map(|k| k as f64 * tau + self.shift_a).collect()
    }
}

fn binom(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn factorial(n: u64) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

/// Stehfest weights `ζ_k`, `k = 1..2M`.
pub fn gaver_stehfest_weights(m: usize) -> Vec<f64> {
    let mu = m as u64;
    (1..=2 * mu)
        .map(|k| {
            let sign = if (mu + k) % 2 == 0 { 1.0 } else { -1.0 };
            let s: f64 = ((k + 1) / 2..=k.min(mu))
                .map(|j| {
                    (j as f64).powi(m as i32 + 1) / factorial(mu) * binom(mu, j) * binom(2 * j, j) * binom(j, k - j)
                })
                .sum();
            sign * s
        })
        .collect()
}

/// `(ln2/T) Σ_{k=1}^{2M} ζ_k ṽ(k ln2/T)`.
pub fn gaver_stehfest<F>(f: F, t: f64, m: usize) -> Result<f64>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    gaver_stehfest_with_weights(f, t, &gaver_stehfest_weights(m))
}

/// Gaver–Stehfest with caller-supplied weights `ζ_1..ζ_{2M}`.
pub fn gaver_stehfest_with_weights<F>(f: F, t: f64, w: &[f64]) -> Result<f64>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    check_horizon(t)?;
    let tau = LN_2 / t;
    let vals: Vec<f64> = (1..=w.len()).into_par_iter().map(|k| f(k as f64 * tau)).collect::<Result<_>>()?;
    let mut acc = CompensatedSum::new();
    for (wk, v) in w.iter().zip(vals) {
        acc.add(C::new(wk * v, 0.0));
    }
    Ok(tau * acc.value().re)
}

fn check_horizon(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("horizon T = {t} must be positive")))
    }
}

/// Wynn's rho extrapolation of `seq`: the first entry `ρ¹_k` of the deepest even column.
///
/// A vanishing denominator stops the recursion and returns the last estimate reached.
pub fn wynn_rho(seq: &[f64]) -> f64 {
    let n = seq.len();
    let mut prev = vec![0.0; n + 1];
    let mut cur = seq.to_vec();
    let mut best = *seq.first().unwrap_or(&f64::NAN);
    for k in 1..n {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for j in 0..cur.len() - 1 {
            let den = cur[j + 1] - cur[j];
            if den.abs() < 1e-300 {
                return best;
            }
            next.push(prev[j + 1] + k as f64 / den);
        }
        prev = cur;
        cur = next;
        if k % 2 == 0 {
            best = cur[0];
        }
    }
    best
}

/// Gaver functionals `f_j`, `j = 1..M`, of each component of a vector-valued transform.
fn gaver_functionals(vals: &[Vec<f64>], tau: f64, m: usize) -> Vec<Vec<f64>> {
    let width = vals[0].len();
    (1..=m)
        .map(|j| {
            let c = j as f64 * tau * binom(2 * j as u64, j as u64);
            (0..width)
                .map(|p| {
                    let s: f64 = (0..=j)
                        .map(|l| {
                            let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
                            sign * binom(j as u64, l as u64) * vals[j + l - 1][p]
                        })
                        .sum();
                    c * s
                })
                .collect()
        })
        .collect()
}

pub fn gwr_invert<F>(f: F, t: f64, cfg: &GwrConfig) -> Result<f64>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    Ok(gwr_invert_vec(|q| Ok(vec![f(q)?]), t, cfg)?[0])
}

/// GWR for a transform returning several components at once; the transform is
/// evaluated once per node.
pub fn gwr_invert_vec<F>(f: F, t: f64, cfg: &GwrConfig) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<Vec<f64>> + Sync,
{
    gwr_invert_batch(|qs| qs.par_iter().map(|&q| f(q)).collect(), t, cfg)
}

/// GWR where `f` receives every node at once and returns one vector per node.
pub fn gwr_invert_batch<F>(f: F, t: f64, cfg: &GwrConfig) -> Result<Vec<f64>>
where
    F: FnOnce(&[f64]) -> Result<Vec<Vec<f64>>>,
{
    check_horizon(t)?;
    let tau = LN_2 / t;
    let m = cfg.two_m / 2;
    let nodes = cfg.nodes(t);
    let vals = f(&nodes)?;
    let width = vals.first().map_or(0, |v| v.len());
    if vals.len() != nodes.len() || vals.iter().any(|v| v.len() != width) {
        return Err(Error::Precondition("transform returned vectors of different lengths".into()));
    }
    let fj = gaver_functionals(&vals, tau, m);
    let growth = (cfg.shift_a * t).exp();
    Ok((0..width)
        .map(|p| {
            let seq: Vec<f64> = fj.iter().map(|v| v[p]).collect();
            growth * wynn_rho(&seq)
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BromwichConfig {
    pub contour: SinhContour,
    pub plan: TrapezoidPlan,
}

impl BromwichConfig {
    pub fn nodes(&self) -> Vec<C> {
        sinh_nodes(&self.contour, &self.plan).into_iter().map(|n| n.q).collect()
    }

    /// Smallest `|q|` on the contour.
    pub fn q_min(&self) -> f64 {
        self.contour.sigma_l - self.contour.b_l * self.contour.omega_l.sin()
    }
}

/// Contour and plan for transforms analytic on `σ + C_{π/2+γ₀}` and `O(1/q)` there.
pub fn choose_contour(params: &StableParams, t: f64, cone: &ConeSpec, eps: f64) -> Result<BromwichConfig> {
    let reg = charexp::classify(params);
    if !reg.sinh_bromwich_allowed {
        return Err(Error::Regime(format!(
            "sinh-deformed Bromwich contour is not admissible in regime {:?}: no cone of complex q keeps q + psi off (-inf, 0]",
            reg.tag
        )));
    }
    choose_contour_for_cone(t, cone, eps)
}

pub fn choose_contour_for_cone(t: f64, cone: &ConeSpec, eps: f64) -> Result<BromwichConfig> {
    check_horizon(t)?;
    if !(cone.gamma0 > 0.0 && cone.gamma0 < PI / 2.0) {
        return Err(Error::Contour(format!("Bromwich half-angle {} outside (0, pi/2)", cone.gamma0)));
    }
    let omega = cone.gamma0 / 2.0;
    let sigma_l = cone.sigma.max(1.0 / t);
    let b = sigma_l / (2.0 * omega.sin());
    let contour = SinhContour::new(sigma_l, b, omega)?;
    let d = 0.8 * omega;

    // |integrand| ≲ (b/π)|cosh(iω'+y)| e^{T Re q}/|q| on the edges ω' = ω ± d
    let bound_at = |w: f64, y: f64| {
        let z = C::new(y, w);
        let q = sigma_l + C::i() * b * z.sinh();
        b / PI * z.cosh().norm() * (t * q.re).exp() / q.norm()
    };
    let mut h = 0.0;
    let n_probe = 400;
    let (ylo, yhi) = (-8.0, 8.0);
    let dy = (yhi - ylo) / n_probe as f64;
    for k in 0..=n_probe {
        let y = ylo + k as f64 * dy;
        h += (bound_at(omega + d, y) + bound_at(omega - d, y)) * dy;
    }
    let h = (2.0 * h).max(1.0);
    let zeta = plan_step(&ErrorBudget::new(eps, d, h)?);
    let n_plus = tail_count_fn(|y| 2.0 * bound_at(omega, y), zeta, eps / 4.0)?;
    Ok(BromwichConfig { contour, plan: TrapezoidPlan::new(zeta, 0, n_plus)? })
}

pub fn sinh_bromwich_invert<F>(f: F, t: f64, cfg: &BromwichConfig) -> Result<f64>
where
    F: Fn(C) -> Result<C> + Sync,
{
    Ok(sinh_bromwich_invert_vec(|q| Ok(vec![f(q)?]), t, cfg)?[0])
}

/// `(1/π) Re Σ_{j≥0} e^{q_j T} b cosh(iω+jζ) ζ Ṽ(q_j) (1 - δ_{j0}/2)`.
pub fn sinh_bromwich_invert_vec<F>(f: F, t: f64, cfg: &BromwichConfig) -> Result<Vec<f64>>
where
    F: Fn(C) -> Result<Vec<C>> + Sync,
{
    sinh_bromwich_invert_batch(
        |qs| {
            qs.par_iter()
                .enumerate()
                .map(|(j, &q)| f(q).map_err(|e| Error::Node { node: j as i64, source: Box::new(e) }))
                .collect()
        },
        t,
        cfg,
    )
}

/// Sinh-Bromwich inversion where `f` receives every node at once.
pub fn sinh_bromwich_invert_batch<F>(f: F, t: f64, cfg: &BromwichConfig) -> Result<Vec<f64>>
where
    F: FnOnce(&[C]) -> Result<Vec<Vec<C>>>,
{
    check_horizon(t)?;
    let nodes = sinh_nodes(&cfg.contour, &cfg.plan);
    let qs: Vec<C> = nodes.iter().map(|n| n.q).collect();
    let vals = f(&qs)?;
    let width = vals.first().map_or(0, |v| v.len());
    if vals.len() != nodes.len() {
        return Err(Error::Precondition("transform returned the wrong number of values".into()));
    }
    let mut acc = vec![CompensatedSum::new(); width];
    for (n, v) in nodes.iter().zip(&vals) {
        if v.len() != width {
            return Err(Error::Precondition("transform returned vectors of different lengths".into()));
        }
        let w = (n.q * t).exp() * n.weight;
        for (a, x) in acc.iter_mut().zip(v) {
            a.add(w * x);
        }
    }
    Ok(acc.iter().map(|a| a.value().re / PI).collect())
}
