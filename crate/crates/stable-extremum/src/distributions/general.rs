//! Expectations `E[f(x₁ + X_T, max(x₂, x₁ + X̄_T))]` for payoffs given through
//! their partial Fourier transforms.
//!
//! The value splits into `E[f₊(x₁ + X_T, x₂)]`, a one-dimensional integral, and
//! a term supported on `{X̄ > x₂}` written as a double integral over `L⁻ × L⁺`
//! with kernel
//! `D(η, ξ) = ∫_{x₂}^∞ e^{i(x₂-y)η} e^{iyξ} (f̂₁(ξ, y) - f̂₁(ξ, x₂)) dy`,
//! plus, when the infimum has an atom at zero, `a⁻ ∫_{L⁻} e^{i(x₁-x₂)η} φ⁺_{q,mod} ŵ dη / 2π`
//! with `ŵ(η) = ∫_{x₂}^∞ e^{i(x₂-y)η} f(y, y) dy`.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;
use rayon::prelude::*;

use super::cpdf_x::bm_coefficient;
use super::{EvalRequest, Prepared};
use crate::charexp;
use crate::error::{Error, Result};
use crate::quadrature::{estimate_hardy_norm, plan_step, tail_count_fn, CompensatedSum, ErrorBudget};
use crate::whf::WhfGrids;

type C = Complex64;
const I: C = C::new(0.0, 1.0);

/// One term `e^{-iaξ} ĝ(ξ)` of `ξ ↦ ∫ e^{-ix₁ξ} f₊(x₁, x₂) dx₁`; `ĝ` must be analytic in
/// the upper half-plane and away from the origin.
pub struct PayoffTerm {
    pub shift: f64,
    pub transform: Box<dyn Fn(C) -> C + Send + Sync>,
}

/// Sum of shifted terms with the growth exponents of the whole sum:
/// `|ĝ(ξ)| ≲ |ξ|^{α₀-1}` near zero and `|ξ|^{δ-1}` at infinity.
pub struct PayoffTransform {
    pub terms: Vec<PayoffTerm>,
    pub alpha0: f64,
    pub delta: f64,
}

impl PayoffTransform {
    pub fn eval(&self, xi: C) -> C {
        self.terms.iter().map(|t| (-I * t.shift * xi).exp() * (t.transform)(xi)).sum()
    }
}

/// `E[g(x + X_T)]` for `ĝ` given by `payoff`, by the same Gaussian split as the cdf:
/// the Gaussian part on a horizontal line above the origin, the remainder on rays.
pub fn expectation_1d(req: &EvalRequest, x: f64, payoff: &PayoffTransform) -> Result<f64> {
    let p = &req.params;
    let alpha = p.alpha;
    if payoff.alpha0 <= -alpha {
        return Err(Error::Precondition(format!(
            "payoff exponent alpha0 = {} must exceed -alpha = {}",
            payoff.alpha0, -alpha
        )));
    }
    if payoff.terms.is_empty() {
        return Ok(0.0);
    }
    let t = req.t;
    let eps = req.eps / 4.0;
    let c = bm_coefficient(p);
    let kc = p.constants();

    // Gaussian part, term by term on Im ξ = h
    let h = (1.0 / (2.0 * c * t).sqrt()).min(1.0);
    let d_line = 0.8 * h;
    let s_max = (2.0 * (1e3 / eps).ln() / (c * t)).sqrt() + 2.0 * h;
    let mut gauss = CompensatedSum::new();
    for term in &payoff.terms {
        let u = x - term.shift + p.mu * t;
        let f = |s: C| {
            let xi = s + I * h;
            (I * u * xi - t * c * xi * xi).exp() * (term.transform)(xi)
        };
        let hn = estimate_hardy_norm(f, d_line, -s_max, s_max);
        let step = plan_step(&ErrorBudget::new(eps / 4.0, d_line, if hn.is_finite() { hn } else { 1e3 })?);
        let n = (s_max / step).ceil() as i64;
        for j in -n..=n {
            gauss.add(f(C::new(j as f64 * step, 0.0)) * step);
        }
    }

    // remainder on a common pair of rays through the origin
    let us: Vec<f64> = payoff.terms.iter().map(|tm| x - tm.shift + p.mu * t).collect();
    let cone = charexp::admissible_cone(p, false)?;
    let (omega, d) = if us.iter().all(|&u| u > 0.0) {
        let w = cone.gamma_plus.min(FRAC_PI_4) / 2.0;
        (w, 0.8 * w)
    } else if us.iter().all(|&u| u < 0.0) {
        let w = (-cone.gamma_minus).min(FRAC_PI_4) / 2.0;
        (-w, 0.8 * w)
    } else {
        (0.0, 0.2 * cone.gamma_plus.min(-cone.gamma_minus).min(FRAC_PI_4))
    };
    let umax = us.iter().fold(0.0f64, |m, u| m.max(u.abs()));
    let umin = us.iter().fold(f64::INFINITY, |m, u| m.min(u.abs()));
    let diff = |xi: C| -> Result<C> {
        let e1 = (-t * charexp::psi0_with(p, &kc, xi)?).exp();
        let e2 = (-t * c * xi * xi).exp();
        Ok((I * (x + p.mu * t) * xi).exp() * (e1 - e2) * payoff.eval(xi) * xi)
    };
    let rays = [(omega, 1.0), (PI - omega, -1.0)];
    let probe = |y: C| {
        rays.iter().map(|&(th, o)| diff((I * th + y).exp()).map(|v| o * v).unwrap_or(C::new(f64::INFINITY, 0.0))).sum()
    };
    let hn = estimate_hardy_norm(probe, d, -20.0, 5.0);
    let step = plan_step(&ErrorBudget::new(eps / 4.0, d, if hn.is_finite() { hn } else { 1e3 })?);
    // size of ĝ near 0 and at infinity, probed on the rays
    let k0 = [1e-3f64, 1e-4]
        .iter()
        .flat_map(|&r| rays.iter().map(move |&(th, _)| payoff.eval(C::from_polar(r, th)).norm() * r.powf(1.0 - payoff.alpha0)))
        .fold(1.0f64, f64::max);
    let kinf = [1e2f64, 1e3]
        .iter()
        .flat_map(|&r| rays.iter().map(move |&(th, _)| payoff.eval(C::from_polar(r, th)).norm() * r.powf(1.0 - payoff.delta)))
        .fold(1.0f64, f64::max);
    let cabs = kc.c_plus.norm();
    let left = |y: f64| {
        let r = (-y).exp();
        4.0 * k0 * (t * cabs * r.powf(alpha) + t * c * r * r) * r.powf(payoff.alpha0) * (1.0 + umax * r)
    };
    let s_om = omega.sin().abs();
    let dec_a = t * (kc.c_plus * C::new(0.0, alpha * omega).exp()).re;
    let dec_2 = t * c * (2.0 * omega).cos();
    let right = |y: f64| {
        let r = y.exp();
        let osc = (-umin * s_om * r).exp();
        4.0 * kinf * r.powf(payoff.delta) * osc * ((-dec_a * r.powf(alpha)).exp() + (-dec_2 * r * r).exp())
    };
    let n_minus = tail_count_fn(left, step, eps / 8.0)? as i64;
    let n_plus = tail_count_fn(right, step, eps / 8.0)? as i64;
    let mut acc = CompensatedSum::new();
    for &(th, o) in &rays {
        for j in -n_minus..=n_plus {
            let xi = C::new(j as f64 * step, th).exp();
            acc.add(o * diff(xi)? * step);
        }
    }
    let v = (gauss.value() + acc.value()) / (2.0 * PI);
    if v.re.is_finite() {
        Ok(v.re)
    } else {
        Err(Error::Domain("one-dimensional expectation is not finite".into()))
    }
}

/// Grids for the double integral of an expectation with floor `x₂`.
pub(crate) fn prepare_expectation(req: &EvalRequest, x1: f64, x2: f64) -> Result<Prepared> {
    Prepared::new(req, Some(x2 - x1), Some(0.0))
}

/// `(1/(2π)²) ∫_{L⁻} dη e^{i(x₁-x₂)η} φ⁺_{q,mod}(η) ∫_{L⁺} dξ φ⁻_{q,mod}(ξ) D(η, ξ)`
/// plus the atom term, for every `q` in `qs`; the kernel is evaluated once per pair of nodes.
pub(crate) fn second_term_batch<K, W>(
    g: &WhfGrids,
    qs: &[C],
    x1: f64,
    x2: f64,
    kernel: &K,
    diag: &W,
) -> Result<Vec<C>>
where
    K: Fn(C, C) -> C + Sync,
    W: Fn(C) -> C + Sync,
{
    let zero = C::new(0.0, 0.0);
    let nq = qs.len();
    let (pl, ph) = g.target_plus;
    let (ml, mh) = g.target_minus;
    let z = g.zeta;
    // per-q factor values, dropped from the cache straight away
    let mut pms = Vec::with_capacity(nq);
    let mut pps = Vec::with_capacity(nq);
    let mut atoms = Vec::with_capacity(nq);
    for &q in qs {
        let f = g.factors(q)?;
        pms.push(f.phi_minus_mod_on_plus(g)?);
        pps.push(f.phi_plus_mod_on_minus(g)?);
        atoms.push(f.asym_constants(g)?.1);
        g.clear_cache();
    }
    let mut src_xi = Vec::new();
    let mut src_w: Vec<C> = Vec::new();
    for s in 0..2 {
        let ray = &g.plus[s];
        for j in pl..ph {
            let base = ray.orientation * z * ray.xi[j];
            let w: Vec<C> = pms.iter().map(|pm| base * pm[s][j]).collect();
            if w.iter().any(|&v| v != zero) {
                src_xi.push(ray.xi[j]);
                src_w.extend(w);
            }
        }
    }
    let targets: Vec<(usize, usize)> = (0..2).flat_map(|t| (ml..mh).map(move |k| (t, k))).collect();
    let parts: Vec<Vec<C>> = targets
        .par_iter()
        .map(|&(t, k)| {
            let ray = &g.minus[t];
            let eta = ray.xi[k];
            let base = ray.orientation * z * eta * (I * (x1 - x2) * eta).exp();
            let outer: Vec<C> = pps.iter().map(|pp| base * pp[t][k]).collect();
            if outer.iter().all(|&v| v == zero) {
                return vec![zero; nq];
            }
            let mut inner = vec![zero; nq];
            for (i, &xi) in src_xi.iter().enumerate() {
                let kv = kernel(eta, xi);
                for (acc, w) in inner.iter_mut().zip(&src_w[i * nq..(i + 1) * nq]) {
                    *acc += w * kv;
                }
            }
            let d = if atoms.iter().any(|&a| a != 0.0) { diag(eta) } else { zero };
            (0..nq)
                .map(|m| outer[m] * (inner[m] / (4.0 * PI * PI) + atoms[m] * d / (2.0 * PI)))
                .collect()
        })
        .collect();
    (0..nq)
        .map(|m| {
            let mut acc = CompensatedSum::new();
            for p in &parts {
                acc.add(p[m]);
            }
            let v = acc.value();
            if v.re.is_finite() && v.im.is_finite() {
                Ok(v)
            } else {
                Err(Error::Domain(format!("double integral not finite at q = {}", qs[m])))
            }
        })
        .collect()
}

/// `E[f(x₁ + X_T, max(x₂, x₁ + X̄_T))]`.
///
/// `first` describes `x ↦ f₊(x, x₂)`; `kernel` is `D(η, ξ)` and `diag` is `ŵ(η)`
/// from the module documentation.
pub fn general_expectation<K, W>(
    req: &EvalRequest,
    x1: f64,
    x2: f64,
    first: &PayoffTransform,
    kernel: K,
    diag: W,
) -> Result<f64>
where
    K: Fn(C, C) -> C + Sync,
    W: Fn(C) -> C + Sync,
{
    if x2 < x1 {
        return Err(Error::Precondition(format!("x2 = {x2} must not lie below x1 = {x1}")));
    }
    if first.delta >= 1.0 {
        return Err(Error::Precondition(format!("payoff growth delta = {} must be below 1", first.delta)));
    }
    let fx_req = EvalRequest { method: super::Method::DirectFourier, ..*req };
    let v0 = expectation_1d(&fx_req, x1, first)?;
    let prep = prepare_expectation(req, x1, x2)?;
    let v1 = prep.invert_batch(|qs| {
        let v = second_term_batch(&prep.grids, qs, x1, x2, &kernel, &diag)?;
        Ok(v.into_iter().zip(qs).map(|(v, &q)| vec![v / q]).collect())
    })?;
    Ok(v0 + v1[0])
}
