//! Distribution of `X_T`.
//!
//! `P[x + X_T > a]` is split into the same probability for a Brownian motion with
//! drift `μ` and variance `2|C|T`, which is closed-form, and a Fourier correction
//! whose integrand vanishes at the origin, so the contour can pass through zero.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI};

use num_complex::Complex64;

use super::{clamp_prob, EvalRequest, Inverter, Method, NodeCounts};
use crate::charexp::{self, StableParams};
use crate::error::{Error, Result};
use crate::quadrature::{estimate_hardy_norm, plan_step, tail_count_fn, CompensatedSum, ErrorBudget};

type C = Complex64;
const I: C = C::new(0.0, 1.0);

/// Gaussian comparison coefficient `c` in `ψ_BM(ξ) = -iμξ + cξ²`.
pub fn bm_coefficient(p: &StableParams) -> f64 {
    let k = p.constants();
    if p.is_alpha_one() {
        k.sigma_z
    } else {
        k.c_plus.norm()
    }
}

/// `P[Z > -z]` for `Z ~ N(0, 2cT)`.
fn bm_exceed(z: f64, c: f64, t: f64) -> f64 {
    0.5 * libm::erfc(-z / (2.0 * (c * t).sqrt()))
}

/// `ψ⁰` on the right half-plane, including the asymmetric index-one form.
fn psi0_right(p: &StableParams, xi: C) -> Result<C> {
    if p.is_alpha_one() && !p.is_symmetric() {
        let k = p.constants();
        return Ok(k.sigma_z * xi * (1.0 + I * (2.0 * k.beta_z / PI) * xi.ln()));
    }
    charexp::psi0(p, xi)
}

/// `P[x + X_T ≤ a]`.
pub fn cpdf_x(req: &EvalRequest, x: f64, a: f64) -> Result<f64> {
    Ok(cpdf_x_many(req, x, &[a])?[0])
}

pub fn cpdf_x_many(req: &EvalRequest, x: f64, a: &[f64]) -> Result<Vec<f64>> {
    match req.method {
        Method::DirectFourier => a
            .iter()
            .map(|&ai| {
                let xp = x + req.params.mu * req.t - ai;
                Ok(clamp_prob(1.0 - direct_exceed(&req.params, req.t, xp, req.eps)?))
            })
            .collect(),
        _ => laplace_path(req, x, a),
    }
}

/// Laplace nodes of the inversion; the direct method and the inner rays carry no WHF grids.
pub fn cpdf_x_node_counts(req: &EvalRequest) -> Result<NodeCounts> {
    match req.method {
        Method::DirectFourier => Ok(NodeCounts::default()),
        _ => Ok(NodeCounts { n_l: Inverter::for_request(req)?.0.node_count(), n_pos: 0, n_neg: 0 }),
    }
}

/// Angle and strip half-width for the direct integral: the ray turns towards the
/// half-plane where `e^{ix'ξ}` decays.
fn direct_ray(p: &StableParams, xp: f64) -> Result<(f64, f64)> {
    if p.is_alpha_one() && !p.is_symmetric() {
        // the logarithmic term only decays on rays turned against the skewness
        let beta = p.constants().beta_z;
        if xp * beta > 0.0 {
            return Err(Error::Regime(format!(
                "asymmetric index-one law: the contour for x' = {xp} would have to turn towards the growing side of the exponent (skewness {beta})"
            )));
        }
        let w = if xp == 0.0 { -beta.signum() * FRAC_PI_8 / 2.0 } else { xp.signum() * FRAC_PI_8 };
        return Ok((w, 0.8 * w.abs()));
    }
    let cone = charexp::admissible_cone(p, false)?;
    if xp == 0.0 {
        let lim = cone.gamma_plus.min(-cone.gamma_minus).min(FRAC_PI_4);
        return Ok((0.0, 0.8 * lim));
    }
    let side = if xp > 0.0 { cone.gamma_plus } else { -cone.gamma_minus };
    let w = side.min(FRAC_PI_4) / 2.0;
    Ok((xp.signum() * w, 0.8 * w))
}

/// `P[Y > -x']` where `X_T = μT + Y`.
pub fn direct_exceed(p: &StableParams, t: f64, xp: f64, eps: f64) -> Result<f64> {
    p.validate()?;
    let c = bm_coefficient(p);
    let base = bm_exceed(xp, c, t);
    let (omega, d) = direct_ray(p, xp)?;
    let alpha = p.alpha;
    let kc = p.constants();
    let cc = if p.is_alpha_one() { C::new(kc.sigma_z, 0.0) } else { kc.c_plus };
    let series_ok = !(p.is_alpha_one() && !p.is_symmetric());

    let f = |y: C| -> Result<C> {
        let xi = (I * omega + y).exp();
        let e1 = (-t * psi0_right(p, xi)?).exp();
        let e2 = (-t * c * xi * xi).exp();
        Ok((I * xp * xi).exp() * (e1 - e2) / I)
    };

    let h = estimate_hardy_norm(|y| f(y).unwrap_or(C::new(f64::INFINITY, 0.0)), d, -20.0, 5.0);
    let h = if h.is_finite() { h } else { 1e3 };
    let zeta = plan_step(&ErrorBudget::new(eps / 4.0, d, h)?);

    // right tail
    let s_om = omega.sin().abs();
    let dec_a = t * (cc * C::new(0.0, alpha * omega).exp()).re;
    let dec_2 = t * c * (2.0 * omega).cos();
    let right = |y: f64| {
        let r = y.exp();
        (-xp.abs() * s_om * r).exp() * ((-dec_a * r.powf(alpha)).exp() + (-dec_2 * r * r).exp())
    };
    let n_plus = tail_count_fn(right, zeta, eps / 8.0)?;

    // left part: series in ξ below r0, nodes above
    let r0 = if series_ok {
        let mut r0: f64 = 1.0;
        if xp != 0.0 {
            r0 = r0.min(0.1 / xp.abs());
        }
        r0 = r0.min((0.1 / (t * cc.norm())).powf(1.0 / alpha)).min((0.1 / (t * c)).sqrt());
        r0
    } else {
        let left = |y: f64| {
            let r = (-y).exp();
            t * kc.sigma_z * r * (2.0 + y.abs()) + t * c * r * r
        };
        (-((tail_count_fn(left, zeta, eps / 8.0)? + 1) as f64) * zeta).exp()
    };
    let j0 = (r0.ln() / zeta).floor() as i64;

    let mut acc = CompensatedSum::new();
    if series_ok {
        acc.add(left_series(xp, t, cc, c, alpha, omega, zeta, j0));
    }
    for j in j0..=n_plus as i64 {
        acc.add(f(C::new(j as f64 * zeta, 0.0))? * zeta);
    }
    Ok(base + acc.value().re / PI)
}

/// `ζ Σ_{j<j0} F(jζ)` from the double power series of the integrand in `ξ`.
#[allow(clippy::too_many_arguments)]
fn left_series(xp: f64, t: f64, cc: C, c: f64, alpha: f64, omega: f64, zeta: f64, j0: i64) -> C {
    const TERMS: usize = 24;
    let y_top = (j0 - 1) as f64 * zeta;
    // Σ_{j ≤ j0-1} ζ ξ_j^p = ζ e^{ipω} e^{p y_top} / (1 - e^{-pζ})
    let geo = |pw: f64| zeta * C::new(pw * y_top, pw * omega).exp() / -(-pw * zeta).exp_m1();
    let mut total = C::new(0.0, 0.0);
    let mut a_m = C::new(1.0, 0.0);
    for m in 0..TERMS {
        if m > 0 {
            a_m *= I * xp / m as f64;
        }
        let mut b_n = C::new(1.0, 0.0);
        let mut g_n = 1.0;
        for n in 1..TERMS {
            b_n *= -t * cc / n as f64;
            g_n *= -t * c / n as f64;
            let term = a_m * (b_n * geo(m as f64 + n as f64 * alpha) - g_n * geo(m as f64 + 2.0 * n as f64));
            total += term;
        }
    }
    total / I
}

struct LaplaceRay {
    u: f64,
    zeta: f64,
    xi: [Vec<C>; 2],
    psi: [Vec<C>; 2],
}

/// `ψ` analytic continuation and planning of the rays for one `x - a`.
fn plan_laplace_ray(req: &EvalRequest, inv: &Inverter, u: f64) -> Result<LaplaceRay> {
    let p = &req.params;
    let complex_q = matches!(inv, Inverter::Sinh(_));
    let cone = charexp::admissible_cone(p, complex_q)?;
    let bm_limit = match inv {
        Inverter::Sinh(b) => FRAC_PI_4 - 0.9 * b.contour.omega_l,
        Inverter::Gwr(_) => PI / 2.0,
    };
    let side = if u >= 0.0 { cone.gamma_plus } else { -cone.gamma_minus };
    let lim = side.min(bm_limit);
    let (omega, d) = if u == 0.0 {
        let l = cone.gamma_plus.min(-cone.gamma_minus).min(bm_limit);
        (0.0, 0.8 * l)
    } else {
        let w = FRAC_PI_8.min(lim / 2.0);
        (u.signum() * w, 0.8 * w.min(lim - w))
    };
    let q_min = inv.q_min(req.t);
    let c = bm_coefficient(p);
    let cabs = p.constants().c_plus.norm();
    let eps = req.eps * 0.05;
    let h = 10.0 * (1.0 / q_min).max(1.0);
    let zeta = plan_step(&ErrorBudget::new(eps, d, h)?);
    let s = omega.sin().abs();
    let alpha = p.alpha;
    let right = |y: f64| {
        let r = y.exp();
        (-u.abs() * s * r).exp() * (1.0 / q_min.max(0.5 * cabs * r.powf(alpha)) + 1.0 / q_min.max(0.5 * c * r * r))
    };
    let left = |y: f64| {
        let r = (-y).exp();
        (cabs * r.powf(alpha) + c * r * r) / (q_min * q_min)
    };
    let n_plus = tail_count_fn(right, zeta, eps / 4.0)? as i64;
    let n_minus = tail_count_fn(left, zeta, eps / 4.0)? as i64;
    let kc = p.constants();
    let mut xi = [Vec::new(), Vec::new()];
    let mut psi = [Vec::new(), Vec::new()];
    for (r, th) in [omega, PI - omega].into_iter().enumerate() {
        for j in -n_minus..=n_plus {
            let z = C::new(j as f64 * zeta, th).exp();
            xi[r].push(z);
            psi[r].push(charexp::psi_with(p, &kc, z)?);
        }
    }
    Ok(LaplaceRay { u, zeta, xi, psi })
}

fn laplace_path(req: &EvalRequest, x: f64, a: &[f64]) -> Result<Vec<f64>> {
    req.check_method()?;
    let (inv, _) = Inverter::for_request(req)?;
    let p = &req.params;
    let c = bm_coefficient(p);
    let rays = a.iter().map(|&ai| plan_laplace_ray(req, &inv, x - ai)).collect::<Result<Vec<_>>>()?;
    let v = inv.invert_vec(
        |q| {
            rays.iter()
                .map(|r| {
                    let mut acc = CompensatedSum::new();
                    for (k, sign) in [(0usize, 1.0), (1, -1.0)] {
                        for (&xi, &ps) in r.xi[k].iter().zip(&r.psi[k]) {
                            let bm = -I * p.mu * xi + c * xi * xi;
                            let z = q + ps;
                            if z.im == 0.0 && z.re <= 0.0 {
                                return Err(Error::BranchCut { node: 0, detail: format!("q + psi = {z}") });
                            }
                            acc.add(sign * (I * r.u * xi).exp() * (1.0 / z - 1.0 / (q + bm)));
                        }
                    }
                    Ok(acc.value() * r.zeta / (2.0 * PI * I))
                })
                .collect()
        },
        req.t,
    )?;
    Ok(a.iter()
        .zip(v)
        .map(|(&ai, v1)| clamp_prob(1.0 - (bm_exceed(x - ai + p.mu * req.t, c, req.t) + v1)))
        .collect())
}
