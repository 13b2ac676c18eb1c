//! Damped exchange payoff `E[(β(x₁ + X_T) - M)₊ e^{-λM}]`, `M = max(x₂, x₁ + X̄_T)`.

use num_complex::Complex64;

use super::cpdf_x::cpdf_x_many;
use std::f64::consts::PI;

use rayon::prelude::*;

use super::general::prepare_expectation;
use super::{EvalRequest, Method, NodeCounts};
use crate::error::{Error, Result};
use crate::quadrature::{gauss_legendre, CompensatedSum};
use crate::whf::WhfGrids;

type C = Complex64;
const I: C = C::new(0.0, 1.0);

/// `(e^z - 1 - z)/z²` without cancellation near zero.
fn g2(z: C) -> C {
    if z.norm() < 0.5 {
        let mut term = C::new(0.5, 0.0);
        let mut s = term;
        for k in 1..20 {
            term *= z / (k + 2) as f64;
            s += term;
        }
        s
    } else {
        (z.exp() - 1.0 - z) / (z * z)
    }
}

/// `(e^z - 1)/z`.
fn g1(z: C) -> C {
    if z.norm() < 0.5 {
        let mut term = C::new(1.0, 0.0);
        let mut s = term;
        for k in 1..20 {
            term *= z / (k + 1) as f64;
            s += term;
        }
        s
    } else {
        (z.exp() - 1.0) / z
    }
}

/// Kernel of the double integral for the exchange payoff, in a form that stays
/// accurate as `ξ → 0`. Reference for the fast evaluation in [`second_term_fast`].
pub fn exchange_kernel(beta: f64, lambda: f64, x2: f64, eta: C, xi: C) -> C {
    let kappa = 1.0 - 1.0 / beta;
    let u = I * kappa * xi;
    let w = lambda + I * eta;
    let z = u * x2;
    let damp = (-lambda * x2).exp();
    // x₂/w² and the u/w part of the g₂ term combine into g₁, which decays as ξ → ∞
    let mut s = x2 * g1(z) / (w * w) + z.exp() / (w * w * (w - u));
    if x2 != 0.0 {
        s += x2 * x2 * g2(z) * (1.0 / w + I / (eta - xi));
    }
    damp * beta * kappa * kappa * s
}

/// Number of expansion terms for `1/(w - u)` when `|u/w|` or `|w/u|` is at most 1/4.
const TERMS: usize = 30;
const RATIO: f64 = 4.0;

/// `Σ_j v_j / (w - u_j)` over sources on a geometric lattice `|u_j| = U₀ e^{jζ}`, with
/// near and far contributions from normalized moment recurrences and a direct band.
struct CauchySum {
    zeta: f64,
    /// `ln |u|` of the first source.
    y0: f64,
    u: Vec<[C; 2]>,
    v: Vec<[C; 2]>,
    /// `S_k(J) = Σ_{j<J} v_j (u_j/U_J)^k`, `k < TERMS`, `J = 0..=n`.
    near: Vec<[C; TERMS]>,
    /// `R_k(J) = Σ_{j≥J} (v_j/u_j) (U_J/u_j)^k`.
    far: Vec<[C; TERMS]>,
}

impl CauchySum {
    fn new(zeta: f64, y0: f64, u: Vec<[C; 2]>, v: Vec<[C; 2]>) -> Self {
        let n = u.len();
        let mut near = vec![[C::new(0.0, 0.0); TERMS]; n + 1];
        let decay: Vec<f64> = (0..TERMS).map(|k| (-(k as f64) * zeta).exp()).collect();
        for j in 0..n {
            let big_u = (y0 + (j + 1) as f64 * zeta).exp();
            for k in 0..TERMS {
                let mut add = C::new(0.0, 0.0);
                for r in 0..2 {
                    add += v[j][r] * (u[j][r] / big_u).powi(k as i32);
                }
                near[j + 1][k] = near[j][k] * decay[k] + add;
            }
        }
        let mut far = vec![[C::new(0.0, 0.0); TERMS]; n + 1];
        for j in (0..n).rev() {
            let big_u = (y0 + j as f64 * zeta).exp();
            for k in 0..TERMS {
                let mut add = C::new(0.0, 0.0);
                for r in 0..2 {
                    add += v[j][r] / u[j][r] * (big_u / u[j][r]).powi(k as i32);
                }
                far[j][k] = far[j + 1][k] * decay[k] + add;
            }
        }
        CauchySum { zeta, y0, u, v, near, far }
    }

    fn eval(&self, w: C) -> C {
        let n = self.u.len() as i64;
        let lw = w.norm().ln();
        // near: |u_j| ≤ |w|/4 for j < j_lo; far: |u_j| ≥ 4|w| for j ≥ j_hi
        let j_lo = (((lw - RATIO.ln() - self.y0) / self.zeta).floor() as i64 + 1).clamp(0, n);
        let j_hi = (((lw + RATIO.ln() - self.y0) / self.zeta).ceil() as i64).clamp(j_lo, n);
        let mut s = CompensatedSum::new();
        if j_lo > 0 {
            let r = (self.y0 + j_lo as f64 * self.zeta).exp() / w;
            let mut pw = C::new(1.0, 0.0);
            let mut acc = C::new(0.0, 0.0);
            for k in 0..TERMS {
                acc += pw * self.near[j_lo as usize][k];
                pw *= r;
            }
            s.add(acc / w);
        }
        if j_hi < n {
            let r = w / (self.y0 + j_hi as f64 * self.zeta).exp();
            let mut pw = C::new(1.0, 0.0);
            let mut acc = C::new(0.0, 0.0);
            for k in 0..TERMS {
                acc += pw * self.far[j_hi as usize][k];
                pw *= r;
            }
            s.add(-acc);
        }
        for j in j_lo..j_hi {
            for r in 0..2 {
                let j = j as usize;
                s.add(self.v[j][r] / (w - self.u[j][r]));
            }
        }
        s.value()
    }
}

/// Double integral for the exchange kernel. The kernel splits into separable terms,
/// a Toeplitz term handled by the grid correlation, and a Cauchy sum.
fn second_term_fast(g: &WhfGrids, q: C, x1: f64, x2: f64, beta: f64, lambda: f64) -> Result<C> {
    let f = g.factors(q)?;
    let pm = f.phi_minus_mod_on_plus(g)?;
    let pp = f.phi_plus_mod_on_minus(g)?;
    let (_, a_minus) = f.asym_constants(g)?;
    let z = g.zeta;
    let n = g.len();
    let (pl, ph) = g.target_plus;
    let (ml, mh) = g.target_minus;
    let kappa = 1.0 - 1.0 / beta;

    let mut gz_src = [vec![C::new(0.0, 0.0); n], vec![C::new(0.0, 0.0); n]];
    let (mut s_a, mut s_g) = (CompensatedSum::new(), CompensatedSum::new());
    let mut cu = Vec::with_capacity(ph - pl);
    let mut cv = Vec::with_capacity(ph - pl);
    for j in pl..ph {
        let mut uj = [C::new(0.0, 0.0); 2];
        let mut vj = [C::new(0.0, 0.0); 2];
        for s in 0..2 {
            let ray = &g.plus[s];
            let xi = ray.xi[j];
            let w = ray.orientation * z * xi * pm[s][j];
            let u = I * kappa * xi;
            let zz = u * x2;
            if x2 != 0.0 {
                let gz = g2(zz);
                gz_src[s][j] = w * gz;
                s_a.add(w * g1(zz));
                s_g.add(w * gz);
            }
            uj[s] = u;
            vj[s] = w * zz.exp();
        }
        cu.push(uj);
        cv.push(vj);
    }
    let cauchy = CauchySum::new(z, kappa.ln() + g.y(pl), cu, cv);
    let toeplitz = if x2 != 0.0 { Some(g.correlate_plus_to_minus([&gz_src[0], &gz_src[1]])) } else { None };
    let (s_a, s_g) = (s_a.value(), s_g.value());
    let damp = (-lambda * x2).exp();
    let pref = damp * beta * kappa * kappa;

    let targets: Vec<(usize, usize)> = (0..2).flat_map(|t| (ml..mh).map(move |k| (t, k))).collect();
    let parts: Vec<C> = targets
        .par_iter()
        .map(|&(t, k)| {
            let ray = &g.minus[t];
            let eta = ray.xi[k];
            let outer = ray.orientation * z * eta * (I * (x1 - x2) * eta).exp() * pp[t][k];
            if outer == C::new(0.0, 0.0) {
                return C::new(0.0, 0.0);
            }
            let w = lambda + I * eta;
            let mut inner = x2 * s_a / (w * w) + cauchy.eval(w) / (w * w);
            if let Some(tp) = &toeplitz {
                // Σ w g(z) / (η - ξ) = (1/η) Σ w g(z) / (1 - ξ/η)
                inner += x2 * x2 * (s_g / w + I * tp[t][k] / eta);
            }
            let mut v = outer * pref * inner / (4.0 * PI * PI);
            if a_minus != 0.0 {
                v += outer * a_minus * exchange_diag(beta, lambda, x2, eta) / (2.0 * PI);
            }
            v
        })
        .collect();
    let mut acc = CompensatedSum::new();
    for p in parts {
        acc.add(p);
    }
    let v = acc.value();
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::Domain(format!("exchange double integral not finite at q = {q}")))
    }
}

/// `∫_{x₂}^∞ e^{i(x₂-y)η} (β-1) y e^{-λy} dy`.
pub fn exchange_diag(beta: f64, lambda: f64, x2: f64, eta: C) -> C {
    let w = lambda + I * eta;
    (-lambda * x2).exp() * (beta - 1.0) * (x2 / w + 1.0 / (w * w))
}

fn check(req: &EvalRequest, x1: f64, x2: f64, beta: f64, lambda: f64) -> Result<()> {
    if x2 < x1 {
        return Err(Error::Precondition(format!("x2 = {x2} must not lie below x1 = {x1}")));
    }
    if !(beta > 1.0 && beta.is_finite()) {
        return Err(Error::InvalidParams(format!("strike multiplier beta = {beta} must exceed 1")));
    }
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParams(format!("damping lambda = {lambda} must be >= 0")));
    }
    if lambda == 0.0 && req.params.alpha <= 1.0 {
        return Err(Error::Divergence(format!(
            "undamped exchange payoff has infinite expectation for alpha = {} <= 1",
            req.params.alpha
        )));
    }
    Ok(())
}

/// The floor only matters where it is positive: the payoff vanishes unless `M > 0`.
fn floor(x2: f64) -> f64 {
    x2.max(0.0)
}

/// `E[(β(x₁+X_T) - M)₊ 1_{x₁+X_T ≤ x₂} ...]` restricted to `M = x₂`, from the
/// cdf of `X_T`: `e^{-λx₂} β ∫_{x₂/β}^{x₂} (F(x₂) - F(u)) du`.
fn first_term(req: &EvalRequest, x1: f64, x2: f64, beta: f64, lambda: f64) -> Result<f64> {
    if x2 <= 0.0 {
        return Ok(0.0);
    }
    let fx = EvalRequest { method: Method::DirectFourier, ..*req };
    let (lo, hi) = (x2 / beta, x2);
    let (nodes, weights) = gauss_legendre(24);
    let panels = 4;
    let h = (hi - lo) / panels as f64;
    let mut pts = vec![x2];
    let mut ws = Vec::new();
    for p in 0..panels {
        let a = lo + p as f64 * h;
        for (n, w) in nodes.iter().zip(&weights) {
            pts.push(a + 0.5 * h * (n + 1.0));
            ws.push(0.5 * h * w);
        }
    }
    let f = cpdf_x_many(&fx, x1, &pts)?;
    let s: f64 = ws.iter().zip(&f[1..]).map(|(w, fu)| w * (f[0] - fu)).sum();
    Ok((-lambda * x2).exp() * beta * s)
}

/// `E[(β(x₁ + X_T) - max(x₂, x₁ + X̄_T))₊ e^{-λ max(x₂, x₁ + X̄_T)}]`.
pub fn exchange_expectation(req: &EvalRequest, x1: f64, x2: f64, beta: f64, lambda: f64) -> Result<f64> {
    check(req, x1, x2, beta, lambda)?;
    req.check_method()?;
    if lambda == 0.0 {
        return undamped_limit(req, x1, x2, beta);
    }
    let x2 = floor(x2);
    let v0 = first_term(req, x1, x2, beta, lambda)?;
    let prep = prepare_expectation(req, x1, x2)?;
    let v1 = prep.invert_vec(|q| Ok(vec![second_term_fast(&prep.grids, q, x1, x2, beta, lambda)? / q]))?;
    let v = v0 + v1[0];
    if v.is_finite() {
        Ok(v.max(0.0))
    } else {
        Err(Error::Domain("exchange expectation is not finite".into()))
    }
}

pub fn exchange_node_counts(req: &EvalRequest, x1: f64, x2: f64) -> Result<NodeCounts> {
    Ok(prepare_expectation(req, x1, floor(x2))?.node_counts())
}

/// `λ = 0` (index above one). The transform has a pole at the vertex of the
/// contour, so the value is taken as the limit of `V(λ) = V₀ - Kλ^{α-1} + Lλ + …`,
/// fitted through three small `λ`.
fn undamped_limit(req: &EvalRequest, x1: f64, x2: f64, beta: f64) -> Result<f64> {
    let e = req.params.alpha - 1.0;
    let lams = [1e-5, 1e-6, 1e-7];
    let mut v = [0.0; 3];
    for (vk, &l) in v.iter_mut().zip(&lams) {
        *vk = exchange_expectation(req, x1, x2, beta, l)?;
    }
    // solve [1, λ^e, λ] · (V₀, -K, L) = V by Cramer's rule
    let rows: Vec<[f64; 3]> = lams.iter().map(|&l| [1.0, l.powf(e), l]).collect();
    let det3 = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let a = [rows[0], rows[1], rows[2]];
    let mut a0 = a;
    for k in 0..3 {
        a0[k][0] = v[k];
    }
    let v0 = det3(a0) / det3(a);
    if v0.is_finite() {
        Ok(v0.max(0.0))
    } else {
        Err(Error::Domain("undamped exchange limit is not finite".into()))
    }
}

/// The same payoff in the form taken by [`super::general_expectation`].
pub fn exchange_payoff(beta: f64, lambda: f64, x2: f64) -> super::general::PayoffTransform {
    use super::general::{PayoffTerm, PayoffTransform};
    let x2 = floor(x2);
    let damp = (-lambda * x2).exp();
    let terms = if x2 > 0.0 {
        vec![
            PayoffTerm {
                shift: x2,
                transform: Box::new(move |xi: C| damp * ((beta - 1.0) * x2 / (-I * xi) + beta / (xi * xi))),
            },
            PayoffTerm { shift: x2 / beta, transform: Box::new(move |xi: C| -damp * beta / (xi * xi)) },
        ]
    } else {
        Vec::new()
    };
    PayoffTransform { terms, alpha0: 1.0, delta: 0.0 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charexp::{ScaleConvention, StableParams};
    use crate::distributions::general::second_term_batch;

    #[test]
    fn fast_second_term_matches_direct_sum() {
        let p = StableParams::from_beta(1.2, 0.0, 0.2, 0.0, ScaleConvention::Sigma).unwrap();
        let req = EvalRequest::new(p, 0.25, Method::Gwr, 1e-10).unwrap();
        for x2 in [0.0, 0.05] {
            let prep = prepare_expectation(&req, 0.0, x2).unwrap();
            let qs = [C::new(2.77, 0.0), C::new(30.0, 0.0), C::new(4.0, 9.0)];
            let k = |e, x| exchange_kernel(2.0, 0.5, x2, e, x);
            let d = |e| exchange_diag(2.0, 0.5, x2, e);
            let direct = second_term_batch(&prep.grids, &qs, 0.0, x2, &k, &d).unwrap();
            for (q, slow) in qs.into_iter().zip(direct) {
                let fast = second_term_fast(&prep.grids, q, 0.0, x2, 2.0, 0.5).unwrap();
                assert!((slow - fast).norm() < 1e-14 * slow.norm().max(1.0), "x2={x2} q={q}: {slow} vs {fast}");
            }
        }
    }
}
