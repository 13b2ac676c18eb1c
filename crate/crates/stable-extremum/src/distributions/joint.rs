//! Joint distribution of `X_T` and its running supremum.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::supremum::{cpdf_sup_prepared, prepare_sup};
use super::cpdf_x::cpdf_x_many;
use super::{clamp_prob, EvalRequest, Method, NodeCounts, Prepared};
use crate::error::{Error, Result};
use crate::quadrature::CompensatedSum;
use crate::whf::WhfGrids;

type C = Complex64;
const I: C = C::new(0.0, 1.0);

/// Laplace transform of `V₁ = P[x + X_T ≤ a₁, x + X̄_T > a₂]` for `a₁ < a₂`:
///
/// `(1/(2π)²q) ∫_{L⁻} dη G⁺(η) ∫_{L⁺} dξ G⁻(ξ) / (ξ(η-ξ))`, with
/// `G⁺ = e^{i(x-a₂)η} φ⁺_{q,mod}(η)` and `G⁻ = e^{i(a₂-a₁)ξ} φ⁻_{q,mod}(ξ)`.
pub fn joint_v1_transform(g: &WhfGrids, q: C, x: f64, a1: f64, a2: f64) -> Result<C> {
    Ok(joint_transform_many(g, q, x, &[(a1, a2)])?[0])
}

fn joint_transform_many(g: &WhfGrids, q: C, x: f64, cells: &[(f64, f64)]) -> Result<Vec<C>> {
    let f = g.factors(q)?;
    let pm = f.phi_minus_mod_on_plus(g)?;
    let pp = f.phi_plus_mod_on_minus(g)?;
    let z = g.zeta;
    let n = g.len();
    let (pl, ph) = g.target_plus;
    let (ml, mh) = g.target_minus;
    cells
        .iter()
        .map(|&(a1, a2)| {
            let u = a2 - a1;
            let src: [Vec<C>; 2] = [0, 1].map(|s| {
                let ray = &g.plus[s];
                let mut v = vec![C::new(0.0, 0.0); n];
                for i in pl..ph {
                    v[i] = ray.orientation * z * (I * u * ray.xi[i]).exp() * pm[s][i];
                }
                v
            });
            let inner = g.correlate_plus_to_minus([&src[0], &src[1]]);
            let mut acc = CompensatedSum::new();
            for (t, ray) in g.minus.iter().enumerate() {
                for k in ml..mh {
                    let gp = (I * (x - a2) * ray.xi[k]).exp() * pp[t][k];
                    acc.add(ray.orientation * gp * inner[t][k]);
                }
            }
            let v = acc.value() * z / (4.0 * PI * PI * q);
            if v.re.is_finite() && v.im.is_finite() {
                Ok(v)
            } else {
                Err(Error::Domain(format!("joint transform not finite at q = {q}")))
            }
        })
        .collect()
}

/// `P[x₁ + X_T ≤ a₁, max(x₂, x₁ + X̄_T) ≤ a₂]` for `x₁ ≤ x₂ ≤ a₂`.
pub fn joint_cpdf(req: &EvalRequest, x1: f64, x2: f64, a1: f64, a2: f64) -> Result<f64> {
    check_order(x1, x2, &[(a1, a2)])?;
    Ok(joint_cpdf_many(req, x1, &[(a1, a2)])?[0])
}

fn check_order(x1: f64, x2: f64, cells: &[(f64, f64)]) -> Result<()> {
    if x2 < x1 {
        return Err(Error::Precondition(format!("x2 = {x2} must not lie below x1 = {x1}")));
    }
    for &(a1, a2) in cells {
        if !(a1.is_finite() && a2.is_finite()) {
            return Err(Error::InvalidParams(format!("non-finite cell ({a1}, {a2})")));
        }
        if a2 < x2 {
            return Err(Error::Precondition(format!("barrier a2 = {a2} lies below x2 = {x2}")));
        }
    }
    Ok(())
}

/// `V₁ = P[x + X_T ≤ a₁, x + X̄_T > a₂]` for cells with `a₁ < a₂`, `x ≤ a₂`.
pub fn joint_v1_many(req: &EvalRequest, x: f64, cells: &[(f64, f64)]) -> Result<Vec<f64>> {
    check_order(x, x, cells)?;
    if let Some(c) = cells.iter().find(|c| c.0 >= c.1) {
        return Err(Error::Precondition(format!("V1 needs a1 < a2, got {c:?}")));
    }
    let (dm, dp) = decays(x, cells);
    let prep = Prepared::new(req, Some(dm), Some(dp))?;
    let v = prep.invert_vec(|q| joint_transform_many(&prep.grids, q, x, cells))?;
    Ok(v.into_iter().map(clamp_prob).collect())
}

fn decays(x: f64, cells: &[(f64, f64)]) -> (f64, f64) {
    let dm = cells.iter().map(|c| c.1 - x).fold(f64::INFINITY, f64::min);
    let dp = cells.iter().map(|c| c.1 - c.0).fold(f64::INFINITY, f64::min);
    (dm, dp)
}

/// Node counts of the `V₁` grids; cells with `a₁ ≥ a₂` use the supremum grids instead.
pub fn joint_node_counts(req: &EvalRequest, x: f64, cells: &[(f64, f64)]) -> Result<NodeCounts> {
    check_order(x, x, cells)?;
    let cj: Vec<(f64, f64)> = cells.iter().copied().filter(|c| c.0 < c.1).collect();
    if cj.is_empty() {
        let a: Vec<f64> = cells.iter().map(|c| c.1).collect();
        return super::sup_node_counts(req, x, &a);
    }
    let (dm, dp) = decays(x, &cj);
    Ok(Prepared::new(req, Some(dm), Some(dp))?.node_counts())
}

/// Joint cdf for several `(a₁, a₂)` cells; grids are shared.
pub fn joint_cpdf_many(req: &EvalRequest, x: f64, cells: &[(f64, f64)]) -> Result<Vec<f64>> {
    check_order(x, x, cells)?;
    // a₁ ≥ a₂ reduces to the supremum alone
    let sup_cells: Vec<usize> = (0..cells.len()).filter(|&i| cells[i].0 >= cells[i].1).collect();
    let joint: Vec<usize> = (0..cells.len()).filter(|&i| cells[i].0 < cells[i].1).collect();
    let mut out = vec![0.0; cells.len()];
    if !sup_cells.is_empty() {
        let d: Vec<f64> = sup_cells.iter().map(|&i| cells[i].1 - x).collect();
        let prep = prepare_sup(req, &d)?;
        for (k, v) in cpdf_sup_prepared(&prep, &d)?.into_iter().enumerate() {
            out[sup_cells[k]] = v;
        }
    }
    if !joint.is_empty() {
        let cj: Vec<(f64, f64)> = joint.iter().map(|&i| cells[i]).collect();
        let v1 = joint_v1_many(req, x, &cj)?;
        let fx_req = EvalRequest { method: Method::DirectFourier, ..*req };
        let a1: Vec<f64> = cj.iter().map(|c| c.0).collect();
        let fx = cpdf_x_many(&fx_req, x, &a1)?;
        for (k, (v, f)) in v1.into_iter().zip(fx).enumerate() {
            out[joint[k]] = clamp_prob(f - v);
        }
    }
    Ok(out)
}
