//! Distribution of the running supremum.

use num_complex::Complex64;

use super::{clamp_prob, EvalRequest, GridVariant, NodeCounts, Prepared};
use crate::error::{Error, Result};
use crate::quadrature::CompensatedSum;
use crate::whf::WhfGrids;

type C = Complex64;

/// `P[x + X̄_{T_q} > a]` for each `a - x` in `dists`:
/// `(1/2πi) ∫_{L⁻} e^{-i(a-x)ξ} φ⁺_{q,mod}(ξ) dξ/ξ`.
pub fn exceedance(g: &WhfGrids, q: C, dists: &[f64]) -> Result<Vec<C>> {
    if let Some(d) = dists.iter().find(|d| !(**d >= 0.0)) {
        return Err(Error::Precondition(format!("barrier distance a - x = {d} must be >= 0")));
    }
    let f = g.factors(q)?;
    let m = f.phi_plus_mod_on_minus(g)?;
    let (lo, hi) = g.target_minus;
    let scale = C::new(0.0, -g.zeta / (2.0 * std::f64::consts::PI));
    Ok(dists
        .iter()
        .map(|&d| {
            let mut acc = CompensatedSum::new();
            for (t, ray) in g.minus.iter().enumerate() {
                for i in lo..hi {
                    let xi = ray.xi[i];
                    acc.add(ray.orientation * (C::new(0.0, -d) * xi).exp() * m[t][i]);
                }
            }
            acc.value() * scale
        })
        .collect())
}

/// `q`-domain exceedance for a single barrier distance.
pub fn cpdf_sup_transform(g: &WhfGrids, q: C, a_minus_x: f64) -> Result<C> {
    Ok(exceedance(g, q, &[a_minus_x])?[0])
}

fn distances(x: f64, a: &[f64]) -> Result<Vec<f64>> {
    a.iter()
        .map(|&ai| {
            if ai < x {
                Err(Error::Precondition(format!("barrier a = {ai} lies below the starting point x = {x}")))
            } else {
                Ok(ai - x)
            }
        })
        .collect()
}

/// `P[x + X̄_T ≤ a]`.
pub fn cpdf_sup(req: &EvalRequest, x: f64, a: f64) -> Result<f64> {
    Ok(cpdf_sup_many(req, x, &[a])?[0])
}

pub fn cpdf_sup_many(req: &EvalRequest, x: f64, a: &[f64]) -> Result<Vec<f64>> {
    let d = distances(x, a)?;
    let prep = prepare_sup(req, &d)?;
    cpdf_sup_prepared(&prep, &d)
}

pub fn prepare_sup(req: &EvalRequest, dists: &[f64]) -> Result<Prepared> {
    prepare_sup_variant(req, dists, GridVariant::default())
}

pub fn prepare_sup_variant(req: &EvalRequest, dists: &[f64], variant: GridVariant) -> Result<Prepared> {
    let dmin = dists.iter().cloned().fold(f64::INFINITY, f64::min);
    Prepared::with_variant(req, Some(dmin.max(0.0)), None, variant)
}

pub fn sup_node_counts(req: &EvalRequest, x: f64, a: &[f64]) -> Result<NodeCounts> {
    Ok(prepare_sup(req, &distances(x, a)?)?.node_counts())
}

/// [`cpdf_sup_many`] on perturbed grids.
pub fn cpdf_sup_variant(req: &EvalRequest, x: f64, a: &[f64], variant: GridVariant) -> Result<Vec<f64>> {
    let d = distances(x, a)?;
    let prep = prepare_sup_variant(req, &d, variant)?;
    cpdf_sup_prepared(&prep, &d)
}

/// Values for barrier distances `a - x` on already built grids.
pub fn cpdf_sup_prepared(prep: &Prepared, dists: &[f64]) -> Result<Vec<f64>> {
    let v = prep.invert_vec(|q| {
        let e = exceedance(&prep.grids, q, dists)?;
        Ok(e.into_iter().map(|ei| (1.0 - ei) / q).collect())
    })?;
    Ok(v.into_iter().map(clamp_prob).collect())
}
