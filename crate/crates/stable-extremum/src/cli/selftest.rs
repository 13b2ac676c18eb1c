//! Quick consistency suite run by the `selftest` subcommand.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::charexp::{self, ConeSpec, ScaleConvention, StableParams};
use crate::distributions::{cpdf_sup, cpdf_x_many, EvalRequest, Method};
use crate::error::Result;
use crate::laplace::{self, GwrConfig};
use crate::oracle::{self, McConfig};
use crate::whf::{self, GridSpec, RayAngles};

type C = Complex64;

pub struct SelftestOptions {
    /// Weights fed to the Gaver–Stehfest check; replaced in mutation tests.
    pub gaver_weights: fn(usize) -> Vec<f64>,
    pub seed: u64,
}

impl Default for SelftestOptions {
    fn default() -> Self {
        SelftestOptions { gaver_weights: laplace::gaver_stehfest_weights, seed: 0 }
    }
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub worst: f64,
    pub gate: f64,
    pub error: Option<String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.worst <= self.gate
    }
}

fn check(name: &str, gate: f64, r: Result<f64>) -> Check {
    match r {
        Ok(w) if w.is_finite() => Check { name: name.into(), worst: w, gate, error: None },
        Ok(w) => Check { name: name.into(), worst: w, gate, error: Some("non-finite result".into()) },
        Err(e) => Check { name: name.into(), worst: f64::NAN, gate, error: Some(e.to_string()) },
    }
}

/// A transform and its original.
#[derive(Clone, Copy)]
pub struct Pair {
    pub name: &'static str,
    pub transform: fn(C) -> C,
    pub original: fn(f64) -> f64,
    /// Oscillating originals are out of reach of real-axis inversion.
    pub oscillatory: bool,
}

pub fn transform_pairs() -> Vec<Pair> {
    let p = |name, transform, original, oscillatory| Pair { name, transform, original, oscillatory };
    vec![
        p("1/(q+1)", (|q: C| 1.0 / (q + 1.0)) as fn(C) -> C, (|t: f64| (-t).exp()) as fn(f64) -> f64, false),
        p("1/q^2", |q| 1.0 / (q * q), |t| t, false),
        p("1/(q+1)^2", |q| 1.0 / ((q + 1.0) * (q + 1.0)), |t| t * (-t).exp(), false),
        p("1/(q(q+1))", |q| 1.0 / (q * (q + 1.0)), |t| 1.0 - (-t).exp(), false),
        p("1/(q+1/2)^3", |q| 1.0 / ((q + 0.5) * (q + 0.5) * (q + 0.5)), |t| 0.5 * t * t * (-0.5 * t).exp(), false),
        p("1/(q^2+1)", |q| 1.0 / (q * q + 1.0), |t| t.sin(), true),
    ]
}

/// Analyticity cone containing every pole of [`transform_pairs`] on its left.
pub fn pair_cone() -> ConeSpec {
    ConeSpec { gamma_minus: -PI / 4.0, gamma_plus: PI / 4.0, sigma: 2.0, gamma0: PI / 4.0 }
}

const PAIR_TIMES: [f64; 3] = [0.5, 1.0, 2.0];

fn pairs_sinh() -> Result<f64> {
    let mut worst: f64 = 0.0;
    for Pair { transform: f, original: g, .. } in transform_pairs() {
        for t in PAIR_TIMES {
            let cfg = laplace::choose_contour_for_cone(t, &pair_cone(), 1e-14)?;
            let v = laplace::sinh_bromwich_invert(|q| Ok(f(q)), t, &cfg)?;
            worst = worst.max((v - g(t)).abs());
        }
    }
    Ok(worst)
}

fn pairs_gwr() -> Result<f64> {
    let cfg = GwrConfig::new(16, 0.0)?;
    let mut worst: f64 = 0.0;
    for Pair { transform: f, original: g, .. } in transform_pairs().into_iter().filter(|p| !p.oscillatory) {
        for t in PAIR_TIMES {
            let v = laplace::gwr_invert(|q| Ok(f(C::new(q, 0.0)).re), t, &cfg)?;
            worst = worst.max((v - g(t)).abs());
        }
    }
    Ok(worst)
}

fn pairs_gaver(weights: fn(usize) -> Vec<f64>) -> Result<f64> {
    let w = weights(8);
    let mut worst: f64 = 0.0;
    for Pair { transform: f, original: g, .. } in transform_pairs().into_iter().filter(|p| !p.oscillatory) {
        for t in PAIR_TIMES {
            let v = laplace::gaver_stehfest_with_weights(|q| Ok(f(C::new(q, 0.0)).re), t, &w)?;
            worst = worst.max((v - g(t)).abs());
        }
    }
    Ok(worst)
}

fn wh_identity(p: StableParams, complex_q: bool) -> Result<f64> {
    let cone = charexp::admissible_cone(&p, complex_q)?;
    let angles = if complex_q { RayAngles::complex_q(&cone) } else { RayAngles::real_q(&cone) };
    let g = whf::build_grids(&p, &cone, angles, GridSpec::new(1e-12, 0.5))?;
    let pts = whf::validation_points();
    let qs: Vec<C> = if complex_q {
        vec![C::new(1.0, 0.0), C::new(3.0, 4.0), C::new(0.5, -2.0)]
    } else {
        vec![C::new(0.5, 0.0), C::new(2.0, 0.0), C::new(20.0, 0.0)]
    };
    let mut worst: f64 = 0.0;
    for q in qs {
        worst = worst.max(whf::wh_identity_residual(&g, q, &pts)?);
    }
    Ok(worst)
}

fn cauchy() -> Result<f64> {
    let (c, mu, t) = (0.3, 0.1, 0.5);
    let p = StableParams::new(1.0, c, c, mu)?;
    let req = EvalRequest::new(p, t, Method::DirectFourier, 1e-13)?;
    let ys: Vec<f64> = (-4..=4).map(|k| mu * t + 0.4 * k as f64).collect();
    let v = cpdf_x_many(&req, 0.0, &ys)?;
    Ok(ys.iter().zip(&v).map(|(&y, &f)| (f - oracle::cauchy_cdf(c, mu, t, y)).abs()).fold(0.0, f64::max))
}

fn one_sided() -> Result<f64> {
    let p = StableParams::new(1.5, 0.0, 0.4, 0.1)?;
    let o = oracle::spectrally_one_sided_sup(&p)?;
    let cone = charexp::admissible_cone(&p, true)?;
    let g = whf::build_grids(&p, &cone, RayAngles::complex_q(&cone), GridSpec::new(1e-12, 0.5))?;
    let mut worst: f64 = 0.0;
    for q in [C::new(1.0, 0.0), C::new(2.0, 3.0)] {
        for xi in [-3.0, -0.5, 0.2, 1.0, 7.0] {
            let xi = C::new(xi, 0.0);
            worst = worst.max((whf::phi_plus(&g, q, xi)? - o.phi(q, xi)?).norm());
        }
    }
    Ok(worst)
}

/// Monte-Carlo bracket of one supremum probability, expressed as a z-score.
fn mc_smoke(seed: u64) -> Result<f64> {
    let p = StableParams::from_beta(1.2, -0.2, 0.2, -0.02, ScaleConvention::Sigma)?;
    let (t, a) = (0.25, 0.05);
    let req = EvalRequest::new(p, t, Method::SinhBromwich, 1e-8)?;
    let v = cpdf_sup(&req, 0.0, a)?;
    let sample = oracle::mc_joint_sup_refined(&p, t, &McConfig::new(20_000, 128, seed)?)?;
    Ok(sample.z_score(v, |s| s.cpdf_sup(a)))
}

pub fn run(opts: &SelftestOptions) -> Vec<Check> {
    let mut out = Vec::new();
    let regimes: [(&str, Result<StableParams>, bool); 5] = [
        ("wh identity, index 1.2 skewed", StableParams::new(1.2, 0.3, 0.7, -0.02), true),
        ("wh identity, index 0.6 driftless", StableParams::new(0.6, 0.5, 0.2, 0.0), true),
        ("wh identity, index 0.6 with drift", StableParams::new(0.6, 0.5, 0.2, 0.05), false),
        ("wh identity, index 1 symmetric", StableParams::new(1.0, 0.2, 0.2, 0.03), true),
        ("wh identity, index 1.8", StableParams::new(1.8, 0.1, 0.4, 0.1), true),
    ];
    for (name, p, cq) in regimes {
        out.push(check(name, 1e-10, p.and_then(|p| wh_identity(p, cq))));
    }
    out.push(check("transform pairs, sinh contour", 1e-13, pairs_sinh()));
    out.push(check("transform pairs, gwr 2M=16", 1e-6, pairs_gwr()));
    out.push(check("transform pairs, gaver-stehfest M=8", 1e-4, pairs_gaver(opts.gaver_weights)));
    out.push(check("cauchy closed form", 1e-12, cauchy()));
    out.push(check("one-sided factor", 1e-10, one_sided()));
    out.push(check("monte-carlo supremum, z-score", 4.0, mc_smoke(opts.seed)));
    out
}
