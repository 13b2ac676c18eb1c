//! Wiener–Hopf factors `φ±_q` of a stable process by contour integrals.
//!
//! `φ⁺_q(ξ) = exp[(1/2πi) ∫_{L⁻} ξ L(η) / (η(ξ-η)) dη]` and
//! `φ⁻_q(ξ) = exp[-(1/2πi) ∫_{L⁺} ξ L(η) / (η(ξ-η)) dη]`, `L(η) = Log(q+ψ(η)) - Log q`.
//!
//! `L⁺` is the pair of rays `arg η = ω₊` (outgoing) and `arg η = π-ω₊` (incoming),
//! `L⁻` is `arg η = ω₋` and `arg η = -π-ω₋`. All four rays share one lattice
//! `y_j = jζ`, so the kernel `ξ/(ξ-η)` between any source and target ray depends
//! only on the index difference and the sums are discrete correlations.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_8, PI};
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::charexp::{self, ConeSpec, DerivedConstants, Regime, StableParams};
use crate::error::{Error, Result};
use crate::quadrature::{plan_step, CompensatedSum, ErrorBudget};

type C = Complex64;

const I: C = C::new(0.0, 1.0);
const TWO_PI_I: C = C::new(0.0, 2.0 * PI);

/// Angles of the outgoing rays of `L⁺` and `L⁻`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayAngles {
    pub omega_plus: f64,
    pub omega_minus: f64,
}

impl RayAngles {
    /// `±π/8`, pulled inside the cone when it is narrower.
    pub fn real_q(cone: &ConeSpec) -> Self {
        RayAngles {
            omega_plus: FRAC_PI_8.min(cone.gamma_plus / 2.0),
            omega_minus: (-FRAC_PI_8).max(cone.gamma_minus / 2.0),
        }
    }

    /// Half the cone angles; leaves room on both sides of each ray.
    pub fn complex_q(cone: &ConeSpec) -> Self {
        RayAngles { omega_plus: cone.gamma_plus / 2.0, omega_minus: cone.gamma_minus / 2.0 }
    }

    /// Angles and orientation of the two rays of `L⁺`.
    pub fn plus_rays(&self) -> [(f64, f64); 2] {
        [(self.omega_plus, 1.0), (PI - self.omega_plus, -1.0)]
    }

    pub fn minus_rays(&self) -> [(f64, f64); 2] {
        [(self.omega_minus, 1.0), (-PI - self.omega_minus, -1.0)]
    }
}

/// What the grids must support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub eps: f64,
    pub h_norm: f64,
    /// Fraction of the analyticity strip used for the step.
    pub strip_factor: f64,
    /// Smallest `|q|` that will be evaluated.
    pub q_min: f64,
    /// Decay distance `d` of the factor `e^{-idξ}` multiplying integrands on `L⁻`;
    /// `None` when no integral over `L⁻` targets is needed.
    pub decay_minus: Option<f64>,
    /// Same for `e^{idξ}` on `L⁺`.
    pub decay_plus: Option<f64>,
}

impl GridSpec {
    pub fn new(eps: f64, q_min: f64) -> Self {
        GridSpec { eps, h_norm: 8.0, strip_factor: 0.8, q_min, decay_minus: Some(0.0), decay_plus: None }
    }
}

#[derive(Debug, Clone)]
pub struct RayGrid {
    pub theta: f64,
    /// `+1` for the outgoing ray, `-1` for the incoming one.
    pub orientation: f64,
    pub xi: Vec<C>,
    pub psi: Vec<C>,
}

/// Node and `ψ` arrays of the four rays, built once and reused for every `q`.
pub struct WhfGrids {
    pub params: StableParams,
    pub consts: DerivedConstants,
    pub regime: Regime,
    pub cone: ConeSpec,
    pub angles: RayAngles,
    pub zeta: f64,
    /// Lattice index of the first node.
    pub lo: i64,
    pub plus: [RayGrid; 2],
    pub minus: [RayGrid; 2],
    /// Node offsets (into the arrays) on which target values are trusted.
    pub target_plus: (usize, usize),
    pub target_minus: (usize, usize),
    pub spec: GridSpec,
    bank: ToeplitzBank,
    cache: FactorCache,
}

impl std::fmt::Debug for WhfGrids {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("WhfGrids")
            .field("angles", &self.angles)
            .field("zeta", &self.zeta)
            .field("lo", &self.lo)
            .field("len", &self.len())
            .field("target_plus", &self.target_plus)
            .field("target_minus", &self.target_minus)
            .finish()
    }
}

/// Strip half-width shared by every ray integral on the grids.
pub fn strip_width(cone: &ConeSpec, a: &RayAngles) -> f64 {
    (a.omega_plus - a.omega_minus)
        .min(cone.gamma_plus - a.omega_plus)
        .min(a.omega_minus - cone.gamma_minus)
        .min(a.omega_plus)
        .min(-a.omega_minus)
}

/// Left edge `y` below which `∫|L| dy ≤ eps`, from `|L| ≲ |ψ|/|q|` near zero.
fn source_left_edge(c_abs: f64, mu: f64, alpha: f64, q_min: f64, eps: f64) -> f64 {
    let bound = |y: f64| c_abs * (alpha * y).exp() / (alpha * q_min) + mu.abs() * y.exp() / q_min;
    let (mut lo, mut hi) = (-2000.0, 0.0);
    if bound(hi) <= eps {
        return hi;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if bound(mid) <= eps {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Exponent `δ` of the decay of a modified factor at infinity.
fn factor_decay(exponent: f64, alpha: f64) -> f64 {
    if exponent > 0.0 {
        exponent.min(1.0)
    } else {
        0.5 * alpha.min(2.0 - alpha).min(1.0)
    }
}

pub fn build_grids(params: &StableParams, cone: &ConeSpec, angles: RayAngles, spec: GridSpec) -> Result<WhfGrids> {
    params.validate()?;
    let regime = charexp::classify(params);
    if !regime.supports_whf() {
        return Err(Error::Regime(
            "factor representations are not available for asymmetric index-one processes".into(),
        ));
    }
    if !(angles.omega_minus < 0.0 && angles.omega_plus > 0.0) {
        return Err(Error::Contour(format!("ray angles {angles:?} must straddle the real axis")));
    }
    let consts = params.constants();
    let alpha = params.alpha;
    let eps = spec.eps;

    let d = spec.strip_factor * strip_width(cone, &angles);
    if d <= 0.0 {
        return Err(Error::Contour(format!("rays {angles:?} leave the cone {cone:?}")));
    }
    let zeta = plan_step(&ErrorBudget::new(eps, d, spec.h_norm)?);

    let m = alpha.min(1.0);
    let c_abs = consts.c_plus.norm();
    let c0 = 1.0 + (c_abs + params.mu.abs()) / spec.q_min;
    let y_lo_t = (eps * m / c0).ln() / m;

    let right_edge = |dist: Option<f64>, omega: f64, exponent: f64| -> f64 {
        match dist {
            None => f64::NEG_INFINITY,
            Some(dd) if dd > 0.0 => {
                let s = dd * omega.abs().sin();
                (((10.0 / eps).ln() / s).ln()).max(0.0) + 2.0 * zeta
            }
            Some(_) => ((10.0 / eps).ln() / factor_decay(exponent, alpha)).min(600.0),
        }
    };
    let y_hi_minus = right_edge(spec.decay_minus, angles.omega_minus, regime.alpha_plus);
    let y_hi_plus = right_edge(spec.decay_plus, angles.omega_plus, regime.alpha_minus);
    let y_hi_t = y_hi_minus.max(y_hi_plus).max(1.0);

    let sin_min = (angles.omega_plus - angles.omega_minus).sin().abs().max(1e-3);
    let y_lo_s = source_left_edge(c_abs, params.mu, alpha, spec.q_min, eps * sin_min / 4.0);
    let y_hi_s = y_hi_t + (100.0 / eps).ln() + 2.0;

    let lo = (y_lo_s.min(y_lo_t) / zeta).floor() as i64;
    let hi = (y_hi_s / zeta).ceil() as i64;
    let n = (hi - lo + 1) as usize;
    if n > 4_000_000 {
        return Err(Error::Tolerance(format!("grid of {n} nodes per ray is too large")));
    }
    let offset = |y: f64| ((y / zeta).floor() as i64 - lo).clamp(0, n as i64 - 1) as usize;
    let t_lo = offset(y_lo_t);
    let target = |yh: f64| if yh.is_finite() { (t_lo, offset(yh) + 1) } else { (t_lo, t_lo) };
    let target_minus = target(y_hi_minus);
    let target_plus = target(y_hi_plus);

    let make = |theta: f64, orientation: f64| -> Result<RayGrid> {
        let xi: Vec<C> = (0..n).map(|i| C::new((lo + i as i64) as f64 * zeta, theta).exp()).collect();
        let psi = xi.iter().map(|&x| charexp::psi_with(params, &consts, x)).collect::<Result<Vec<_>>>()?;
        Ok(RayGrid { theta, orientation, xi, psi })
    };
    let [p0, p1] = angles.plus_rays();
    let [m0, m1] = angles.minus_rays();
    let plus = [make(p0.0, p0.1)?, make(p1.0, p1.1)?];
    let minus = [make(m0.0, m0.1)?, make(m1.0, m1.1)?];

    let bank = ToeplitzBank::new(n, zeta, [p0.0, p1.0], [m0.0, m1.0]);
    Ok(WhfGrids {
        params: *params,
        consts,
        regime,
        cone: *cone,
        angles,
        zeta,
        lo,
        plus,
        minus,
        target_plus,
        target_minus,
        spec,
        bank,
        cache: FactorCache::default(),
    })
}

impl WhfGrids {
    pub fn len(&self) -> usize {
        self.plus[0].xi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Node counts left and right of `y = 0` on each ray.
    pub fn node_counts(&self) -> (usize, usize) {
        let neg = (-self.lo).max(0) as usize;
        (neg, self.len() - neg - 1)
    }

    pub fn y(&self, i: usize) -> f64 {
        (self.lo + i as i64) as f64 * self.zeta
    }

    /// Per-`q` arrays, memoized.
    pub fn factors(&self, q: C) -> Result<Arc<FactorArrays>> {
        self.cache.get_or_insert(q, || FactorArrays::new(self, q))
    }

    pub fn clear_cache(&self) {
        self.cache.clear();
    }

    /// Correlation of source values on `L⁺` with the kernel towards the `L⁻` rays.
    pub fn correlate_plus_to_minus(&self, v: [&[C]; 2]) -> [Vec<C>; 2] {
        self.bank.apply(&self.bank.p2m, v)
    }

    pub fn correlate_minus_to_plus(&self, v: [&[C]; 2]) -> [Vec<C>; 2] {
        self.bank.apply(&self.bank.m2p, v)
    }

    /// `O(n²)` reference for [`Self::correlate_plus_to_minus`].
    pub fn correlate_direct(&self, src_angles: [f64; 2], tgt_angles: [f64; 2], v: [&[C]; 2]) -> [Vec<C>; 2] {
        let n = self.len();
        let mut out = [vec![C::new(0.0, 0.0); n], vec![C::new(0.0, 0.0); n]];
        for (t, o) in out.iter_mut().enumerate() {
            for (k, ok) in o.iter_mut().enumerate() {
                let mut acc = CompensatedSum::new();
                for s in 0..2 {
                    for (j, &vj) in v[s].iter().enumerate() {
                        acc.add(vj * kernel(src_angles[s] - tgt_angles[t], self.zeta, j as i64 - k as i64));
                    }
                }
                *ok = acc.value();
            }
        }
        out
    }
}

/// `1/(1 - e^{iΔ} e^{mζ})`.
pub fn kernel(delta: f64, zeta: f64, m: i64) -> C {
    if m < 0 {
        let z = C::new(m as f64 * zeta, delta).exp();
        1.0 / (1.0 - z)
    } else {
        let w = C::new(-(m as f64) * zeta, -delta).exp();
        -w / (1.0 - w)
    }
}

/// The kernel minus the unit step on `m < 0`; decays in both directions.
fn kernel_tilde(delta: f64, zeta: f64, m: i64) -> C {
    if m < 0 {
        let z = C::new(m as f64 * zeta, delta).exp();
        z / (1.0 - z)
    } else {
        kernel(delta, zeta, m)
    }
}

struct ToeplitzBank {
    n: usize,
    size: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    /// `[source ray][target ray]` kernel spectra.
    p2m: [[Vec<C>; 2]; 2],
    m2p: [[Vec<C>; 2]; 2],
}

impl ToeplitzBank {
    fn new(n: usize, zeta: f64, plus: [f64; 2], minus: [f64; 2]) -> Self {
        let size = (2 * n - 1).next_power_of_two();
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(size);
        let inv = planner.plan_fft_inverse(size);
        let spectrum = |delta: f64| -> Vec<C> {
            // b[m mod P] = K̃(-m) for |m| < n
            let mut b = vec![C::new(0.0, 0.0); size];
            for m in -(n as i64 - 1)..=(n as i64 - 1) {
                b[m.rem_euclid(size as i64) as usize] = kernel_tilde(delta, zeta, -m);
            }
            fwd.process(&mut b);
            b
        };
        let p2m = [0, 1].map(|s| [0, 1].map(|t| spectrum(plus[s] - minus[t])));
        let m2p = [0, 1].map(|s| [0, 1].map(|t| spectrum(minus[s] - plus[t])));
        ToeplitzBank { n, size, fwd, inv, p2m, m2p }
    }

    /// `out_t(k) = Σ_s Σ_j v_s(j) K_{s,t}(j-k)`.
    fn apply(&self, spectra: &[[Vec<C>; 2]; 2], v: [&[C]; 2]) -> [Vec<C>; 2] {
        let n = self.n;
        let mut prefix = vec![C::new(0.0, 0.0); n];
        let mut acc = CompensatedSum::new();
        for k in 0..n {
            prefix[k] = acc.value();
            acc.add(v[0][k] + v[1][k]);
        }
        let ffts: Vec<Vec<C>> = v
            .iter()
            .map(|src| {
                let mut a = vec![C::new(0.0, 0.0); self.size];
                a[..n].copy_from_slice(src);
                self.fwd.process(&mut a);
                a
            })
            .collect();
        let scale = 1.0 / self.size as f64;
        [0, 1].map(|t| {
            let mut y: Vec<C> = (0..self.size).map(|f| ffts[0][f] * spectra[0][t][f] + ffts[1][f] * spectra[1][t][f]).collect();
            self.inv.process(&mut y);
            (0..n).map(|k| y[k] * scale + prefix[k]).collect()
        })
    }
}

/// Memo of per-`q` arrays keyed by the bit pattern of `q`.
#[derive(Default)]
pub struct FactorCache {
    map: Mutex<HashMap<(u64, u64), Arc<FactorArrays>>>,
}

impl FactorCache {
    const CAPACITY: usize = 512;

    fn get_or_insert(&self, q: C, make: impl FnOnce() -> Result<FactorArrays>) -> Result<Arc<FactorArrays>> {
        let key = (q.re.to_bits(), q.im.to_bits());
        if let Some(v) = self.map.lock().expect("cache poisoned").get(&key) {
            return Ok(v.clone());
        }
        let v = Arc::new(make()?);
        let mut m = self.map.lock().expect("cache poisoned");
        if m.len() >= Self::CAPACITY {
            m.clear();
        }
        Ok(m.entry(key).or_insert(v).clone())
    }

    fn clear(&self) {
        self.map.lock().expect("cache poisoned").clear();
    }
}

/// `L(η) = Log(q+ψ(η)) - Log q` on the four rays, plus lazily computed factors.
pub struct FactorArrays {
    pub q: C,
    pub l_plus: [Vec<C>; 2],
    pub l_minus: [Vec<C>; 2],
    phi_plus_on_minus: OnceLock<Result<[Vec<C>; 2]>>,
    phi_minus_on_plus: OnceLock<Result<[Vec<C>; 2]>>,
    asym: OnceLock<Result<(f64, f64)>>,
}

fn log_ratio(q: C, log_q: C, psi: &[C], lo: i64) -> Result<Vec<C>> {
    let mut out = Vec::with_capacity(psi.len());
    let mut prev_im: Option<f64> = None;
    for (i, &p) in psi.iter().enumerate() {
        let z = q + p;
        if z.im == 0.0 && z.re <= 0.0 || !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::BranchCut { node: lo + i as i64, detail: format!("q + psi = {z}") });
        }
        let l = z.ln() - log_q;
        if let Some(pi) = prev_im {
            if (l.im - pi).abs() >= PI / 2.0 {
                return Err(Error::BranchCut {
                    node: lo + i as i64,
                    detail: format!("arg(q + psi) jumps from {pi} to {}", l.im),
                });
            }
        }
        prev_im = Some(l.im);
        out.push(l);
    }
    Ok(out)
}

impl FactorArrays {
    fn new(g: &WhfGrids, q: C) -> Result<Self> {
        if q.norm() == 0.0 || !q.re.is_finite() || !q.im.is_finite() {
            return Err(Error::Domain(format!("q = {q} is not admissible")));
        }
        let log_q = q.ln();
        let l = |r: &RayGrid| log_ratio(q, log_q, &r.psi, g.lo);
        Ok(FactorArrays {
            q,
            l_plus: [l(&g.plus[0])?, l(&g.plus[1])?],
            l_minus: [l(&g.minus[0])?, l(&g.minus[1])?],
            phi_plus_on_minus: OnceLock::new(),
            phi_minus_on_plus: OnceLock::new(),
            asym: OnceLock::new(),
        })
    }

    /// `φ⁺_q` on the `L⁻` nodes through `φ⁺ = q/((q+ψ)φ⁻)`, with `φ⁻` integrated over `L⁺`.
    pub fn phi_plus_on_minus(&self, g: &WhfGrids) -> Result<&[Vec<C>; 2]> {
        self.phi_plus_on_minus
            .get_or_init(|| {
                let z = g.zeta;
                let v0: Vec<C> = self.l_plus[0].iter().map(|&l| l * z).collect();
                let v1: Vec<C> = self.l_plus[1].iter().map(|&l| -l * z).collect();
                let s = g.correlate_plus_to_minus([&v0, &v1]);
                Ok([0, 1].map(|t| {
                    s[t].iter().zip(&self.l_minus[t]).map(|(&st, &lt)| (st / TWO_PI_I - lt).exp()).collect()
                }))
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    /// `φ⁻_q` on the `L⁺` nodes through `φ⁻ = q/((q+ψ)φ⁺)`.
    pub fn phi_minus_on_plus(&self, g: &WhfGrids) -> Result<&[Vec<C>; 2]> {
        self.phi_minus_on_plus
            .get_or_init(|| {
                let z = g.zeta;
                let v0: Vec<C> = self.l_minus[0].iter().map(|&l| l * z).collect();
                let v1: Vec<C> = self.l_minus[1].iter().map(|&l| -l * z).collect();
                let s = g.correlate_minus_to_plus([&v0, &v1]);
                Ok([0, 1].map(|t| {
                    s[t].iter().zip(&self.l_plus[t]).map(|(&st, &lt)| (-st / TWO_PI_I - lt).exp()).collect()
                }))
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    /// `(a⁺_q, a⁻_q)`.
    pub fn asym_constants(&self, g: &WhfGrids) -> Result<(f64, f64)> {
        self.asym
            .get_or_init(|| Ok((asym_from_arrays(g, self, Side::Plus)?, asym_from_arrays(g, self, Side::Minus)?)))
            .clone()
    }

    /// Modified `φ⁺` on the `L⁻` nodes.
    pub fn phi_plus_mod_on_minus(&self, g: &WhfGrids) -> Result<[Vec<C>; 2]> {
        let (a, _) = self.asym_constants(g)?;
        let phi = self.phi_plus_on_minus(g)?;
        Ok([0, 1].map(|t| {
            phi[t].iter().zip(&g.minus[t].xi).map(|(&f, &x)| f - a - (1.0 - a) / (1.0 + I * x)).collect()
        }))
    }

    pub fn phi_minus_mod_on_plus(&self, g: &WhfGrids) -> Result<[Vec<C>; 2]> {
        let (_, a) = self.asym_constants(g)?;
        let phi = self.phi_minus_on_plus(g)?;
        Ok([0, 1].map(|t| {
            phi[t].iter().zip(&g.plus[t].xi).map(|(&f, &x)| f - a - (1.0 - a) / (1.0 - I * x)).collect()
        }))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

fn check_grid_q(g: &WhfGrids, q: C) -> Result<()> {
    if q.im != 0.0 && !g.regime.sinh_bromwich_allowed {
        return Err(Error::Regime(format!(
            "complex q = {q} is not admissible in regime {:?}",
            g.regime.tag
        )));
    }
    if q.im == 0.0 && q.re <= 0.0 {
        return Err(Error::Domain(format!("q = {q} must lie off (-inf, 0]")));
    }
    Ok(())
}

fn above_minus(a: &RayAngles, xi: C) -> bool {
    let t = xi.arg();
    !(t >= -PI - a.omega_minus && t <= a.omega_minus)
}

fn below_plus(a: &RayAngles, xi: C) -> bool {
    let t = xi.arg();
    !(t >= a.omega_plus && t <= PI - a.omega_plus)
}

/// `φ⁺_q(ξ)` for `ξ` above `L⁻`, by direct summation.
pub fn phi_plus(g: &WhfGrids, q: C, xi: C) -> Result<C> {
    check_grid_q(g, q)?;
    if xi == C::new(0.0, 0.0) {
        return Ok(C::new(1.0, 0.0));
    }
    if !above_minus(&g.angles, xi) {
        return Err(Error::Contour(format!("xi = {xi} is not above the contour L-")));
    }
    let f = g.factors(q)?;
    let s = direct_sum(g, &g.minus, &f.l_minus, xi);
    Ok((s / TWO_PI_I).exp())
}

/// `φ⁻_q(ξ)` for `ξ` below `L⁺`, by direct summation.
pub fn phi_minus(g: &WhfGrids, q: C, xi: C) -> Result<C> {
    check_grid_q(g, q)?;
    if xi == C::new(0.0, 0.0) {
        return Ok(C::new(1.0, 0.0));
    }
    if !below_plus(&g.angles, xi) {
        return Err(Error::Contour(format!("xi = {xi} is not below the contour L+")));
    }
    let f = g.factors(q)?;
    let s = direct_sum(g, &g.plus, &f.l_plus, xi);
    Ok((-s / TWO_PI_I).exp())
}

/// `ζ Σ_rays ± Σ_j ξ L_j / (ξ - η_j)`.
fn direct_sum(g: &WhfGrids, rays: &[RayGrid; 2], l: &[Vec<C>; 2], xi: C) -> C {
    let mut acc = CompensatedSum::new();
    for (r, lr) in rays.iter().zip(l) {
        for (&eta, &lj) in r.xi.iter().zip(lr) {
            acc.add(r.orientation * lj / (1.0 - eta / xi));
        }
    }
    acc.value() * g.zeta
}

/// The other factor from the identity `φ⁺φ⁻ = q/(q+ψ)`.
pub fn phi_opposite_via_identity(params: &StableParams, q: C, xi: C, phi_known: C) -> Result<C> {
    let p = charexp::psi(params, xi)?;
    let den = (q + p) * phi_known;
    if !(den.norm() > 1e-300) {
        return Err(Error::Division(format!("(q + psi) * phi vanishes at xi = {xi}")));
    }
    Ok(q / den)
}

/// Real points `±10^{k/4}`, `|k| ≤ 12`, where the identity is checked. Points off the
/// axis closer to a contour than the planned strip width are not resolved by the grid.
pub fn validation_points() -> Vec<C> {
    (-12..=12)
        .flat_map(|k| {
            let r = 10f64.powf(k as f64 / 4.0);
            [C::new(r, 0.0), C::new(-r, 0.0)]
        })
        .collect()
}

/// `max |φ⁺_q φ⁻_q - q/(q+ψ)|` over `points`.
pub fn wh_identity_residual(g: &WhfGrids, q: C, points: &[C]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &xi in points {
        let lhs = phi_plus(g, q, xi)? * phi_minus(g, q, xi)?;
        let rhs = q / (q + charexp::psi(&g.params, xi)?);
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

/// `a±_q`, the limit of `φ±_q` at infinity.
pub fn asym_constant(g: &WhfGrids, q: C, side: Side) -> Result<f64> {
    check_grid_q(g, q)?;
    let f = g.factors(q)?;
    let (ap, am) = f.asym_constants(g)?;
    Ok(match side {
        Side::Plus => ap,
        Side::Minus => am,
    })
}

fn asym_from_arrays(g: &WhfGrids, f: &FactorArrays, side: Side) -> Result<f64> {
    let p = &g.params;
    let exponent = match side {
        Side::Plus => g.regime.alpha_plus,
        Side::Minus => g.regime.alpha_minus,
    };
    if exponent > 0.0 {
        return Ok(0.0);
    }
    if p.mu == 0.0 {
        // monotone process: the factor of the constant side is identically one
        return Ok(1.0);
    }
    let q = f.q;
    let (rays, sign) = match side {
        Side::Minus => (&g.plus, -1.0),
        Side::Plus => (&g.minus, 1.0),
    };
    let mut acc = CompensatedSum::new();
    for r in rays {
        for (&eta, &psi) in r.xi.iter().zip(&r.psi) {
            let d = (q + psi).ln() - (q - I * p.mu * eta).ln();
            acc.add(r.orientation * d);
        }
    }
    let v = (sign * acc.value() * g.zeta / TWO_PI_I).exp();
    if !(v.re.is_finite()) || v.im.abs() > 1e-6 * v.re.abs().max(1.0) && q.im == 0.0 {
        return Err(Error::Tolerance(format!("asymptotic constant {v} is not real")));
    }
    Ok(v.re)
}

/// `φ⁺_q(ξ) - a⁺ - (1-a⁺)/(1+iξ)` or `φ⁻_q(ξ) - a⁻ - (1-a⁻)/(1-iξ)`.
pub fn phi_mod(g: &WhfGrids, q: C, xi: C, side: Side) -> Result<C> {
    let a = asym_constant(g, q, side)?;
    Ok(match side {
        Side::Plus => phi_plus(g, q, xi)? - a - (1.0 - a) / (1.0 + I * xi),
        Side::Minus => phi_minus(g, q, xi)? - a - (1.0 - a) / (1.0 - I * xi),
    })
}
