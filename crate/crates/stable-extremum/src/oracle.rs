//! Independent checks: Monte-Carlo simulation of `(X_T, X̄_T)`, closed forms for
//! special cases and adaptive quadrature.
//!
//! Nothing here is used by the evaluators; tests and the self-test compare
//! against it.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;

use crate::charexp::{self, StableParams};
use crate::error::{Error, Result};

type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub n_paths: usize,
    pub n_steps: usize,
    pub seed: u64,
}

impl McConfig {
    pub fn new(n_paths: usize, n_steps: usize, seed: u64) -> Result<Self> {
        if n_paths == 0 || n_steps == 0 {
            return Err(Error::InvalidParams(format!(
                "Monte-Carlo needs at least one path and one step (got {n_paths}, {n_steps})"
            )));
        }
        Ok(McConfig { n_paths, n_steps, seed })
    }
}

/// Generator of path `i`: a separate ChaCha stream of the common seed, so the
/// draws do not depend on how paths are scheduled.
pub fn path_rng(seed: u64, path: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path);
    rng
}

/// One draw of `X_t` by the Chambers–Mallows–Stuck method.
///
/// The jump intensities are mapped to the usual `(σ, β)` form through
/// `C₊ = σ^α (1 - iβ tan(πα/2))` for `α ≠ 1` and `σ_z, β_z` for `α = 1`.
pub fn sample_stable<R: Rng + ?Sized>(p: &StableParams, t: f64, rng: &mut R) -> f64 {
    let a = p.alpha;
    let k = p.constants();
    let v = PI * (rng.random::<f64>() - 0.5);
    let w: f64 = Exp1.sample(rng);
    if p.is_alpha_one() {
        let s = k.sigma_z * t;
        let b = k.beta_z;
        let h = FRAC_PI_2 + b * v;
        let x = (h * v.tan() - b * (FRAC_PI_2 * w * v.cos() / h).ln()) / FRAC_PI_2;
        return s * x + b * s * s.ln() / FRAC_PI_2 + p.mu * t;
    }
    let tan = (PI * a / 2.0).tan();
    let beta = -k.c_plus.im / (k.c_plus.re * tan);
    let sigma = (t * k.c_plus.re).powf(1.0 / a);
    let bt = beta * tan;
    let b = bt.atan() / a;
    let s = (1.0 + bt * bt).powf(1.0 / (2.0 * a));
    let x = s * (a * (v + b)).sin() / v.cos().powf(1.0 / a) * ((v - a * (v + b)).cos() / w).powf((1.0 - a) / a);
    sigma * x + p.mu * t
}

/// Mean and standard error of a Monte-Carlo average.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub se: f64,
}

impl Estimate {
    fn from_values(v: impl Iterator<Item = f64>) -> Self {
        let (mut n, mut m, mut s2) = (0.0f64, 0.0f64, 0.0f64);
        // Welford
        for x in v {
            n += 1.0;
            let d = x - m;
            m += d / n;
            s2 += d * (x - m);
        }
        let var = if n > 1.0 { s2 / (n - 1.0) } else { 0.0 };
        Estimate { mean: m, se: (var / n).sqrt() }
    }

    /// `|mean - value| ≤ k·se + slack`.
    pub fn brackets(&self, value: f64, k: f64, slack: f64) -> bool {
        (self.mean - value).abs() <= k * self.se + slack
    }
}

/// Terminal values and running suprema of simulated paths started at zero.
///
/// The supremum is taken over the time grid, so it is biased low by an amount
/// that shrinks like a power of the step; compare two step counts to size it.
#[derive(Debug, Clone, PartialEq)]
pub struct McSample {
    pub x: Vec<f64>,
    pub sup: Vec<f64>,
}

impl McSample {
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn estimate<F: Fn(f64, f64) -> f64>(&self, f: F) -> Estimate {
        Estimate::from_values(self.x.iter().zip(&self.sup).map(|(&x, &s)| f(x, s)))
    }

    /// `P[X_T ≤ a]`.
    pub fn cpdf_x(&self, a: f64) -> Estimate {
        self.estimate(|x, _| (x <= a) as u8 as f64)
    }

    /// `P[X̄_T ≤ a]`.
    pub fn cpdf_sup(&self, a: f64) -> Estimate {
        self.estimate(|_, s| (s <= a) as u8 as f64)
    }

    /// `P[x₁ + X_T ≤ a₁, max(x₂, x₁ + X̄_T) ≤ a₂]`.
    pub fn joint(&self, x1: f64, x2: f64, a1: f64, a2: f64) -> Estimate {
        self.estimate(|x, s| ((x1 + x <= a1) && (x2.max(x1 + s) <= a2)) as u8 as f64)
    }

    /// `E[(β(x₁ + X_T) - M)₊ e^{-λM}]`, `M = max(x₂, x₁ + X̄_T)`.
    pub fn exchange(&self, x1: f64, x2: f64, beta: f64, lambda: f64) -> Estimate {
        self.estimate(|x, s| {
            let m = x2.max(x1 + s);
            (beta * (x1 + x) - m).max(0.0) * (-lambda * m).exp()
        })
    }
}

/// Random-walk approximation of `(X_T, X̄_T)` with `n_steps` increments per path.
pub fn mc_joint_sup(p: &StableParams, t: f64, cfg: &McConfig) -> Result<McSample> {
    p.validate()?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidParams(format!("horizon T = {t} must be positive")));
    }
    let dt = t / cfg.n_steps as f64;
    let paths: Vec<(f64, f64)> = (0..cfg.n_paths as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = path_rng(cfg.seed, i);
            let (mut x, mut s) = (0.0f64, 0.0f64);
            for _ in 0..cfg.n_steps {
                x += sample_stable(p, dt, &mut rng);
                s = s.max(x);
            }
            (x, s)
        })
        .collect();
    let (x, sup) = paths.into_iter().unzip();
    Ok(McSample { x, sup })
}

/// The same paths monitored at `n_steps` and at `4·n_steps` dates.
#[derive(Debug, Clone, PartialEq)]
pub struct RefinedSample {
    pub coarse: McSample,
    pub fine: McSample,
}

impl RefinedSample {
    /// Fine-grid estimate of `f` and the coarse-to-fine shift, which bounds the
    /// bias left on the fine grid while the bias decays at least like `n^{-1/2}`.
    pub fn bracket<F: Fn(&McSample) -> Estimate>(&self, f: F) -> (Estimate, f64) {
        let e = f(&self.fine);
        (e, (e.mean - f(&self.coarse).mean).abs())
    }

    /// `(|estimate - value| - envelope)₊ / se`.
    pub fn z_score<F: Fn(&McSample) -> Estimate>(&self, value: f64, f: F) -> f64 {
        let (e, env) = self.bracket(f);
        ((e.mean - value).abs() - env).max(0.0) / e.se.max(f64::MIN_POSITIVE)
    }
}

/// [`mc_joint_sup`] at `4·n_steps`, also reporting the supremum over every fourth date.
pub fn mc_joint_sup_refined(p: &StableParams, t: f64, cfg: &McConfig) -> Result<RefinedSample> {
    p.validate()?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidParams(format!("horizon T = {t} must be positive")));
    }
    let n = 4 * cfg.n_steps;
    let dt = t / n as f64;
    let paths: Vec<(f64, f64, f64)> = (0..cfg.n_paths as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = path_rng(cfg.seed, i);
            let (mut x, mut s, mut sc) = (0.0f64, 0.0f64, 0.0f64);
            for k in 1..=n {
                x += sample_stable(p, dt, &mut rng);
                s = s.max(x);
                if k % 4 == 0 {
                    sc = sc.max(x);
                }
            }
            (x, s, sc)
        })
        .collect();
    let x: Vec<f64> = paths.iter().map(|p| p.0).collect();
    Ok(RefinedSample {
        coarse: McSample { x: x.clone(), sup: paths.iter().map(|p| p.2).collect() },
        fine: McSample { x, sup: paths.iter().map(|p| p.1).collect() },
    })
}

/// Samples of `(X_τ - X̄_τ, X_τ)` with `X_τ` the running infimum, at an
/// independent exponential time `τ` of rate `q`.
pub fn mc_exponential_time(p: &StableParams, q: f64, cfg: &McConfig) -> Result<(Vec<f64>, Vec<f64>)> {
    p.validate()?;
    if !(q > 0.0) {
        return Err(Error::InvalidParams(format!("rate q = {q} must be positive")));
    }
    let pairs: Vec<(f64, f64)> = (0..cfg.n_paths as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = path_rng(cfg.seed, i);
            let e: f64 = Exp1.sample(&mut rng);
            let dt = e / q / cfg.n_steps as f64;
            let (mut x, mut hi, mut lo) = (0.0f64, 0.0f64, 0.0f64);
            for _ in 0..cfg.n_steps {
                x += sample_stable(p, dt, &mut rng);
                hi = hi.max(x);
                lo = lo.min(x);
            }
            (x - hi, lo)
        })
        .collect();
    Ok(pairs.into_iter().unzip())
}

/// Two-sample Kolmogorov–Smirnov statistic.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (n, m) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let v = a[i].min(b[j]);
        while i < a.len() && a[i] <= v {
            i += 1;
        }
        while j < b.len() && b[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    d
}

/// Asymptotic critical value of the two-sample statistic at level 1%.
pub fn ks_critical_1pct(n: usize, m: usize) -> f64 {
    let (n, m) = (n as f64, m as f64);
    1.628 * ((n + m) / (n * m)).sqrt()
}

/// `P[X_T ≤ y]` for `ψ(ξ) = cπ|ξ| - iμξ`: a Cauchy law with location `μT`, scale `cπT`.
pub fn cauchy_cdf(c: f64, mu: f64, t: f64, y: f64) -> f64 {
    0.5 + ((y - mu * t) / (c * PI * t)).atan() / PI
}

/// Spectrally one-sided process of index in (1, 2). With no positive jumps the
/// supremum at an exponential time is exponential with rate `β(q)`, the root of
/// `q = -ψ(-iβ)`; with no negative jumps the same holds for the infimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneSided {
    pub params: StableParams,
    /// `+1` when the supremum is exponential, `-1` for the infimum.
    pub side: f64,
}

impl OneSided {
    pub fn new(params: StableParams) -> Result<Self> {
        params.validate()?;
        if !(params.alpha > 1.0 && params.alpha < 2.0) {
            return Err(Error::Precondition(format!("index {} must lie in (1, 2)", params.alpha)));
        }
        let side = if params.c_plus == 0.0 {
            1.0
        } else if params.c_minus == 0.0 {
            -1.0
        } else {
            return Err(Error::Precondition("jumps must be one-sided".into()));
        };
        Ok(OneSided { params, side })
    }

    /// Laplace exponent `κ(β) = -ψ(-i·side·β)`.
    pub fn kappa(&self, beta: C) -> Result<C> {
        Ok(-charexp::psi(&self.params, C::new(0.0, -self.side) * beta)?)
    }

    fn kappa_prime(&self, beta: C) -> C {
        let p = &self.params;
        let k = p.c_plus.max(p.c_minus) * charexp::gamma_neg(p.alpha);
        self.side * p.mu + k * p.alpha * beta.powf(p.alpha - 1.0)
    }

    /// `β(q)` for real `q > 0` by bisection on the increasing branch, polished by Newton.
    pub fn beta_root_real(&self, q: f64) -> Result<f64> {
        if !(q > 0.0) {
            return Err(Error::InvalidParams(format!("q = {q} must be positive")));
        }
        let f = |b: f64| self.kappa(C::new(b, 0.0)).map(|v| v.re - q);
        // κ is convex with κ(0) = 0; the root lies right of its minimum
        let p = &self.params;
        let k = p.c_plus.max(p.c_minus) * charexp::gamma_neg(p.alpha);
        let bmin = if self.side * p.mu < 0.0 { (-self.side * p.mu / (k * p.alpha)).powf(1.0 / (p.alpha - 1.0)) } else { 0.0 };
        let mut lo = bmin;
        let mut hi = bmin.max(1.0);
        let mut n = 0;
        while f(hi)? < 0.0 {
            hi *= 2.0;
            n += 1;
            if n > 200 {
                return Err(Error::Domain(format!("no bracket for the root at q = {q}")));
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid)? < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-15 * hi {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// `β(q)` for complex `q` by Newton's method, continued from the real root at `|q|`.
    pub fn beta_root(&self, q: C) -> Result<C> {
        if q.im == 0.0 {
            return Ok(C::new(self.beta_root_real(q.re)?, 0.0));
        }
        let r = q.norm();
        let mut b = C::new(self.beta_root_real(r)?, 0.0);
        // walk the argument of q in small steps
        let steps = 32;
        for s in 1..=steps {
            let qs = C::from_polar(r, q.arg() * s as f64 / steps as f64);
            for _ in 0..50 {
                let dv = (self.kappa(b)? - qs) / self.kappa_prime(b);
                b -= dv;
                if dv.norm() <= 1e-15 * b.norm() {
                    break;
                }
            }
        }
        if (self.kappa(b)? - q).norm() > 1e-10 * q.norm().max(1.0) {
            return Err(Error::Domain(format!("root continuation failed at q = {q}")));
        }
        Ok(b)
    }

    /// The exponential factor: `β/(β - iξ)` for the supremum, `β/(β + iξ)` for the infimum.
    pub fn phi(&self, q: C, xi: C) -> Result<C> {
        let b = self.beta_root(q)?;
        Ok(b / (b - C::new(0.0, self.side) * xi))
    }

    /// `P[X̄_{T_q} > d] = e^{-β(q)d}` (supremum side only).
    pub fn exceedance(&self, q: C, d: f64) -> Result<C> {
        if self.side < 0.0 {
            return Err(Error::Precondition("the supremum is exponential only without positive jumps".into()));
        }
        Ok((-self.beta_root(q)? * d).exp())
    }
}

/// Alias matching the operation name: the one-sided closed form for `params`.
pub fn spectrally_one_sided_sup(params: &StableParams) -> Result<OneSided> {
    OneSided::new(*params)
}

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<F: Fn(f64) -> C>(f: &F, a: f64, b: f64) -> (C, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for i in 0..7 {
        let s = f(c - h * XGK[i]) + f(c + h * XGK[i]);
        k += s * WGK[i];
        if i % 2 == 1 {
            g += s * WG[i / 2];
        }
    }
    (k * h, ((k - g) * h).norm())
}

/// Adaptive Gauss–Kronrod (7-15) integration of a complex function on `[a, b]`.
pub fn adaptive_gk<F: Fn(f64) -> C>(f: F, a: f64, b: f64, tol: f64) -> Result<C> {
    let mut total = C::new(0.0, 0.0);
    let mut stack = vec![(a, b, 0u32)];
    let width = (b - a).abs().max(f64::MIN_POSITIVE);
    while let Some((lo, hi, depth)) = stack.pop() {
        let (v, err) = gk15(&f, lo, hi);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::Domain(format!("integrand not finite on [{lo}, {hi}]")));
        }
        if err <= tol * (hi - lo).abs() / width || depth >= 50 {
            total += v;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, depth + 1));
            stack.push((mid, hi, depth + 1));
        }
    }
    Ok(total)
}

/// `∫_ℝ f` through `y = s/(1 - s²)`, `s ∈ (-1, 1)`.
pub fn adaptive_gk_line<F: Fn(f64) -> C>(f: F, tol: f64) -> Result<C> {
    adaptive_gk(
        |s| {
            let d = 1.0 - s * s;
            if d <= 0.0 {
                return C::new(0.0, 0.0);
            }
            let v = f(s / d) * ((1.0 + s * s) / (d * d));
            if v.re.is_finite() && v.im.is_finite() {
                v
            } else {
                C::new(0.0, 0.0)
            }
        },
        -1.0,
        1.0,
        tol,
    )
}
