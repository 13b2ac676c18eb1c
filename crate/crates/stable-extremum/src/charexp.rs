//! Characteristic exponent of a one-dimensional stable Lévy process.
//!
//! The process has Lévy density `c₊ x^{-α-1}` on the positive half-line and
//! `c₋ |x|^{-α-1}` on the negative one, plus a drift `μ`, so that
//! `E e^{iξX_t} = e^{-tψ(ξ)}` with `ψ(ξ) = -iμξ + ψ⁰(ξ)`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ALPHA_ONE_TOL: f64 = 1e-12;

/// Parameters `(α, c₊, c₋, μ)` of the Lévy density and drift.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StableParams {
    pub alpha: f64,
    pub c_plus: f64,
    pub c_minus: f64,
    pub mu: f64,
}

/// How a scale parameter is mapped to the jump intensities when the process
/// is specified by `(α, β, scale, μ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScaleConvention {
    /// `c₊ + c₋ = scale`.
    SumOne,
    /// `|C₊| = scale`.
    AbsCOne,
    /// `Re C₊ = scale^α`, i.e. `scale` is the σ of the usual
    /// `σ^α|ξ|^α(1 - iβ sign(ξ) tan(πα/2))` form.
    Sigma,
}

/// Constants derived from [`StableParams`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedConstants {
    pub c_plus: Complex64,
    pub c_minus: Complex64,
    /// `arg C₊`.
    pub phi0: f64,
    /// Scale of the index-one form, `(c₊+c₋)π/2`.
    pub sigma_z: f64,
    /// Skewness `(c₊-c₋)/(c₊+c₋)`.
    pub beta_z: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegimeTag {
    AlphaGt1,
    AlphaLt1ZeroDrift,
    AlphaLt1PosDrift,
    AlphaLt1NegDrift,
    Alpha1Symmetric,
    Alpha1Asymmetric,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Regime {
    pub tag: RegimeTag,
    /// Exponent in the bound `q/|q+ψ(ξ)| ≤ C(1+|ξ|)^{-ᾱ}`.
    pub alpha_bar: f64,
    /// `φ⁺_q(ξ) = O(|ξ|^{-α₊})` at infinity when `α₊ > 0`.
    pub alpha_plus: f64,
    /// `φ⁻_q(ξ) = O(|ξ|^{-α₋})` at infinity when `α₋ > 0`.
    pub alpha_minus: f64,
    pub sinh_bromwich_allowed: bool,
}

impl Regime {
    pub fn supports_whf(&self) -> bool {
        self.tag != RegimeTag::Alpha1Asymmetric
    }
}

/// Admissible deformation angles.
///
/// For `arg ξ ∈ [γ₋, γ₊]` (and the mirrored sector around the negative half-axis)
/// `|arg ψ⁰(ξ)| ≤ π/2 - γ₀`, so `q + ψ(ξ)` stays off `(-∞, 0]` for
/// `q ∈ σ + C_{π/2+γ₀}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeSpec {
    pub gamma_minus: f64,
    pub gamma_plus: f64,
    pub sigma: f64,
    pub gamma0: f64,
}

impl StableParams {
    pub fn new(alpha: f64, c_plus: f64, c_minus: f64, mu: f64) -> Result<Self> {
        let p = StableParams { alpha, c_plus, c_minus, mu };
        p.validate()?;
        Ok(p)
    }

    /// Build parameters from skewness `β ∈ [-1, 1]` and a scale under `conv`.
    pub fn from_beta(alpha: f64, beta: f64, scale: f64, mu: f64, conv: ScaleConvention) -> Result<Self> {
        if !(-1.0..=1.0).contains(&beta) {
            return Err(Error::InvalidParams(format!("beta = {beta} outside [-1, 1]")));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::InvalidParams(format!("scale = {scale} must be positive")));
        }
        let unit = StableParams::new(alpha, (1.0 + beta) / 2.0, (1.0 - beta) / 2.0, mu)?;
        let k = match conv {
            ScaleConvention::SumOne => scale,
            ScaleConvention::AbsCOne => {
                let c = unit.constants();
                if unit.is_alpha_one() {
                    scale / c.sigma_z
                } else {
                    scale / c.c_plus.norm()
                }
            }
            ScaleConvention::Sigma => {
                let c = unit.constants();
                if unit.is_alpha_one() {
                    scale / c.sigma_z
                } else {
                    scale.powf(alpha) / c.c_plus.re
                }
            }
        };
        StableParams::new(alpha, unit.c_plus * k, unit.c_minus * k, mu)
    }

    pub fn validate(&self) -> Result<()> {
        let StableParams { alpha, c_plus, c_minus, mu } = *self;
        if !(alpha > 0.0 && alpha < 2.0) {
            return Err(Error::InvalidParams(format!("alpha = {alpha} outside (0, 2)")));
        }
        if !(c_plus >= 0.0 && c_minus >= 0.0 && c_plus + c_minus > 0.0) {
            return Err(Error::InvalidParams(format!(
                "need c+ >= 0, c- >= 0, c+ + c- > 0 (got {c_plus}, {c_minus})"
            )));
        }
        if !mu.is_finite() || !c_plus.is_finite() || !c_minus.is_finite() {
            return Err(Error::InvalidParams("non-finite parameter".into()));
        }
        Ok(())
    }

    pub fn is_alpha_one(&self) -> bool {
        (self.alpha - 1.0).abs() < ALPHA_ONE_TOL
    }

    pub fn is_symmetric(&self) -> bool {
        (self.c_plus - self.c_minus).abs() <= 1e-14 * (self.c_plus + self.c_minus)
    }

    pub fn constants(&self) -> DerivedConstants {
        let s = self.c_plus + self.c_minus;
        let sigma_z = s * PI / 2.0;
        let beta_z = (self.c_plus - self.c_minus) / s;
        let c_plus = if self.is_alpha_one() {
            // symmetric case: C₊ = C₋ = cπ; the asymmetric case has no power form
            Complex64::new(sigma_z, 0.0)
        } else {
            let g = gamma_neg(self.alpha);
            let e = Complex64::from_polar(1.0, PI * self.alpha / 2.0);
            -self.c_plus * g * e.conj() - self.c_minus * g * e
        };
        DerivedConstants { c_plus, c_minus: c_plus.conj(), phi0: c_plus.arg(), sigma_z, beta_z }
    }
}

/// `Γ(-α)` through the reflection formula `Γ(-α) = -π / (sin(πα) Γ(1+α))`.
pub fn gamma_neg(alpha: f64) -> f64 {
    -PI / ((PI * alpha).sin() * libm::tgamma(1.0 + alpha))
}

/// `ψ⁰(ξ)`. Points with `Re ξ ≥ 0` use `C₊ ξ^α`, points with `Re ξ < 0` use `C₋ (-ξ)^α`,
/// both with the principal logarithm.
pub fn psi0(p: &StableParams, xi: Complex64) -> Result<Complex64> {
    let c = p.constants();
    psi0_with(p, &c, xi)
}

/// `ψ(ξ) = -iμξ + ψ⁰(ξ)`.
pub fn psi(p: &StableParams, xi: Complex64) -> Result<Complex64> {
    let c = p.constants();
    psi_with(p, &c, xi)
}

/// Same as [`psi0`] with precomputed constants.
pub fn psi0_with(p: &StableParams, c: &DerivedConstants, xi: Complex64) -> Result<Complex64> {
    if !(xi.re.is_finite() && xi.im.is_finite()) {
        return Err(Error::Domain(format!("non-finite argument {xi}")));
    }
    if xi == Complex64::new(0.0, 0.0) {
        return Ok(xi);
    }
    let asymmetric_one = p.is_alpha_one() && !p.is_symmetric();
    if asymmetric_one {
        if xi.im != 0.0 {
            return Err(Error::Regime(
                "asymmetric index-one exponent is only available on the real line".into(),
            ));
        }
        let x = xi.re;
        let v = c.sigma_z * x.abs() * Complex64::new(1.0, 2.0 * c.beta_z / PI * x.signum() * x.abs().ln());
        return Ok(v);
    }
    if xi.re >= 0.0 {
        Ok(c.c_plus * (p.alpha * xi.ln()).exp())
    } else {
        Ok(c.c_minus * (p.alpha * (-xi).ln()).exp())
    }
}

pub fn psi_with(p: &StableParams, c: &DerivedConstants, xi: Complex64) -> Result<Complex64> {
    Ok(Complex64::new(0.0, -p.mu) * xi + psi0_with(p, c, xi)?)
}

pub fn classify(p: &StableParams) -> Regime {
    let c = p.constants();
    let a = p.alpha;
    if p.is_alpha_one() {
        if p.is_symmetric() {
            let phi = (-p.mu).atan2(c.sigma_z);
            return Regime {
                tag: RegimeTag::Alpha1Symmetric,
                alpha_bar: 1.0,
                alpha_plus: 0.5 - phi / PI,
                alpha_minus: 0.5 + phi / PI,
                sinh_bromwich_allowed: true,
            };
        }
        return Regime {
            tag: RegimeTag::Alpha1Asymmetric,
            alpha_bar: 1.0,
            alpha_plus: f64::NAN,
            alpha_minus: f64::NAN,
            sinh_bromwich_allowed: false,
        };
    }
    // Exponents of the factors at infinity. The sign convention is fixed by the
    // spectrally one-sided cases, where one factor is exactly β/(β∓iξ).
    let two_sided = (a / 2.0 - c.phi0 / PI, a / 2.0 + c.phi0 / PI);
    if a > 1.0 {
        return Regime {
            tag: RegimeTag::AlphaGt1,
            alpha_bar: a,
            alpha_plus: two_sided.0,
            alpha_minus: two_sided.1,
            sinh_bromwich_allowed: true,
        };
    }
    if p.mu == 0.0 {
        Regime {
            tag: RegimeTag::AlphaLt1ZeroDrift,
            alpha_bar: a,
            alpha_plus: two_sided.0,
            alpha_minus: two_sided.1,
            sinh_bromwich_allowed: true,
        }
    } else if p.mu > 0.0 {
        Regime {
            tag: RegimeTag::AlphaLt1PosDrift,
            alpha_bar: 1.0,
            alpha_plus: 1.0,
            alpha_minus: 0.0,
            sinh_bromwich_allowed: false,
        }
    } else {
        Regime {
            tag: RegimeTag::AlphaLt1NegDrift,
            alpha_bar: 1.0,
            alpha_plus: 0.0,
            alpha_minus: 1.0,
            sinh_bromwich_allowed: false,
        }
    }
}

/// Argument of the leading coefficient on the right ray: `arg ψ(e^{iθ}r) ≈ φ + αθ`.
fn leading_phase(p: &StableParams, for_complex_q: bool) -> f64 {
    let c = p.constants();
    if p.is_alpha_one() {
        // ψ(ξ) = (cπ - iμ)ξ: the drift rotates the whole exponent
        if for_complex_q {
            (-p.mu).atan2(c.sigma_z)
        } else {
            0.0
        }
    } else {
        c.phi0
    }
}

fn margin(g: f64) -> f64 {
    0.1_f64.min(g.abs() / 4.0)
}

/// Sectors around the real axis on which ψ can be continued with controlled argument.
///
/// For real `q` the cone is the largest one with `Re ψ⁰ > 0`, shaved by a margin.
/// For complex `q` the angle budget `π/2 - |φ₀|` is split between the cone and the
/// Bromwich half-angle `γ₀`, so that both have comparable width.
pub fn admissible_cone(p: &StableParams, for_complex_q: bool) -> Result<ConeSpec> {
    p.validate()?;
    let reg = classify(p);
    if reg.tag == RegimeTag::Alpha1Asymmetric {
        return Err(Error::Regime(
            "asymmetric index-one processes admit no two-sided cone for the factor representations".into(),
        ));
    }
    if for_complex_q && !reg.sinh_bromwich_allowed {
        return Err(Error::Regime(format!(
            "no cone of complex q with q + psi(xi) off (-inf, 0] exists in regime {:?} (index < 1 with drift)",
            reg.tag
        )));
    }
    let a = p.alpha;
    let phi = leading_phase(p, for_complex_q);
    let budget = if for_complex_q {
        ((FRAC_PI_2 - phi.abs()) / (1.0 + a)).min(FRAC_PI_2 - 0.2)
    } else {
        0.0
    };
    let hi_raw = ((FRAC_PI_2 - budget - phi) / a).min(FRAC_PI_2);
    let lo_raw = ((-(FRAC_PI_2 - budget) - phi) / a).max(-FRAC_PI_2);
    let gamma_plus = hi_raw - margin(hi_raw);
    let gamma_minus = lo_raw + margin(lo_raw);
    let g0_raw = FRAC_PI_2 - (phi + a * gamma_plus).abs().max((phi + a * gamma_minus).abs());
    let gamma0 = if for_complex_q { g0_raw - margin(g0_raw) } else { g0_raw };
    Ok(ConeSpec { gamma_minus, gamma_plus, sigma: drift_abscissa(p), gamma0 })
}

/// Size of `|ψ|` on the region where the drift dominates `ψ⁰` (index above one).
fn drift_abscissa(p: &StableParams) -> f64 {
    let c = p.constants();
    if p.alpha > 1.0 && p.mu != 0.0 {
        let r = (p.mu.abs() / c.c_plus.norm()).powf(1.0 / (p.alpha - 1.0));
        (2.0 * p.mu.abs() * r).max(f64::EPSILON)
    } else {
        f64::EPSILON
    }
}

/// Largest `|arg ψ⁰|` over rays of the cone (both sectors).
pub fn max_arg_psi0_on_cone(p: &StableParams, cone: &ConeSpec) -> Result<f64> {
    let c = p.constants();
    let mut worst: f64 = 0.0;
    for k in 0..=64 {
        let th = cone.gamma_minus + (cone.gamma_plus - cone.gamma_minus) * k as f64 / 64.0;
        for side in [Complex64::from_polar(1.0, th), -Complex64::from_polar(1.0, -th)] {
            let v = psi0_with(p, &c, side)?;
            worst = worst.max(v.arg().abs());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reflection_matches_direct_gamma() {
        for a in [0.2, 0.5, 0.9, 1.2, 1.5, 1.9] {
            let direct = libm::tgamma(-a);
            assert!((gamma_neg(a) - direct).abs() < 1e-12 * direct.abs(), "{a}");
        }
    }

    #[test]
    fn left_branch_is_conjugate_mirror() {
        let p = StableParams::new(1.3, 0.7, 0.2, 0.0).unwrap();
        let xi = Complex64::new(0.8, 0.3);
        let l = psi0(&p, -xi.conj()).unwrap();
        let r = psi0(&p, xi).unwrap();
        assert!((l - r.conj()).norm() < 1e-14);
    }
}
