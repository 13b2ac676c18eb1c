//! Probabilities and expectations of `X_T` and of its running supremum.

pub mod cpdf_x;
pub mod exchange;
pub mod general;
pub mod joint;
pub mod supremum;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::charexp::{self, ConeSpec, Regime, StableParams};
use crate::error::{Error, Result};
use crate::laplace::{self, BromwichConfig, GwrConfig};
use crate::whf::{self, GridSpec, RayAngles, WhfGrids};

pub use cpdf_x::{cpdf_x, cpdf_x_many, cpdf_x_node_counts};
pub use exchange::{exchange_diag, exchange_expectation, exchange_kernel, exchange_node_counts, exchange_payoff};
pub use general::{general_expectation, PayoffTerm, PayoffTransform};
pub use joint::{joint_cpdf, joint_cpdf_many, joint_node_counts, joint_v1_many, joint_v1_transform};
pub use supremum::{cpdf_sup, cpdf_sup_many, cpdf_sup_transform, cpdf_sup_variant, sup_node_counts};

type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "sinh")]
    SinhBromwich,
    #[serde(rename = "gwr")]
    Gwr,
    #[serde(rename = "fourier")]
    DirectFourier,
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sinh" => Ok(Method::SinhBromwich),
            "gwr" => Ok(Method::Gwr),
            "fourier" => Ok(Method::DirectFourier),
            _ => Err(Error::Config(format!("unknown method '{s}' (expected sinh, gwr or fourier)"))),
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::SinhBromwich => "sinh",
            Method::Gwr => "gwr",
            Method::DirectFourier => "fourier",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalRequest {
    pub params: StableParams,
    pub t: f64,
    pub method: Method,
    pub eps: f64,
}

impl EvalRequest {
    pub fn new(params: StableParams, t: f64, method: Method, eps: f64) -> Result<Self> {
        params.validate()?;
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidParams(format!("horizon T = {t} must be positive")));
        }
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::InvalidParams(format!("eps = {eps} must lie in (0, 1)")));
        }
        let r = EvalRequest { params, t, method, eps };
        r.check_method()?;
        Ok(r)
    }

    pub fn regime(&self) -> Regime {
        charexp::classify(&self.params)
    }

    pub fn check_method(&self) -> Result<()> {
        let reg = self.regime();
        if !reg.supports_whf() && self.method != Method::DirectFourier {
            return Err(Error::Regime(
                "asymmetric index-one processes are supported by the direct Fourier cpdf of X_T only".into(),
            ));
        }
        if self.method == Method::SinhBromwich && !reg.sinh_bromwich_allowed {
            return Err(Error::Regime(format!(
                "sinh-deformed Bromwich contour is not admissible in regime {:?}: for index < 1 with nonzero drift no cone of complex q keeps q + psi off (-inf, 0]; use gwr",
                reg.tag
            )));
        }
        Ok(())
    }

    /// Same request with another backend.
    pub fn with_method(&self, method: Method) -> Result<Self> {
        EvalRequest::new(self.params, self.t, method, self.eps)
    }
}

/// Laplace inversion backend chosen for a request.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Inverter {
    Gwr(GwrConfig),
    Sinh(BromwichConfig),
}

impl Inverter {
    pub fn for_request(req: &EvalRequest) -> Result<(Self, ConeSpec)> {
        match req.method {
            Method::SinhBromwich => {
                let cone = charexp::admissible_cone(&req.params, true)?;
                let cfg = laplace::choose_contour(&req.params, req.t, &cone, req.eps * INVERSION_SHARE)?;
                Ok((Inverter::Sinh(cfg), cone))
            }
            Method::Gwr => Ok((Inverter::Gwr(GwrConfig::for_horizon(req.t)), charexp::admissible_cone(&req.params, false)?)),
            Method::DirectFourier => Err(Error::Regime(
                "the direct Fourier method applies to the distribution of X_T only; use sinh or gwr".into(),
            )),
        }
    }

    pub fn q_min(&self, t: f64) -> f64 {
        match self {
            Inverter::Gwr(g) => g.nodes(t)[0],
            Inverter::Sinh(b) => b.q_min(),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Inverter::Gwr(g) => g.two_m,
            Inverter::Sinh(b) => b.plan.n_plus + 1,
        }
    }

    /// Like [`Inverter::invert_vec`] with all nodes handed to `f` at once.
    pub fn invert_batch<F>(&self, f: F, t: f64) -> Result<Vec<f64>>
    where
        F: FnOnce(&[C]) -> Result<Vec<Vec<C>>>,
    {
        match self {
            Inverter::Gwr(g) => laplace::gwr_invert_batch(
                |qs| {
                    let qc: Vec<C> = qs.iter().map(|&q| C::new(q, 0.0)).collect();
                    Ok(f(&qc)?.into_iter().map(|v| v.into_iter().map(|x| x.re).collect()).collect())
                },
                t,
                g,
            ),
            Inverter::Sinh(b) => laplace::sinh_bromwich_invert_batch(f, t, b),
        }
    }

    /// Inverts a vector-valued transform; GWR sees only real `q`.
    pub fn invert_vec<F>(&self, f: F, t: f64) -> Result<Vec<f64>>
    where
        F: Fn(C) -> Result<Vec<C>> + Sync,
    {
        match self {
            Inverter::Gwr(g) => laplace::gwr_invert_vec(
                |q| Ok(f(C::new(q, 0.0))?.into_iter().map(|v| v.re).collect()),
                t,
                g,
            ),
            Inverter::Sinh(b) => laplace::sinh_bromwich_invert_vec(f, t, b),
        }
    }
}

/// Share of the tolerance given to the Laplace inversion and to the factor grids.
const INVERSION_SHARE: f64 = 0.25;
const GRID_SHARE: f64 = 0.05;

/// Node counts reported next to the values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct NodeCounts {
    /// Laplace nodes.
    pub n_l: usize,
    /// Nodes per ray right and left of `|ξ| = 1`.
    pub n_pos: usize,
    pub n_neg: usize,
}

/// Perturbation of the default ray angles, strip usage and grid tolerance.
///
/// Two results computed on different variants disagree only through discretization
/// error, which makes their difference an error indicator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridVariant {
    pub angle_scale: f64,
    pub strip_scale: f64,
    pub eps_scale: f64,
}

impl Default for GridVariant {
    fn default() -> Self {
        GridVariant { angle_scale: 1.0, strip_scale: 1.0, eps_scale: 1.0 }
    }
}

impl GridVariant {
    /// Narrower rays, a smaller step and a tighter grid tolerance.
    pub fn alternate() -> Self {
        GridVariant { angle_scale: 0.6, strip_scale: 0.7, eps_scale: 0.1 }
    }
}

/// Grids and inversion backend for one request, reusable across points.
pub struct Prepared {
    pub req: EvalRequest,
    pub grids: WhfGrids,
    pub inverter: Inverter,
}

impl Prepared {
    /// `decay_minus` / `decay_plus` are the smallest distances `d` in the factors
    /// `e^{∓idξ}` of integrands on `L⁻` / `L⁺`.
    pub fn new(req: &EvalRequest, decay_minus: Option<f64>, decay_plus: Option<f64>) -> Result<Self> {
        Prepared::with_variant(req, decay_minus, decay_plus, GridVariant::default())
    }

    pub fn with_variant(
        req: &EvalRequest,
        decay_minus: Option<f64>,
        decay_plus: Option<f64>,
        variant: GridVariant,
    ) -> Result<Self> {
        req.check_method()?;
        let (inverter, cone) = Inverter::for_request(req)?;
        let mut angles = match inverter {
            Inverter::Sinh(_) => RayAngles::complex_q(&cone),
            Inverter::Gwr(_) => RayAngles::real_q(&cone),
        };
        angles.omega_plus *= variant.angle_scale;
        angles.omega_minus *= variant.angle_scale;
        let mut spec = GridSpec::new(req.eps * GRID_SHARE * variant.eps_scale, inverter.q_min(req.t));
        spec.strip_factor *= variant.strip_scale;
        spec.decay_minus = decay_minus;
        spec.decay_plus = decay_plus;
        let grids = whf::build_grids(&req.params, &cone, angles, spec)?;
        Ok(Prepared { req: *req, grids, inverter })
    }

    pub fn invert_vec<F>(&self, f: F) -> Result<Vec<f64>>
    where
        F: Fn(C) -> Result<Vec<C>> + Sync,
    {
        let out = self.inverter.invert_vec(f, self.req.t);
        self.grids.clear_cache();
        out
    }

    pub fn invert_batch<F>(&self, f: F) -> Result<Vec<f64>>
    where
        F: FnOnce(&[C]) -> Result<Vec<Vec<C>>>,
    {
        let out = self.inverter.invert_batch(f, self.req.t);
        self.grids.clear_cache();
        out
    }

    pub fn node_counts(&self) -> NodeCounts {
        let (neg, pos) = self.grids.node_counts();
        NodeCounts { n_l: self.inverter.node_count(), n_pos: pos, n_neg: neg }
    }
}

/// Probabilities leave the quadrature with rounding-level excursions outside `[0, 1]`.
pub(crate) fn clamp_prob(v: f64) -> f64 {
    v.clamp(0.0, 1.0)
}
