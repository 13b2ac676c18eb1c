//! JSON run configuration.

use serde::Deserialize;
use serde_json::Value;

use crate::charexp::{self, ScaleConvention, StableParams};
use crate::distributions::Method;
use crate::error::{Error, Result};

/// How `(beta, scale)` map to the jump intensities; `custom` means `c_plus`/`c_minus` are given.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    SumOne,
    AbsCOne,
    Sigma,
    Custom,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub alpha: f64,
    #[serde(default)]
    pub c_plus: Option<f64>,
    #[serde(default)]
    pub c_minus: Option<f64>,
    #[serde(default)]
    pub beta: Option<f64>,
    #[serde(default)]
    pub scale: Option<f64>,
    #[serde(default)]
    pub convention: Option<Convention>,
    #[serde(default)]
    pub mu: f64,
    #[serde(rename = "T", alias = "t")]
    pub t: f64,
    /// Starting point of the process.
    #[serde(default)]
    pub x1: f64,
    /// Running-maximum floor; defaults to `x1`.
    #[serde(default)]
    pub x2: Option<f64>,
    /// `a` for cpdf-x / cpdf-sup, `[a1, a2]` for joint-cpdf, `{"beta", "lambda"}` for exchange.
    #[serde(default)]
    pub points: Vec<Value>,
    #[serde(default)]
    pub method: Option<Method>,
    #[serde(default)]
    pub eps: Option<f64>,
    #[serde(default)]
    pub threads: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExchangePoint {
    pub beta: f64,
    pub lambda: f64,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn params(&self) -> Result<StableParams> {
        let explicit = self.c_plus.is_some() || self.c_minus.is_some();
        if explicit {
            if self.beta.is_some() || self.scale.is_some() {
                return Err(Error::Config("give either c_plus/c_minus or beta/scale, not both".into()));
            }
            if !matches!(self.convention, None | Some(Convention::Custom)) {
                return Err(Error::Config("c_plus/c_minus require convention \"custom\" or none".into()));
            }
            let (Some(cp), Some(cm)) = (self.c_plus, self.c_minus) else {
                return Err(Error::Config("both c_plus and c_minus are required".into()));
            };
            return StableParams::new(self.alpha, cp, cm, self.mu);
        }
        let (Some(beta), Some(scale)) = (self.beta, self.scale) else {
            return Err(Error::Config("need c_plus/c_minus or beta/scale".into()));
        };
        let conv = match self.convention {
            Some(Convention::SumOne) => ScaleConvention::SumOne,
            Some(Convention::AbsCOne) => ScaleConvention::AbsCOne,
            Some(Convention::Sigma) => ScaleConvention::Sigma,
            Some(Convention::Custom) => {
                return Err(Error::Config("convention \"custom\" needs c_plus/c_minus".into()));
            }
            None => return Err(Error::Config("beta/scale need a convention: sum-one, abs-c-one or sigma".into())),
        };
        StableParams::from_beta(self.alpha, beta, scale, self.mu, conv)
    }

    pub fn x2(&self) -> f64 {
        self.x2.unwrap_or(self.x1)
    }

    pub fn levels(&self) -> Result<Vec<f64>> {
        self.parse_points("a number")
    }

    pub fn cells(&self) -> Result<Vec<(f64, f64)>> {
        let v: Vec<[f64; 2]> = self.parse_points("an [a1, a2] pair")?;
        Ok(v.into_iter().map(|[a, b]| (a, b)).collect())
    }

    pub fn exchange_points(&self) -> Result<Vec<ExchangePoint>> {
        self.parse_points("an object {\"beta\", \"lambda\"}")
    }

    fn parse_points<T: serde::de::DeserializeOwned>(&self, what: &str) -> Result<Vec<T>> {
        if self.points.is_empty() {
            return Err(Error::Config("no points to evaluate".into()));
        }
        self.points
            .iter()
            .enumerate()
            .map(|(i, v)| {
                serde_json::from_value(v.clone())
                    .map_err(|e| Error::Config(format!("point {i} should be {what}: {e}")))
            })
            .collect()
    }
}

/// The sinh contour where admissible, otherwise GWR; the direct Fourier method
/// only for the law of `X_T` when no factorization exists.
pub fn default_method(p: &StableParams, distribution_of_x: bool) -> Method {
    let reg = charexp::classify(p);
    if !reg.supports_whf() && distribution_of_x {
        Method::DirectFourier
    } else if reg.sinh_bromwich_allowed {
        Method::SinhBromwich
    } else {
        Method::Gwr
    }
}
