//! Scalar gain functions `f(θ)` weighting each neighbor term of the control law.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Which structural family a gain belongs to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GainFamily {
    /// Bounded, `f > 0` and `f' < 0` on `(0, π)`.
    MonotonePositive,
    /// `f(θ) = a cos θ + a` with `a > 0`.
    AffineCosine { a: f64 },
    /// No structural guarantee.
    Custom,
}

/// A gain `f: [0, π] → R` with optional derivative.
#[derive(Clone)]
pub struct GainFunction {
    name: String,
    family: GainFamily,
    eval: ScalarFn,
    deriv: Option<ScalarFn>,
}

impl fmt::Debug for GainFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GainFunction").field("name", &self.name).field("family", &self.family).finish()
    }
}

/// Grid used to spot-check the monotone family contract.
const CHECK_POINTS: usize = 1000;
const CHECK_MARGIN: f64 = 1e-3;

/// Central-difference step for gains without an analytic derivative.
const DIFF_STEP: f64 = 1e-6;

/// `a cos θ + a`.
pub fn affine_cosine_gain(a: f64) -> Result<GainFunction> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::Gain(format!("affine cosine gain needs a > 0, got {a}")));
    }
    Ok(GainFunction {
        name: format!("affine_cosine a={a}"),
        family: GainFamily::AffineCosine { a },
        eval: Arc::new(move |t: f64| a * t.cos() + a),
        deriv: Some(Arc::new(move |t: f64| -a * t.sin())),
    })
}

/// `e^{-θ}`.
pub fn exponential_gain() -> GainFunction {
    GainFunction {
        name: "exponential".to_string(),
        family: GainFamily::MonotonePositive,
        eval: Arc::new(|t: f64| (-t).exp()),
        deriv: Some(Arc::new(|t: f64| -(-t).exp())),
    }
}

impl GainFunction {
    /// A gain claimed to be in the monotone family; the claim is checked on a grid.
    pub fn monotone(
        name: impl Into<String>,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        deriv: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        let g = Self {
            name: name.into(),
            family: GainFamily::MonotonePositive,
            eval: Arc::new(eval),
            deriv: Some(Arc::new(deriv)),
        };
        g.check_monotone_contract()?;
        Ok(g)
    }

    /// An opaque gain without family guarantees. The derivative, when absent,
    /// is taken by central differences.
    pub fn custom(
        name: impl Into<String>,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        deriv: Option<ScalarFn>,
    ) -> Self {
        Self { name: name.into(), family: GainFamily::Custom, eval: Arc::new(eval), deriv }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn family(&self) -> GainFamily {
        self.family
    }

    #[inline]
    pub fn eval(&self, theta: f64) -> f64 {
        (self.eval)(theta)
    }

    pub fn deriv(&self, theta: f64) -> f64 {
        match &self.deriv {
            Some(d) => d(theta),
            None => (self.eval(theta + DIFF_STEP) - self.eval(theta - DIFF_STEP)) / (2.0 * DIFF_STEP),
        }
    }

    pub fn has_analytic_deriv(&self) -> bool {
        self.deriv.is_some()
    }

    /// `F(ξ) = f(arccos ξ)`, exact for the affine-cosine family.
    #[inline]
    pub fn of_cosine(&self, c: f64) -> f64 {
        match self.family {
            GainFamily::AffineCosine { a } => a * c + a,
            _ => self.eval(c.clamp(-1.0, 1.0).acos()),
        }
    }

    /// `F'(ξ)`. Exact (`a`) for the affine-cosine family, chain rule through the
    /// analytic derivative otherwise, central differences on `F` as last resort.
    pub fn of_cosine_deriv(&self, c: f64) -> f64 {
        match (self.family, &self.deriv) {
            (GainFamily::AffineCosine { a }, _) => a,
            (_, Some(d)) => {
                let s = (1.0 - c * c).sqrt();
                -d(c.clamp(-1.0, 1.0).acos()) / s
            }
            (_, None) => (self.of_cosine(c + DIFF_STEP) - self.of_cosine(c - DIFF_STEP)) / (2.0 * DIFF_STEP),
        }
    }

    /// Checks `f > 0` and `f' < 0` on a grid of `(0.001, π - 0.001)`.
    pub fn check_monotone_contract(&self) -> Result<()> {
        let lo = CHECK_MARGIN;
        let hi = std::f64::consts::PI - CHECK_MARGIN;
        for k in 0..CHECK_POINTS {
            let t = lo + (hi - lo) * k as f64 / (CHECK_POINTS - 1) as f64;
            let f = self.eval(t);
            let df = self.deriv(t);
            if !(f.is_finite() && f > 0.0) {
                return Err(Error::Gain(format!("{}: f({t}) = {f} is not positive", self.name)));
            }
            if !(df.is_finite() && df < 0.0) {
                return Err(Error::Gain(format!("{}: f'({t}) = {df} is not negative", self.name)));
            }
        }
        Ok(())
    }
}

/// Serializable gain selection.
///
/// Accepts either an object (`{"name": "affine_cosine", "a": 1.0}`) or the
/// shorthand string form (`"affine_cosine a=1"`, `"exponential"`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GainSpecRepr")]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum GainSpec {
    AffineCosine { a: f64 },
    Exponential,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GainSpecRepr {
    Text(String),
    Object(GainSpecObject),
}

#[derive(Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
enum GainSpecObject {
    AffineCosine { a: f64 },
    Exponential,
}

impl TryFrom<GainSpecRepr> for GainSpec {
    type Error = String;

    fn try_from(r: GainSpecRepr) -> std::result::Result<Self, String> {
        match r {
            GainSpecRepr::Object(GainSpecObject::AffineCosine { a }) => Ok(GainSpec::AffineCosine { a }),
            GainSpecRepr::Object(GainSpecObject::Exponential) => Ok(GainSpec::Exponential),
            GainSpecRepr::Text(s) => s.parse(),
        }
    }
}

impl std::str::FromStr for GainSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let mut parts = s.split_whitespace();
        let name = parts.next().ok_or_else(|| "empty gain specification".to_string())?;
        let mut a = None;
        for p in parts {
            match p.split_once('=') {
                Some(("a", v)) => a = Some(v.parse::<f64>().map_err(|e| format!("gain parameter a: {e}"))?),
                _ => return Err(format!("unknown gain parameter `{p}`")),
            }
        }
        match name {
            "affine_cosine" => Ok(GainSpec::AffineCosine { a: a.unwrap_or(1.0) }),
            "exponential" if a.is_none() => Ok(GainSpec::Exponential),
            "exponential" => Err("exponential gain takes no parameters".to_string()),
            other => Err(format!("unknown gain `{other}` (expected affine_cosine or exponential)")),
        }
    }
}

impl GainSpec {
    pub fn build(&self) -> Result<GainFunction> {
        match *self {
            GainSpec::AffineCosine { a } => affine_cosine_gain(a),
            GainSpec::Exponential => Ok(exponential_gain()),
        }
    }
}
