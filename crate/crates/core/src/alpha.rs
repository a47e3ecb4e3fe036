use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which small-time regime a stability index falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// `alpha < 1`
    Subcritical,
    /// `alpha == 1`
    Critical,
    /// `alpha > 1`
    Supercritical,
}

/// Stability index `alpha` in the open interval (0, 2).
///
/// The subordinator driving the time change is `(alpha/2)`-stable; its index
/// `rho = alpha / 2` is cached because almost every formula uses it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Alpha {
    alpha: f64,
    rho: f64,
}

impl Alpha {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 2.0) {
            return Err(Error::Domain(format!(
                "stability index must lie in (0, 2), got {alpha}"
            )));
        }
        Ok(Self {
            alpha,
            rho: 0.5 * alpha,
        })
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.alpha
    }

    /// Index of the subordinator, `alpha / 2`.
    #[inline]
    pub fn rho(self) -> f64 {
        self.rho
    }

    pub fn regime(self) -> Regime {
        if self.alpha < 1.0 {
            Regime::Subcritical
        } else if self.alpha == 1.0 {
            Regime::Critical
        } else {
            Regime::Supercritical
        }
    }
}

impl TryFrom<f64> for Alpha {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Alpha::new(value)
    }
}

impl From<Alpha> for f64 {
    fn from(a: Alpha) -> f64 {
        a.alpha
    }
}

impl std::fmt::Display for Alpha {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.alpha)
    }
}
