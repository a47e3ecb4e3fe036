//! Run configuration: defaults, an optional TOML file, then command-line
//! flags, in increasing precedence.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use shc_core::asymptotics::Quantity;
use shc_core::{Alpha, Domain, McConfig, QuadratureSpec};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Density,
    Curve,
    Verify,
    Report,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    Thm11,
    Thm12,
    Remark13,
    Prop35,
    Lemmas,
    UbBounds,
}

impl Check {
    pub fn as_str(self) -> &'static str {
        match self {
            Check::Thm11 => "thm11",
            Check::Thm12 => "thm12",
            Check::Remark13 => "remark13",
            Check::Prop35 => "prop35",
            Check::Lemmas => "lemmas",
            Check::UbBounds => "ub-bounds",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CurveQuantity {
    Q2,
    QTilde,
    QTildeMc,
    QAlphaMc,
    ThirdTerm,
}

impl From<CurveQuantity> for Quantity {
    fn from(q: CurveQuantity) -> Self {
        match q {
            CurveQuantity::Q2 => Quantity::Q2,
            CurveQuantity::QTilde => Quantity::QTilde,
            CurveQuantity::QTildeMc => Quantity::QTildeMc,
            CurveQuantity::QAlphaMc => Quantity::QAlphaMc,
            CurveQuantity::ThirdTerm => Quantity::ThirdTerm,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    JsonLines,
}

/// Descending geometric time grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TGrid {
    pub t_max: f64,
    pub t_min: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DensityGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub points: usize,
    pub t: f64,
    pub tol: f64,
}

impl Default for DensityGrid {
    fn default() -> Self {
        DensityGrid { x_min: 1e-3, x_max: 1e4, points: 200, t: 1.0, tol: 1e-12 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Quadrature {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub tail_order: u32,
}

impl Default for Quadrature {
    fn default() -> Self {
        let q = QuadratureSpec::default();
        Quadrature { rel_tol: q.rel_tol, abs_tol: q.abs_tol, tail_order: q.tail_order }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Mc {
    pub n_samples: u64,
    pub seed: u64,
    /// Finest monitoring grid of the jump-process estimators.
    pub n_grid: usize,
}

impl Default for Mc {
    fn default() -> Self {
        Mc { n_samples: 100_000, seed: 1, n_grid: 1024 }
    }
}

/// Everything a run needs. Every field can come from the config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    pub check: Option<Check>,
    pub quantity: CurveQuantity,
    #[serde(with = "domain_text")]
    pub domain: Domain,
    pub alpha: f64,
    /// `None` selects the default grid of the command.
    pub t_grid: Option<TGrid>,
    pub include_origin: bool,
    pub density: DensityGrid,
    pub quadrature: Quadrature,
    pub mc: Mc,
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: Command::Report,
            check: None,
            quantity: CurveQuantity::QTilde,
            domain: Domain::unit_interval(),
            alpha: 1.5,
            t_grid: None,
            include_origin: false,
            density: DensityGrid::default(),
            quadrature: Quadrature::default(),
            mc: Mc::default(),
            output: None,
            format: Format::Csv,
        }
    }
}

mod domain_text {
    use serde::{Deserialize, Deserializer, Serializer};
    use shc_core::Domain;

    pub fn serialize<S: Serializer>(d: &Domain, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(d)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Domain, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always serializable")
    }

    pub fn alpha(&self) -> Result<Alpha, CliError> {
        Alpha::new(self.alpha).map_err(|e| CliError::Usage(e.to_string()))
    }

    pub fn quadrature_spec(&self) -> Result<QuadratureSpec, CliError> {
        let spec = QuadratureSpec {
            rel_tol: self.quadrature.rel_tol,
            abs_tol: self.quadrature.abs_tol,
            split_points: Vec::new(),
            tail_order: self.quadrature.tail_order,
        };
        spec.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(spec)
    }

    pub fn mc_config(&self) -> Result<McConfig, CliError> {
        McConfig::new(self.mc.n_samples, self.mc.seed).map_err(|e| CliError::Usage(e.to_string()))
    }
}
