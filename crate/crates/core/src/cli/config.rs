//! Experiment configuration files.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analysis::ScaleBudget;
use crate::scalar::{QSqrt2, Scalar};
use crate::space::{MetricSpace, Point, StructuredSet};
use crate::system::OrbitSystem;

/// Version tag every config must carry.
pub const CONFIG_SCHEMA: &str = "orbitwise.config/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// OE and ROE verdicts at a single point.
    Classify,
    /// OE and ROE verdicts over a list of candidates.
    Scan,
    /// Per-step separation of two orbits.
    Profile,
    /// The law suite over the catalog.
    Verify,
    /// Expected tables of catalog entries, re-checked.
    Catalog,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    fn from_extension(path: &Path) -> Option<Format> {
        match path.extension()?.to_str()? {
            "json" => Some(Format::Json),
            "csv" => Some(Format::Csv),
            _ => None,
        }
    }
}

/// A set given inline or by the name of a catalog subset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SetRef {
    Named(String),
    Inline(StructuredSet),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QueryParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Point>,
    /// Second point of a separation profile.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Point>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<Scalar>,
    /// The subset `A` for relative verdicts.
    #[serde(default, skip_serializing_if = "Option::is_none", rename = "A")]
    pub set: Option<SetRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidates: Option<Vec<Point>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema: String,
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub catalog: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<OrbitSystem>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<MetricSpace>,
    #[serde(default)]
    pub query: QueryParams,
    pub budget: ScaleBudget,
    #[serde(default)]
    pub output: Output,
}

/// Command-line values that replace the config's own.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub horizon: Option<u64>,
    pub eps_max: Option<QSqrt2>,
    pub levels: Option<u32>,
    pub samples: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, String> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| e.to_string())?;
        if cfg.schema != CONFIG_SCHEMA {
            return Err(format!("unsupported schema {:?}, expected {CONFIG_SCHEMA:?}", cfg.schema));
        }
        Ok(cfg)
    }

    pub fn apply(&mut self, o: &Overrides) {
        let b = &mut self.budget;
        if let Some(v) = o.seed {
            b.seed = v;
        }
        if let Some(v) = o.horizon {
            b.horizon = v;
        }
        if let Some(v) = &o.eps_max {
            b.eps_max = v.clone();
        }
        if let Some(v) = o.levels {
            b.levels = v;
        }
        if let Some(v) = o.samples {
            b.samples = v;
        }
        if let Some(v) = &o.out {
            self.output.path = Some(v.clone());
        }
        if let Some(v) = o.format {
            self.output.format = Some(v);
        }
    }

    /// Fixes the output format and checks it against the command and the
    /// output path.
    pub fn resolve_format(&mut self) -> Result<Format, String> {
        let by_ext = self.output.path.as_deref().and_then(Format::from_extension);
        let format = match (self.output.format, by_ext) {
            (Some(f), Some(e)) if f != e => {
                return Err(format!(
                    "format {} conflicts with output path {}",
                    format_name(f),
                    self.output.path.as_deref().unwrap_or(Path::new("")).display()
                ))
            }
            (Some(f), _) => f,
            (None, Some(e)) => e,
            (None, None) => Format::Json,
        };
        if format == Format::Csv && self.command != Command::Profile {
            return Err(format!("{} emits json only", command_name(self.command)));
        }
        self.output.format = Some(format);
        Ok(format)
    }
}

pub fn format_name(f: Format) -> &'static str {
    match f {
        Format::Json => "json",
        Format::Csv => "csv",
    }
}

pub fn command_name(c: Command) -> &'static str {
    match c {
        Command::Classify => "classify",
        Command::Scan => "scan",
        Command::Profile => "profile",
        Command::Verify => "verify",
        Command::Catalog => "catalog",
    }
}
