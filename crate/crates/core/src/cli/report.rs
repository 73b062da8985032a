use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use crate::analysis::{LawId, LawReport, Verdict};
use crate::catalog::{ExpectedRow, RowCheck};
use crate::scalar::Rational;
use crate::space::{MetricSpace, Point, StructuredSet};
use crate::system::OrbitSystem;

pub const REPORT_SCHEMA: &str = "orbitwise.report/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub schema: String,
    pub version: String,
    /// The effective configuration, overrides applied.
    pub config: ExperimentConfig,
    pub results: Results,
    #[serde(default)]
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Results {
    Classify(PointResult),
    Scan(Vec<PointResult>),
    Profile(Vec<ProfileRow>),
    Verify(Vec<LawCaseResult>),
    Catalog(Vec<CatalogResult>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointResult {
    pub x: Point,
    pub oe: Verdict,
    pub roe: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oe_of_set: Option<Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub roe_of_set: Option<Verdict>,
}

/// One line of a separation profile: an enclosure of `ρ(O_n x, O_n y)` and
/// whether it certainly exceeds `d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileRow {
    pub n: u64,
    #[serde(with = "crate::scalar::rational_serde")]
    pub separation_lo: Rational,
    #[serde(with = "crate::scalar::rational_serde")]
    pub separation_hi: Rational,
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LawCaseResult {
    pub label: String,
    pub law: LawId,
    pub report: LawReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogResult {
    pub name: String,
    pub notes: String,
    pub system: OrbitSystem,
    pub space: MetricSpace,
    pub subsets: Vec<(String, StructuredSet)>,
    pub expected: Vec<ExpectedRow>,
    pub checks: Vec<RowCheck>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    /// The profile rows as CSV; `None` for other commands.
    pub fn to_csv(&self) -> Option<String> {
        let Results::Profile(rows) = &self.results else {
            return None;
        };
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in rows {
            w.serialize(r).expect("profile rows serialize");
        }
        Some(String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv is utf-8"))
    }
}
