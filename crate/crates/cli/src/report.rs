//! Machine-readable run reports.
//!
//! Every run emits one JSON document (`schema: 1`) embedding the instance
//! digest and the complete effective configuration, so the run can be
//! reproduced from the report alone. The `timing_ms` field is the only part
//! excluded from byte-for-byte determinism.

use crate::instance::{GridSection, InstanceFile, ResolutionSection, TolerancesSection};
use serde::Serialize;

pub const REPORT_SCHEMA: u32 = 1;

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub command: String,
    /// `sha256:<hex>` of the canonical instance; `null` for instance-free
    /// commands such as `verify`.
    pub instance_digest: Option<String>,
    pub config: ReportConfig,
    pub result: serde_json::Value,
    pub timing_ms: u128,
}

#[derive(Debug, Default, Serialize)]
pub struct ReportConfig {
    /// The parsed instance in canonical structure (pre-override).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<InstanceFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolution: Option<ResolutionSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<TolerancesSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap_fix_lambda: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite: Option<String>,
    pub threads: usize,
}

impl RunReport {
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }
}

/// Fixed-precision decimal rendering for CSV dumps: 17 significant digits,
/// enough to round-trip any f64.
pub fn csv_number(x: f64) -> String {
    format!("{x:.16e}")
}
