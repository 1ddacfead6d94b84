//! Report types written by `lms compare`.

use serde::Serialize;

use lms::cache::MissReport;
use lms::smoothing::StopReason;

#[derive(Serialize)]
pub struct ComparisonReport {
    pub mesh: String,
    pub vertices: usize,
    pub triangles: usize,
    pub seed: u64,
    pub scheme: &'static str,
    pub orderings: Vec<OrderingResult>,
}

#[derive(Serialize)]
pub struct Quantiles {
    pub q50: Option<u64>,
    pub q75: Option<u64>,
    pub q90: Option<u64>,
    pub q100: Option<u64>,
}

#[derive(Serialize)]
pub struct OrderingResult {
    pub ordering: &'static str,
    pub iterations: usize,
    pub final_quality: f64,
    pub stop_reason: StopReason,
    pub n_accesses: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_distance: Option<f64>,
    pub quantiles: Quantiles,
    pub miss_model: MissReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cost_ratio_vs_ori: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_distance_ratio_vs_ori: Option<f64>,
}

/// Table-style CSV of the per-ordering quantiles.
pub fn quantiles_csv(report: &ComparisonReport) -> String {
    let mut out = String::from("mesh,ordering,q50,q75,q90,q100,n_accesses\n");
    let cell = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
    for row in &report.orderings {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            report.mesh,
            row.ordering,
            cell(row.quantiles.q50),
            cell(row.quantiles.q75),
            cell(row.quantiles.q90),
            cell(row.quantiles.q100),
            row.n_accesses,
        ));
    }
    out
}

/// Ratio against the baseline: 1.0 when both costs vanish, undefined when
/// only the baseline does.
pub fn ratio_vs(value: f64, baseline: f64) -> Option<f64> {
    if baseline > 0.0 {
        Some(value / baseline)
    } else if value == 0.0 {
        Some(1.0)
    } else {
        None
    }
}
