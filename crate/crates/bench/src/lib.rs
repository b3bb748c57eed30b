//! Datasets, workloads and measurements for the completion indexes.
//!
//! Everything here is deterministic given a seed except wall-clock
//! latencies, which callers should only compare, never pin.

pub mod dataset;
mod error;
pub mod latency;
pub mod measure;
pub mod scale;
pub mod workload;

pub use dataset::{
    desk_instance, generate_synthetic, load_dictionary, load_rules, DatasetSpec, GenerationReport,
    Synthetic,
};
pub use error::{BenchError, Result};
pub use latency::{run_benchmark, summarize, BenchOptions, LatencyRow, Sample};
pub use measure::{measure, SpaceBreakdown, StructureStats};
pub use workload::{generate_workload, Query, WorkloadMode};

use std::time::Instant;

use syncomplete::{HtOptions, Index, RuleSet, ScoredString, StructureKind};

/// Builds an index and measures it.
pub fn build_measured(
    kind: StructureKind,
    dict: &[ScoredString],
    rules: &RuleSet,
    alpha: f64,
    options: &HtOptions,
) -> Result<(Index, StructureStats)> {
    let start = Instant::now();
    let index = Index::build(kind, dict, rules, alpha, options)?;
    let millis = start.elapsed().as_secs_f64() * 1e3;
    let label = label(kind, alpha);
    let stats = measure(&label, &index, dict, &options.model, millis);
    Ok((index, stats))
}

/// `tt`, `et`, or `ht@<alpha>`.
pub fn label(kind: StructureKind, alpha: f64) -> String {
    match kind {
        StructureKind::Ht => format!("ht@{alpha}"),
        k => k.to_string(),
    }
}
