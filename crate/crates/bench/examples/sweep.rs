//! Builds every structure on a synthetic dataset and prints sizes and
//! latency by query length.
//!
//! cargo run --release -p syncomplete-bench --example sweep -- [strings] [queries]

use std::time::Instant;

use syncomplete::{HtOptions, StructureKind};
use syncomplete_bench::latency::{long_quartile_len, mean_from_len};
use syncomplete_bench::*;

fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let strings: usize = args.next().map_or(100_000, |a| a.parse().unwrap());
    let queries: usize = args.next().map_or(10_000, |a| a.parse().unwrap());
    let t = Instant::now();
    let data = generate_synthetic(&DatasetSpec::sprot().with_strings(strings))?;
    eprintln!("generated in {:?}: {:?}", t.elapsed(), data.report);
    let work = generate_workload(&data.dict, &data.rules, queries, 7, WorkloadMode::Prefix)?;
    let work = workload::texts(&work);
    let opts = HtOptions::default();
    let mut plan = vec![(StructureKind::Tt, 0.0), (StructureKind::Et, 0.0)];
    for a in [0.0, 0.25, 0.5, 0.75, 1.0] {
        plan.push((StructureKind::Ht, a));
    }
    for (kind, alpha) in plan {
        let (index, stats) = build_measured(kind, &data.dict, &data.rules, alpha, &opts)?;
        let samples = run_benchmark(&index, &work, &BenchOptions::default());
        let q = long_quartile_len(&samples);
        let rows = summarize(&stats.structure, &samples);
        let xs: Vec<f64> = rows.iter().map(|r| r.len as f64).collect();
        let ys: Vec<f64> = rows.iter().map(|r| r.mean_us).collect();
        let fit = scale::linear_fit(&xs, &ys);
        let curve: Vec<String> = rows
            .iter()
            .map(|r| format!("{}:{:.0}", r.len, r.mean_us))
            .collect();
        println!("  slope {:.3} us/byte  {}", fit.slope, curve.join(" "));
        println!(
            "{:8} bytes/str {:8.2} build {:8.1}ms mean {:7.2}us long(>={q}) {:7.2}us exact {:?} expanded {:?}",
            stats.structure,
            stats.bytes_per_string,
            stats.build_millis,
            mean_from_len(&samples, 0),
            mean_from_len(&samples, q),
            stats.selection_exact,
            stats.expanded_rules,
        );
    }
    Ok(())
}
