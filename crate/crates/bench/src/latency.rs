//! Lookup latency by query length.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use syncomplete::Index;

/// Latency of one query, in microseconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub len: usize,
    pub micros: f64,
}

/// One CSV row: latency summary for queries of one length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatencyRow {
    pub structure: String,
    pub len: usize,
    pub mean_us: f64,
    pub median_us: f64,
    pub p99_us: f64,
}

pub const CSV_HEADER: &str = "structure,len,mean_us,median_us,p99_us";

impl LatencyRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{:.3},{:.3},{:.3}",
            self.structure, self.len, self.mean_us, self.median_us, self.p99_us
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchOptions {
    pub k: usize,
    /// Untimed passes over the workload before measuring.
    pub warmup_rounds: usize,
    /// Timed passes; a query's latency is its fastest pass.
    pub rounds: usize,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions {
            k: 10,
            warmup_rounds: 1,
            rounds: 3,
        }
    }
}

/// Times every query.
pub fn run_benchmark(index: &Index, queries: &[String], opts: &BenchOptions) -> Vec<Sample> {
    let mut sink = 0usize;
    for _ in 0..opts.warmup_rounds {
        for q in queries {
            sink += index.topk(q, opts.k).len();
        }
    }
    let mut best = vec![f64::INFINITY; queries.len()];
    for _ in 0..opts.rounds.max(1) {
        for (i, q) in queries.iter().enumerate() {
            let start = Instant::now();
            let got = index.topk(q, opts.k);
            let us = start.elapsed().as_secs_f64() * 1e6;
            sink += got.len();
            best[i] = best[i].min(us);
        }
    }
    std::hint::black_box(sink);
    queries
        .iter()
        .zip(best)
        .map(|(q, micros)| Sample {
            len: q.len(),
            micros,
        })
        .collect()
}

/// Per-length summary rows, ascending length.
pub fn summarize(structure: &str, samples: &[Sample]) -> Vec<LatencyRow> {
    let max_len = samples.iter().map(|s| s.len).max().unwrap_or(0);
    let mut by_len: Vec<Vec<f64>> = vec![Vec::new(); max_len + 1];
    for s in samples {
        by_len[s.len].push(s.micros);
    }
    by_len
        .into_iter()
        .enumerate()
        .filter(|(_, v)| !v.is_empty())
        .map(|(len, mut v)| {
            v.sort_by(f64::total_cmp);
            LatencyRow {
                structure: structure.to_owned(),
                len,
                mean_us: mean(&v),
                median_us: percentile(&v, 0.5),
                p99_us: percentile(&v, 0.99),
            }
        })
        .collect()
}

pub fn to_csv(rows: &[LatencyRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.to_csv());
        out.push('\n');
    }
    out
}

pub fn mean(v: &[f64]) -> f64 {
    if v.is_empty() {
        0.0
    } else {
        v.iter().sum::<f64>() / v.len() as f64
    }
}

/// Nearest-rank percentile of sorted values.
pub fn percentile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return 0.0;
    }
    let rank = (q * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

/// Mean latency over samples whose length is at least `min_len`.
pub fn mean_from_len(samples: &[Sample], min_len: usize) -> f64 {
    let v: Vec<f64> = samples
        .iter()
        .filter(|s| s.len >= min_len)
        .map(|s| s.micros)
        .collect();
    mean(&v)
}

/// Smallest length of the longest quarter of the queries.
pub fn long_quartile_len(samples: &[Sample]) -> usize {
    let mut lens: Vec<usize> = samples.iter().map(|s| s.len).collect();
    lens.sort_unstable();
    lens.get(lens.len() * 3 / 4).copied().unwrap_or(0)
}

/// Queries per second with the workload split over `threads` workers.
pub fn throughput(index: &Index, queries: &[String], k: usize, threads: usize) -> f64 {
    let threads = threads.max(1);
    let start = Instant::now();
    std::thread::scope(|s| {
        for chunk in queries.chunks(queries.len().div_ceil(threads).max(1)) {
            s.spawn(move || {
                let mut n = 0;
                for q in chunk {
                    n += index.topk(q, k).len();
                }
                std::hint::black_box(n);
            });
        }
    });
    queries.len() as f64 / start.elapsed().as_secs_f64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn percentiles() {
        let v: Vec<f64> = (1..=100).map(f64::from).collect();
        assert_eq!(percentile(&v, 0.5), 50.0);
        assert_eq!(percentile(&v, 0.99), 99.0);
        assert_eq!(percentile(&[3.0], 0.99), 3.0);
        assert_eq!(percentile(&[], 0.5), 0.0);
    }

    #[test]
    fn summary_rows() {
        let samples = [
            Sample {
                len: 3,
                micros: 2.0,
            },
            Sample {
                len: 1,
                micros: 1.0,
            },
            Sample {
                len: 3,
                micros: 4.0,
            },
        ];
        let rows = summarize("tt", &samples);
        assert_eq!(rows.len(), 2);
        assert_eq!((rows[1].len, rows[1].mean_us), (3, 3.0));
        assert_eq!(
            to_csv(&rows).lines().next(),
            Some("structure,len,mean_us,median_us,p99_us")
        );
    }
}
