//! Query workloads: dictionary strings rewritten with random rules, cut to
//! a random prefix.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use syncomplete::{RuleSet, ScoredString};

use crate::error::{BenchError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum WorkloadMode {
    /// A prefix of the rewritten string.
    #[default]
    Prefix,
    /// Any substring of the rewritten string. Most of these match nothing
    /// under prefix completion.
    Substring,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub text: String,
    /// Index of the dictionary string the query was derived from.
    pub source: usize,
}

/// Rewrites `s`: each lhs occurrence, scanned left to right and never
/// overlapping an earlier rewrite, is replaced by one of its rules' rhs with
/// probability `p`.
pub fn rewrite(rng: &mut ChaCha8Rng, s: &str, rules: &RuleSet, p: f64) -> String {
    let bytes = s.as_bytes();
    let mut starts: Vec<(usize, u32)> = rules
        .applicable_rules(bytes)
        .into_iter()
        .flat_map(|(r, offs)| offs.into_iter().map(move |o| (o, r)))
        .collect();
    starts.sort_unstable();
    let mut out = Vec::with_capacity(bytes.len());
    let mut at = 0;
    let mut i = 0;
    while i < starts.len() {
        let offset = starts[i].0;
        let same: Vec<u32> = starts[i..]
            .iter()
            .take_while(|(o, _)| *o == offset)
            .map(|&(_, r)| r)
            .collect();
        i += same.len();
        if offset < at || !rng.gen_bool(p) {
            continue;
        }
        let rule = rules.get(*same.choose(rng).unwrap()).unwrap();
        out.extend_from_slice(&bytes[at..offset]);
        out.extend_from_slice(rule.rhs.as_bytes());
        at = offset + rule.lhs.len();
    }
    out.extend_from_slice(&bytes[at..]);
    String::from_utf8(out).expect("rewriting whole UTF-8 pieces")
}

/// `count` queries; deterministic in `seed`. Prefix lengths are uniform over
/// `[2, len]` (shorter strings give their whole text).
pub fn generate_workload(
    dict: &[ScoredString],
    rules: &RuleSet,
    count: usize,
    seed: u64,
    mode: WorkloadMode,
) -> Result<Vec<Query>> {
    if count == 0 || dict.is_empty() {
        return Err(BenchError::EmptyWorkload);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let source = rng.gen_range(0..dict.len());
        let text = rewrite(&mut rng, &dict[source].text, rules, 0.5);
        let b = text.as_bytes();
        let (start, end) = match mode {
            WorkloadMode::Prefix => (0, cut(&mut rng, b, 0)),
            WorkloadMode::Substring => {
                let start = boundary(b, rng.gen_range(0..b.len().saturating_sub(1).max(1)));
                (start, cut(&mut rng, b, start))
            }
        };
        out.push(Query {
            text: text[start..end].to_owned(),
            source,
        });
    }
    Ok(out)
}

/// End of a random piece of `b` starting at `start`, at least two bytes long
/// when possible, on a character boundary.
fn cut(rng: &mut ChaCha8Rng, b: &[u8], start: usize) -> usize {
    let rest = b.len() - start;
    if rest <= 2 {
        return b.len();
    }
    boundary(b, start + rng.gen_range(2..=rest))
}

fn boundary(b: &[u8], mut i: usize) -> usize {
    while i < b.len() && (b[i] & 0xC0) == 0x80 {
        i += 1;
    }
    i
}

pub fn texts(queries: &[Query]) -> Vec<String> {
    queries.iter().map(|q| q.text.clone()).collect()
}
