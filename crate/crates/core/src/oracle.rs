//! Reference semantics computed by brute force.
//!
//! Nothing here is fast. These functions enumerate every rewrite of a query
//! (or every expansion of a dictionary string) and exist to check the index
//! structures on small inputs.

use std::collections::{BTreeMap, BTreeSet};

use crate::completion::{Completion, Rewrite, ScoredString, Witness};
use crate::dictionary;
use crate::error::{Error, Result};
use crate::rules::RuleSet;

/// Default cap on enumerated variants per query or per string.
pub const DEFAULT_LIMIT: usize = 10_000;

/// A dictionary-side rewrite of a query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplacedString {
    pub text: String,
    pub rewrites: Vec<Rewrite>,
}

/// Every distinct string obtained from `p` by replacing a set of disjoint,
/// complete rhs occurrences with the lhs of their rule. Substituted text is
/// never matched again. `p` itself is always included.
///
/// Results are sorted by text; each text carries its smallest witness.
pub fn replaced_strings(p: &str, rules: &RuleSet, limit: usize) -> Result<Vec<ReplacedString>> {
    let mut found: BTreeMap<Vec<u8>, Witness> = BTreeMap::new();
    let mut produced = 0usize;
    let mut text = Vec::with_capacity(p.len());
    let mut witness = Vec::new();
    enumerate_query(
        p.as_bytes(),
        0,
        rules,
        limit,
        &mut text,
        &mut witness,
        &mut produced,
        &mut found,
    )?;
    Ok(found
        .into_iter()
        .map(|(text, w)| ReplacedString {
            text: String::from_utf8(text).expect("rewrites of UTF-8 stay UTF-8"),
            rewrites: w.0,
        })
        .collect())
}

#[allow(clippy::too_many_arguments)]
fn enumerate_query(
    p: &[u8],
    at: usize,
    rules: &RuleSet,
    limit: usize,
    text: &mut Vec<u8>,
    witness: &mut Vec<Rewrite>,
    produced: &mut usize,
    found: &mut BTreeMap<Vec<u8>, Witness>,
) -> Result<()> {
    if at == p.len() {
        *produced += 1;
        if *produced > limit {
            return Err(Error::Overflow { limit });
        }
        let w = Witness(witness.clone());
        found
            .entry(text.clone())
            .and_modify(|cur| {
                if w < *cur {
                    *cur = w.clone();
                }
            })
            .or_insert(w);
        return Ok(());
    }
    text.push(p[at]);
    enumerate_query(p, at + 1, rules, limit, text, witness, produced, found)?;
    text.pop();
    for r in rules.rules() {
        let rhs = r.rhs.as_bytes();
        if p[at..].starts_with(rhs) {
            let mark = text.len();
            text.extend_from_slice(r.lhs.as_bytes());
            witness.push(Rewrite {
                rule: r.id,
                start: at,
                end: at + rhs.len(),
            });
            enumerate_query(
                p,
                at + rhs.len(),
                rules,
                limit,
                text,
                witness,
                produced,
                found,
            )?;
            witness.pop();
            text.truncate(mark);
        }
    }
    Ok(())
}

/// Ground-truth top-k: dictionary strings having some replaced string of `p`
/// as a prefix, ranked by score descending then text ascending.
pub fn oracle_topk(
    dict: &[ScoredString],
    rules: &RuleSet,
    p: &str,
    k: usize,
) -> Result<Vec<Completion>> {
    oracle_topk_with_limit(dict, rules, p, k, DEFAULT_LIMIT)
}

pub fn oracle_topk_with_limit(
    dict: &[ScoredString],
    rules: &RuleSet,
    p: &str,
    k: usize,
    limit: usize,
) -> Result<Vec<Completion>> {
    let dict = dictionary::normalize(dict)?;
    let replaced = replaced_strings(p, rules, limit)?;
    let mut hits: Vec<Completion> = Vec::new();
    for entry in &dict {
        let best = replaced
            .iter()
            .filter(|r| entry.text.as_bytes().starts_with(r.text.as_bytes()))
            .map(|r| Witness(r.rewrites.clone()))
            .min();
        if let Some(w) = best {
            hits.push(Completion {
                text: entry.text.clone(),
                score: entry.score,
                rewrites: w.0,
            });
        }
    }
    hits.sort_by(Completion::rank_cmp);
    hits.truncate(k);
    Ok(hits)
}

/// One dictionary-side expansion of a dictionary string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variant {
    pub text: String,
    pub source: ScoredString,
    /// Byte ranges of `text` that hold substituted rhs values.
    pub rhs_spans: Vec<(usize, usize)>,
}

impl Variant {
    /// Baseline matching: `p` is a prefix of the variant and does not stop
    /// strictly inside a substituted rhs.
    pub fn matches(&self, p: &str) -> bool {
        self.text.as_bytes().starts_with(p.as_bytes())
            && !self
                .rhs_spans
                .iter()
                .any(|&(s, e)| s < p.len() && p.len() < e)
    }
}

/// Baseline expansion: every dictionary string with every set of disjoint
/// lhs occurrences replaced by the rule's rhs. Exponential in the number of
/// applicable rules; `limit` caps the variants per string.
pub fn build_baseline_expanded_set(
    dict: &[ScoredString],
    rules: &RuleSet,
    limit: usize,
) -> Result<Vec<Variant>> {
    let dict = dictionary::normalize(dict)?;
    let mut out = Vec::new();
    for entry in &dict {
        let s = entry.text.as_bytes();
        let mut variants = VariantSet::new();
        let mut produced = 0usize;
        expand_string(
            s,
            0,
            rules,
            limit,
            &mut Vec::new(),
            &mut Vec::new(),
            &mut produced,
            &mut variants,
        )?;
        for (text, spans) in variants {
            out.push(Variant {
                text: String::from_utf8(text).expect("rewrites of UTF-8 stay UTF-8"),
                source: entry.clone(),
                rhs_spans: spans,
            });
        }
    }
    Ok(out)
}

// (text, rhs spans) pairs of one string's expansions.
type VariantSet = BTreeSet<(Vec<u8>, Vec<(usize, usize)>)>;

#[allow(clippy::too_many_arguments)]
fn expand_string(
    s: &[u8],
    at: usize,
    rules: &RuleSet,
    limit: usize,
    text: &mut Vec<u8>,
    spans: &mut Vec<(usize, usize)>,
    produced: &mut usize,
    out: &mut VariantSet,
) -> Result<()> {
    if at == s.len() {
        *produced += 1;
        if *produced > limit {
            return Err(Error::Overflow { limit });
        }
        out.insert((text.clone(), spans.clone()));
        return Ok(());
    }
    text.push(s[at]);
    expand_string(s, at + 1, rules, limit, text, spans, produced, out)?;
    text.pop();
    for r in rules.rules() {
        let lhs = r.lhs.as_bytes();
        if s[at..].starts_with(lhs) {
            let mark = text.len();
            text.extend_from_slice(r.rhs.as_bytes());
            spans.push((mark, text.len()));
            expand_string(s, at + lhs.len(), rules, limit, text, spans, produced, out)?;
            spans.pop();
            text.truncate(mark);
        }
    }
    Ok(())
}
