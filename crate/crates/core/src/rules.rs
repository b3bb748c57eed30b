//! Synonym rules and where they apply.
//!
//! A rule `lhs -> rhs` says that `rhs`, typed in a query, may stand for
//! `lhs` as it appears in a dictionary string. `lhs` is always the
//! dictionary-side spelling; a bidirectional synonym is two rules.

use std::collections::{HashMap, HashSet};

use aho_corasick::AhoCorasick;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SynonymRule {
    pub id: u32,
    pub lhs: String,
    pub rhs: String,
}

impl SynonymRule {
    /// `len(lhs) - len(rhs)` in bytes.
    pub fn delta(&self) -> i32 {
        self.lhs.len() as i32 - self.rhs.len() as i32
    }
}

/// Validated rule collection with dense ids and an lhs matcher.
#[derive(Debug, Clone)]
pub struct RuleSet {
    rules: Vec<SynonymRule>,
    by_rhs: HashMap<String, Vec<u32>>,
    lhs_matcher: Option<AhoCorasick>,
    // pattern id of `lhs_matcher` -> rules sharing that lhs
    lhs_rules: Vec<Vec<u32>>,
}

impl Default for RuleSet {
    fn default() -> Self {
        Self::empty()
    }
}

impl PartialEq for RuleSet {
    fn eq(&self, other: &Self) -> bool {
        self.rules == other.rules
    }
}

impl Eq for RuleSet {}

impl RuleSet {
    pub fn empty() -> Self {
        RuleSet {
            rules: Vec::new(),
            by_rhs: HashMap::new(),
            lhs_matcher: None,
            lhs_rules: Vec::new(),
        }
    }

    /// Builds a rule set from `(lhs, rhs)` pairs, dropping repeated pairs.
    pub fn from_pairs<L, R>(pairs: impl IntoIterator<Item = (L, R)>) -> Result<Self>
    where
        L: Into<String>,
        R: Into<String>,
    {
        let mut seen = HashSet::new();
        let mut rules = Vec::new();
        for (lhs, rhs) in pairs {
            let (lhs, rhs) = (lhs.into(), rhs.into());
            validate_pair(&lhs, &rhs)?;
            if seen.insert((lhs.clone(), rhs.clone())) {
                rules.push(SynonymRule {
                    id: rules.len() as u32,
                    lhs,
                    rhs,
                });
            }
        }
        Ok(Self::from_rules(rules))
    }

    fn from_rules(rules: Vec<SynonymRule>) -> Self {
        let mut by_rhs: HashMap<String, Vec<u32>> = HashMap::new();
        let mut lhs_ids: HashMap<&str, usize> = HashMap::new();
        let mut patterns: Vec<&str> = Vec::new();
        let mut lhs_rules: Vec<Vec<u32>> = Vec::new();
        for r in &rules {
            by_rhs.entry(r.rhs.clone()).or_default().push(r.id);
            let pid = *lhs_ids.entry(r.lhs.as_str()).or_insert_with(|| {
                patterns.push(r.lhs.as_str());
                lhs_rules.push(Vec::new());
                patterns.len() - 1
            });
            lhs_rules[pid].push(r.id);
        }
        let lhs_matcher = if patterns.is_empty() {
            None
        } else {
            Some(AhoCorasick::new(&patterns).expect("lhs patterns are small literals"))
        };
        RuleSet {
            rules,
            by_rhs,
            lhs_matcher,
            lhs_rules,
        }
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn rules(&self) -> &[SynonymRule] {
        &self.rules
    }

    pub fn get(&self, id: u32) -> Option<&SynonymRule> {
        self.rules.get(id as usize)
    }

    /// Rules whose rhs is exactly `rhs`.
    pub fn with_rhs(&self, rhs: &str) -> &[u32] {
        self.by_rhs.get(rhs).map_or(&[], Vec::as_slice)
    }

    /// Keeps only the rules in `ids`, renumbered densely in their original order.
    pub fn subset(&self, ids: &[u32]) -> RuleSet {
        let keep: HashSet<u32> = ids.iter().copied().collect();
        let rules = self
            .rules
            .iter()
            .filter(|r| keep.contains(&r.id))
            .enumerate()
            .map(|(i, r)| SynonymRule {
                id: i as u32,
                ..r.clone()
            })
            .collect();
        Self::from_rules(rules)
    }

    /// Every rule with at least one occurrence of its lhs in `s`, with the
    /// ascending start offsets of those occurrences. Sorted by rule id.
    pub fn applicable_rules(&self, s: &[u8]) -> Vec<(u32, Vec<usize>)> {
        let Some(matcher) = &self.lhs_matcher else {
            return Vec::new();
        };
        let mut hits: Vec<(u32, usize)> = Vec::new();
        for m in matcher.find_overlapping_iter(s) {
            for &rule in &self.lhs_rules[m.pattern().as_usize()] {
                hits.push((rule, m.start()));
            }
        }
        hits.sort_unstable();
        let mut out: Vec<(u32, Vec<usize>)> = Vec::new();
        for (rule, start) in hits {
            match out.last_mut() {
                Some((r, offsets)) if *r == rule => offsets.push(start),
                _ => out.push((rule, vec![start])),
            }
        }
        out
    }

    /// Canonical TSV form, one `lhs<TAB>rhs` line per rule.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for r in &self.rules {
            out.push_str(&r.lhs);
            out.push('\t');
            out.push_str(&r.rhs);
            out.push('\n');
        }
        out
    }
}

fn validate_pair(lhs: &str, rhs: &str) -> Result<()> {
    let message = if lhs.is_empty() {
        "empty lhs"
    } else if rhs.is_empty() {
        "empty rhs"
    } else if lhs == rhs {
        "lhs equals rhs"
    } else {
        return Ok(());
    };
    Err(Error::InvalidRule {
        lhs: lhs.to_owned(),
        rhs: rhs.to_owned(),
        message,
    })
}

/// Parses `lhs<TAB>rhs` lines. Blank lines and `#` comments are skipped.
pub fn parse_rules(text: &str) -> Result<RuleSet> {
    let mut pairs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fail = |message: String| Error::Line {
            line: i + 1,
            message,
        };
        let mut fields = line.split('\t');
        let (Some(lhs), Some(rhs), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(fail("expected `lhs<TAB>rhs`".into()));
        };
        validate_pair(lhs, rhs).map_err(|e| fail(e.to_string()))?;
        pairs.push((lhs, rhs));
    }
    RuleSet::from_pairs(pairs)
}

/// Start offsets of every occurrence of `rule.lhs` in `s`, overlapping
/// occurrences included.
pub fn locus_points(rule: &SynonymRule, s: &[u8]) -> Vec<usize> {
    let lhs = rule.lhs.as_bytes();
    if lhs.len() > s.len() {
        return Vec::new();
    }
    (0..=s.len() - lhs.len())
        .filter(|&i| &s[i..i + lhs.len()] == lhs)
        .collect()
}
