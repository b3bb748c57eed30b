//! Dictionary trie construction and rule application sites shared by the
//! index builders.

use crate::completion::ScoredString;
use crate::dictionary;
use crate::error::{Error, Result};
use crate::rules::RuleSet;
use crate::trie::{NodeId, SynonymLink, Trie};

/// One place where a rule can be expanded: the lhs occurrence starts right
/// below `attach` and ends at `target` in the dictionary trie.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Application {
    pub rule: u32,
    pub attach: NodeId,
    pub target: NodeId,
}

/// Dictionary trie plus every distinct application site, in dictionary
/// order, then rule id, then offset.
#[derive(Debug, Clone)]
pub(crate) struct Prepared {
    pub trie: Trie,
    pub applications: Vec<Application>,
    /// Per rule: number of (string, offset) pairs where its lhs occurs.
    pub occurrence_counts: Vec<u64>,
    /// Per rule: number of dictionary strings containing its lhs.
    pub string_counts: Vec<u64>,
}

pub(crate) fn prepare(dict: &[ScoredString], rules: &RuleSet) -> Result<Prepared> {
    let entries = dictionary::normalize(dict)?;
    if entries.is_empty() {
        return Err(Error::EmptyDictionary);
    }
    let mut trie = Trie::new();
    for e in &entries {
        trie.insert(e.text.as_bytes(), e.score)?;
    }
    trie.recompute_max_scores();

    let mut occurrence_counts = vec![0u64; rules.len()];
    let mut string_counts = vec![0u64; rules.len()];
    let mut applications = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut path: Vec<NodeId> = Vec::new();
    for e in &entries {
        let s = e.text.as_bytes();
        let found = rules.applicable_rules(s);
        if found.is_empty() {
            continue;
        }
        path.clear();
        path.push(trie.root());
        for &b in s {
            let next = trie
                .child(*path.last().unwrap(), b)
                .expect("string was inserted");
            path.push(next);
        }
        for (rule, offsets) in found {
            let lhs_len = rules.rules()[rule as usize].lhs.len();
            string_counts[rule as usize] += 1;
            occurrence_counts[rule as usize] += offsets.len() as u64;
            for off in offsets {
                let app = Application {
                    rule,
                    attach: path[off],
                    target: path[off + lhs_len],
                };
                if seen.insert((rule, app.target)) {
                    applications.push(app);
                }
            }
        }
    }
    Ok(Prepared {
        trie,
        applications,
        occurrence_counts,
        string_counts,
    })
}

pub(crate) fn link_for(rules: &RuleSet, app: &Application) -> SynonymLink {
    SynonymLink {
        target: app.target,
        delta: rules.rules()[app.rule as usize].delta(),
        rule: app.rule,
    }
}

pub(crate) fn rhs_lengths(rules: &RuleSet) -> Vec<u32> {
    rules.rules().iter().map(|r| r.rhs.len() as u32).collect()
}
