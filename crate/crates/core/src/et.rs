//! Expansion trie: rhs branches grafted directly onto the dictionary trie.
//!
//! For every place a rule's lhs occurs, the rhs is inserted below the node
//! preceding the occurrence and its last node links back to the node ending
//! the lhs. Nodes created this way are synonym-only: they score 0 and are
//! never enumerated. Branches reuse whatever nodes already carry the same
//! labels, dictionary or synonym.

use crate::build::{self, Application};
use crate::completion::{Completion, ScoredString};
use crate::error::Result;
use crate::rules::RuleSet;
use crate::search::{self, Step};
use crate::trie::{CostModel, NodeId, Trie};

#[derive(Debug, Clone)]
pub struct ExpansionTrie {
    trie: Trie,
    rules: RuleSet,
    rhs_len: Vec<u32>,
    max_branch: usize,
}

pub fn build_et(dict: &[ScoredString], rules: &RuleSet) -> Result<ExpansionTrie> {
    let prepared = build::prepare(dict, rules)?;
    let mut trie = prepared.trie;
    let max_branch = expand(&mut trie, rules, &prepared.applications);
    trie.recompute_max_scores();
    Ok(ExpansionTrie {
        trie,
        rules: rules.clone(),
        rhs_len: build::rhs_lengths(rules),
        max_branch,
    })
}

/// Grafts the rhs branch of every application and returns the longest rhs
/// expanded. Max scores must be recomputed afterwards.
pub(crate) fn expand<'a>(
    trie: &mut Trie,
    rules: &RuleSet,
    applications: impl IntoIterator<Item = &'a Application>,
) -> usize {
    let mut max_branch = 0;
    for app in applications {
        let rhs = rules.rules()[app.rule as usize].rhs.as_bytes();
        let (end, _) = trie.extend_path(app.attach, rhs);
        trie.add_link(end, build::link_for(rules, app));
        max_branch = max_branch.max(rhs.len());
    }
    max_branch
}

/// Rule steps through grafted branches: walk the query below `node` and
/// take links whose branch was attached exactly at `node`.
pub(crate) fn walk_branches(
    trie: &Trie,
    rhs_len: &[u32],
    max_branch: usize,
    node: NodeId,
    query: &[u8],
    at: usize,
    out: &mut Vec<Step>,
) {
    let base = trie.node(node).depth();
    let mut x = node;
    for (d, &b) in query[at..].iter().take(max_branch).enumerate() {
        let Some(next) = trie.child(x, b) else {
            return;
        };
        x = next;
        let len = d as u32 + 1;
        for link in trie.node(x).links() {
            if rhs_len[link.rule as usize] == len {
                debug_assert_eq!(trie.node(x).depth() - len, base);
                out.push(Step {
                    target: link.target,
                    end: at + len as usize,
                    rule: link.rule,
                });
            }
        }
    }
}

impl ExpansionTrie {
    pub fn topk(&self, query: &str, k: usize) -> Vec<Completion> {
        let q = query.as_bytes();
        search::lookup(&self.trie, q, k, |node, at, out| {
            walk_branches(&self.trie, &self.rhs_len, self.max_branch, node, q, at, out)
        })
    }

    pub fn trie(&self) -> &Trie {
        &self.trie
    }

    pub fn rules(&self) -> &RuleSet {
        &self.rules
    }

    pub fn size_bytes(&self, model: &CostModel) -> u64 {
        self.trie.size_bytes(model)
    }

    /// Number of synonym-only nodes.
    pub fn synonym_node_count(&self) -> usize {
        self.trie
            .node_ids()
            .filter(|&n| !self.trie.node(n).is_dict())
            .count()
    }
}
