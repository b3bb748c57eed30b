//! Twin tries: a dictionary trie and a separate rule trie of rhs values.
//!
//! Each rhs-end node of the rule trie holds one link per place where the
//! rule's lhs occurs in the dictionary. At lookup time every suffix of the
//! unmatched query is probed in the rule trie, and a link is taken only if
//! climbing `len(lhs)` levels from its target lands on the current
//! dictionary node.

use crate::build::{self, Application};
use crate::completion::{Completion, ScoredString};
use crate::error::Result;
use crate::rules::RuleSet;
use crate::search::{self, Step};
use crate::trie::{CostModel, NodeId, SynonymLink, Trie};

#[derive(Debug, Clone)]
pub struct TwinTries {
    dict: Trie,
    rule_trie: Trie,
    rules: RuleSet,
    rhs_len: Vec<u32>,
}

/// Builds twin tries over `dict` and `rules`.
///
/// Rules with no occurrence in the dictionary are left out of the rule trie:
/// their rhs could never lead anywhere.
pub fn build_tt(dict: &[ScoredString], rules: &RuleSet) -> Result<TwinTries> {
    let prepared = build::prepare(dict, rules)?;
    let mut rule_trie = Trie::new();
    add_rule_links(&mut rule_trie, rules, &prepared.applications);
    Ok(TwinTries {
        dict: prepared.trie,
        rule_trie,
        rules: rules.clone(),
        rhs_len: build::rhs_lengths(rules),
    })
}

pub(crate) fn add_rule_links<'a>(
    rule_trie: &mut Trie,
    rules: &RuleSet,
    applications: impl IntoIterator<Item = &'a Application>,
) {
    for app in applications {
        let rhs = rules.rules()[app.rule as usize].rhs.as_bytes();
        let (end, _) = rule_trie.extend_path(rule_trie.root(), rhs);
        rule_trie.add_link(end, build::link_for(rules, app));
    }
}

/// True iff climbing `rhs_len + link.delta` levels from the link target
/// reaches `candidate`.
pub fn validate_link(dict: &Trie, link: &SynonymLink, rhs_len: u32, candidate: NodeId) -> bool {
    let levels = rhs_len as i64 + link.delta as i64;
    if levels < 0 {
        return false;
    }
    dict.ancestor(link.target, levels as u32) == Some(candidate)
}

/// Rule steps through a rule trie: every complete rhs starting at `at`
/// whose link validates against `node`.
pub(crate) fn probe_rule_trie(
    dict: &Trie,
    rule_trie: &Trie,
    node: NodeId,
    query: &[u8],
    at: usize,
    out: &mut Vec<Step>,
) {
    let mut r = rule_trie.root();
    for (d, &b) in query[at..].iter().enumerate() {
        let Some(next) = rule_trie.child(r, b) else {
            return;
        };
        r = next;
        let rhs_len = d as u32 + 1;
        for link in rule_trie.node(r).links() {
            if validate_link(dict, link, rhs_len, node) {
                out.push(Step {
                    target: link.target,
                    end: at + rhs_len as usize,
                    rule: link.rule,
                });
            }
        }
    }
}

pub(crate) fn rule_trie_bytes(rule_trie: &Trie, model: &CostModel) -> u64 {
    if rule_trie.is_empty() {
        0
    } else {
        rule_trie.size_bytes(model)
    }
}

impl TwinTries {
    pub fn topk(&self, query: &str, k: usize) -> Vec<Completion> {
        let q = query.as_bytes();
        search::lookup(&self.dict, q, k, |node, at, out| {
            probe_rule_trie(&self.dict, &self.rule_trie, node, q, at, out)
        })
    }

    pub fn dict_trie(&self) -> &Trie {
        &self.dict
    }

    pub fn rule_trie(&self) -> &Trie {
        &self.rule_trie
    }

    pub fn rules(&self) -> &RuleSet {
        &self.rules
    }

    pub fn rhs_len(&self, rule: u32) -> u32 {
        self.rhs_len[rule as usize]
    }

    /// Dictionary trie plus rule trie; an empty rule trie costs nothing.
    pub fn size_bytes(&self, model: &CostModel) -> u64 {
        self.dict.size_bytes(model) + rule_trie_bytes(&self.rule_trie, model)
    }
}
