//! Query consumption shared by all index structures.
//!
//! A lookup state is a dictionary-trie node plus the number of query bytes
//! consumed to reach it. From each state a literal step follows the next
//! query byte along the dictionary, and a structure-specific rule step jumps
//! over a complete rhs to the node ending the matching lhs. Every step
//! consumes at least one byte, so states are processed in query order and
//! each keeps the smallest witness that reaches it. The states left when the
//! query is exhausted seed the best-first enumeration.

use crate::completion::{Completion, Rewrite, Witness};
use crate::trie::{NodeId, Trie};

/// A rule step: rule `rule` matched the query up to byte `end` and lands on
/// dictionary node `target`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Step {
    pub target: NodeId,
    pub end: usize,
    pub rule: u32,
}

pub(crate) fn lookup<F>(trie: &Trie, query: &[u8], k: usize, mut rule_steps: F) -> Vec<Completion>
where
    F: FnMut(NodeId, usize, &mut Vec<Step>),
{
    if k == 0 {
        return Vec::new();
    }
    let seeds = consume(trie, query, &mut rule_steps);
    trie.best_first_topk(seeds, k)
}

fn consume<F>(trie: &Trie, query: &[u8], rule_steps: &mut F) -> Vec<(NodeId, Witness)>
where
    F: FnMut(NodeId, usize, &mut Vec<Step>),
{
    let n = query.len();
    let mut states: Vec<Vec<(NodeId, Witness)>> = vec![Vec::new(); n + 1];
    states[0].push((trie.root(), Witness::empty()));
    let mut steps = Vec::new();
    for i in 0..n {
        let current = std::mem::take(&mut states[i]);
        for (node, witness) in current {
            if let Some(c) = trie.child(node, query[i]) {
                if trie.node(c).is_dict() {
                    relax(&mut states[i + 1], c, witness.clone());
                }
            }
            steps.clear();
            rule_steps(node, i, &mut steps);
            for s in &steps {
                debug_assert!(s.end > i && s.end <= n);
                let w = witness.extended(Rewrite {
                    rule: s.rule,
                    start: i,
                    end: s.end,
                });
                relax(&mut states[s.end], s.target, w);
            }
        }
    }
    std::mem::take(&mut states[n])
}

fn relax(states: &mut Vec<(NodeId, Witness)>, node: NodeId, witness: Witness) {
    match states.iter_mut().find(|(n, _)| *n == node) {
        Some((_, cur)) => {
            if witness < *cur {
                *cur = witness;
            }
        }
        None => states.push((node, witness)),
    }
}
