//! Knapsack items for choosing which rules to expand.
//!
//! All rule branches are simulated at once on a virtual copy of the
//! dictionary trie. Each node a branch would create gets a unit id; a rule's
//! footprint is the units on its branches plus its link bytes. Two rules
//! interact exactly when their footprints share a unit, and the bytes of
//! expanding any subset of rules is the size of the union of footprints.

use std::collections::HashMap;

use crate::build::Application;
use crate::rules::RuleSet;
use crate::trie::{CostModel, NodeId, Trie};

use super::knapsack::{Footprint, KnapsackProblem};

/// What an item's value counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ValueMode {
    /// Every (string, offset) occurrence of the lhs.
    #[default]
    Applications,
    /// Every dictionary string containing the lhs at least once.
    Strings,
}

/// A node in the simulation: an existing trie node or a would-be fresh one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum SimNode {
    Existing(NodeId),
    Fresh(u32),
}

/// Footprints of every rule with at least one application, in rule id order.
pub(crate) fn footprints(
    trie: &Trie,
    rules: &RuleSet,
    applications: &[Application],
    model: &CostModel,
) -> Vec<(u32, Footprint)> {
    let mut fresh: HashMap<(SimNode, u8), u32> = HashMap::new();
    let mut per_rule: Vec<Option<Footprint>> = vec![None; rules.len()];
    for app in applications {
        let fp = per_rule[app.rule as usize].get_or_insert_with(Footprint::default);
        let mut at = SimNode::Existing(app.attach);
        for &b in rules.rules()[app.rule as usize].rhs.as_bytes() {
            at = match at {
                SimNode::Existing(n) => match trie.child(n, b) {
                    Some(c) => SimNode::Existing(c),
                    None => fresh_child(&mut fresh, at, b),
                },
                SimNode::Fresh(_) => fresh_child(&mut fresh, at, b),
            };
            if let SimNode::Fresh(u) = at {
                fp.units.push(u);
            }
        }
        fp.fixed_bytes += model.per_link_bytes as u64;
    }
    per_rule
        .into_iter()
        .enumerate()
        .filter_map(|(id, fp)| {
            fp.map(|mut fp| {
                fp.units.sort_unstable();
                fp.units.dedup();
                (id as u32, fp)
            })
        })
        .collect()
}

fn fresh_child(fresh: &mut HashMap<(SimNode, u8), u32>, parent: SimNode, b: u8) -> SimNode {
    let next = fresh.len() as u32;
    SimNode::Fresh(*fresh.entry((parent, b)).or_insert(next))
}

/// The knapsack problem over every rule with an application.
pub(crate) fn compute_problem(
    trie: &Trie,
    rules: &RuleSet,
    applications: &[Application],
    occurrence_counts: &[u64],
    string_counts: &[u64],
    model: &CostModel,
    mode: ValueMode,
) -> KnapsackProblem {
    let counts = match mode {
        ValueMode::Applications => occurrence_counts,
        ValueMode::Strings => string_counts,
    };
    let entries = footprints(trie, rules, applications, model)
        .into_iter()
        .map(|(id, fp)| (id, counts[id as usize], fp))
        .collect();
    KnapsackProblem::new(entries, model.attached_node_bytes())
}
