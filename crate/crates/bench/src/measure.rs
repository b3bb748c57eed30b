//! Space accounting and structural probes.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use syncomplete::{CostModel, Index, RuleSet, ScoredString, Trie};

/// Where the bytes go. Dictionary nodes include the child references their
/// parents hold; expanded covers synonym nodes and links inside the
/// dictionary trie; unexpanded is the whole rule trie.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SpaceBreakdown {
    pub dictionary: u64,
    pub expanded: u64,
    pub unexpanded: u64,
}

impl SpaceBreakdown {
    pub fn total(&self) -> u64 {
        self.dictionary + self.expanded + self.unexpanded
    }
}

/// Worst-case shape parameters of a built index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Probes {
    /// Most children of a node in the dictionary trie.
    pub m: usize,
    /// Most children of a node in the rule trie.
    pub n: usize,
    /// Most links held for one rule.
    pub s: usize,
    /// Most rules applicable to one dictionary string.
    pub t: usize,
    /// Longest dictionary string in bytes.
    pub l: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructureStats {
    pub structure: String,
    pub string_count: usize,
    pub rule_count: usize,
    pub node_count: usize,
    pub link_count: usize,
    pub bytes_total: u64,
    pub bytes_per_string: f64,
    pub breakdown: SpaceBreakdown,
    pub build_millis: f64,
    pub probes: Probes,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expanded_rules: Option<usize>,
    /// False if rule selection stopped at its node cap.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub selection_exact: Option<bool>,
}

fn tries(index: &Index) -> (&Trie, &Trie) {
    match index {
        Index::Tt(x) => (x.dict_trie(), x.rule_trie()),
        Index::Et(x) => (x.trie(), &EMPTY),
        Index::Ht(x) => (x.trie(), x.rule_trie()),
    }
}

static EMPTY: std::sync::LazyLock<Trie> = std::sync::LazyLock::new(Trie::new);

pub fn breakdown(index: &Index, model: &CostModel) -> SpaceBreakdown {
    let (main, rule_trie) = tries(index);
    let dict_nodes = main.node_ids().filter(|&n| main.node(n).is_dict()).count() as u64;
    let syn_nodes = main.len() as u64 - dict_nodes;
    SpaceBreakdown {
        dictionary: dict_nodes * model.node_bytes()
            + (dict_nodes - 1) * model.per_child_ref_bytes as u64,
        expanded: syn_nodes * model.attached_node_bytes()
            + main.link_count() as u64 * model.per_link_bytes as u64,
        unexpanded: if rule_trie.is_empty() {
            0
        } else {
            rule_trie.size_bytes(model)
        },
    }
}

/// Stats of `index` built from `dict` (as given to the builder).
pub fn measure(
    label: &str,
    index: &Index,
    dict: &[ScoredString],
    model: &CostModel,
    build_millis: f64,
) -> StructureStats {
    let (main, rule_trie) = tries(index);
    let rules = index.rules();
    let breakdown = breakdown(index, model);
    let bytes_total = index.size_bytes(model);
    debug_assert_eq!(breakdown.total(), bytes_total);
    let strings = main
        .node_ids()
        .filter(|&n| main.node(n).terminal_score().is_some())
        .count();
    let (alpha, expanded_rules, selection_exact) = match index {
        Index::Ht(h) => (
            h.report().alpha,
            Some(h.selected().len()),
            Some(h.report().exact),
        ),
        _ => (None, None, None),
    };
    StructureStats {
        structure: label.to_owned(),
        string_count: strings,
        rule_count: rules.len(),
        node_count: main.len()
            + if rule_trie.is_empty() {
                0
            } else {
                rule_trie.len()
            },
        link_count: main.link_count() + rule_trie.link_count(),
        bytes_total,
        bytes_per_string: bytes_total as f64 / strings.max(1) as f64,
        breakdown,
        build_millis,
        probes: probes(main, rule_trie, rules, dict),
        alpha,
        expanded_rules,
        selection_exact,
    }
}

fn probes(main: &Trie, rule_trie: &Trie, rules: &RuleSet, dict: &[ScoredString]) -> Probes {
    let max_children = |t: &Trie| {
        t.node_ids()
            .map(|n| t.node(n).children().len())
            .max()
            .unwrap_or(0)
    };
    let mut links: HashMap<u32, usize> = HashMap::new();
    for t in [main, rule_trie] {
        for n in t.node_ids() {
            for l in t.node(n).links() {
                *links.entry(l.rule).or_default() += 1;
            }
        }
    }
    Probes {
        m: max_children(main),
        n: max_children(rule_trie),
        s: links.values().copied().max().unwrap_or(0),
        t: dict
            .iter()
            .map(|s| rules.applicable_rules(s.text.as_bytes()).len())
            .max()
            .unwrap_or(0),
        l: dict.iter().map(|s| s.text.len()).max().unwrap_or(0),
    }
}
