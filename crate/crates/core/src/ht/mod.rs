//! Hybrid tries: expand the most useful rules into the dictionary trie
//! under a byte budget and keep the rest in a rule trie.
//!
//! Choosing the rules is a 0/1 knapsack whose item weights interact, since
//! branches of different rules can share nodes. See [`knapsack`].

pub mod items;
pub mod knapsack;

use crate::build::{self, Application};
use crate::completion::{Completion, ScoredString};
use crate::error::{Error, Result};
use crate::et;
use crate::rules::RuleSet;
use crate::search;
use crate::trie::{CostModel, Trie};
use crate::tt;

pub use items::ValueMode;
pub use knapsack::{
    solve_knapsack_bb, Bound, Bounds, BranchState, Footprint, KnapsackItem, KnapsackProblem, Part,
    Solution, DEFAULT_NODE_CAP,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HtOptions {
    pub model: CostModel,
    pub value_mode: ValueMode,
    pub node_cap: u64,
}

impl Default for HtOptions {
    fn default() -> Self {
        HtOptions {
            model: CostModel::default(),
            value_mode: ValueMode::default(),
            node_cap: DEFAULT_NODE_CAP,
        }
    }
}

/// Outcome of rule selection.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionReport {
    pub alpha: Option<f64>,
    pub budget_bytes: u64,
    /// Bytes of expanding every applicable rule.
    pub full_expansion_bytes: u64,
    /// Bytes the selected branches and their links actually take.
    pub expansion_bytes: u64,
    pub value: u64,
    pub exact: bool,
    pub search_nodes: u64,
}

#[derive(Debug, Clone)]
pub struct HybridTries {
    trie: Trie,
    rule_trie: Trie,
    rules: RuleSet,
    rhs_len: Vec<u32>,
    max_branch: usize,
    selected: Vec<u32>,
    report: SelectionReport,
}

/// Items of the rule-selection knapsack for `dict` and `rules`.
pub fn compute_items(
    dict: &[ScoredString],
    rules: &RuleSet,
    model: &CostModel,
    mode: ValueMode,
) -> Result<KnapsackProblem> {
    let p = build::prepare(dict, rules)?;
    Ok(items::compute_problem(
        &p.trie,
        rules,
        &p.applications,
        &p.occurrence_counts,
        &p.string_counts,
        model,
        mode,
    ))
}

/// Builds hybrid tries whose expansions take at most `alpha` of the bytes
/// needed to expand every rule.
pub fn build_ht(
    dict: &[ScoredString],
    rules: &RuleSet,
    alpha: f64,
    options: &HtOptions,
) -> Result<HybridTries> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidAlpha(alpha));
    }
    let p = build::prepare(dict, rules)?;
    let problem = items::compute_problem(
        &p.trie,
        rules,
        &p.applications,
        &p.occurrence_counts,
        &p.string_counts,
        &options.model,
        options.value_mode,
    );
    let full = problem.total_weight();
    let budget = (alpha * full as f64).floor() as u64;
    // Floating point must not leave the last byte out at alpha = 1.
    let budget = if alpha >= 1.0 { full } else { budget.min(full) };
    let solution = solve_knapsack_bb(&problem, budget, options.node_cap);
    let selected: Vec<u32> = solution
        .selected
        .iter()
        .map(|&i| problem.items()[i].rule_id)
        .collect();
    let report = SelectionReport {
        alpha: Some(alpha),
        budget_bytes: budget,
        full_expansion_bytes: full,
        expansion_bytes: solution.bytes,
        value: solution.value,
        exact: solution.exact,
        search_nodes: solution.nodes,
    };
    Ok(assemble(p, rules, selected, report))
}

/// Builds hybrid tries expanding exactly the rules in `selected`.
pub fn build_ht_with_selection(
    dict: &[ScoredString],
    rules: &RuleSet,
    selected: &[u32],
    model: &CostModel,
) -> Result<HybridTries> {
    if let Some(&bad) = selected.iter().find(|&&id| id as usize >= rules.len()) {
        return Err(Error::UnknownRule(bad));
    }
    let p = build::prepare(dict, rules)?;
    let problem = items::compute_problem(
        &p.trie,
        rules,
        &p.applications,
        &p.occurrence_counts,
        &p.string_counts,
        model,
        ValueMode::default(),
    );
    let mut chosen: Vec<u32> = selected.to_vec();
    chosen.sort_unstable();
    chosen.dedup();
    let idx: Vec<usize> = (0..problem.items().len())
        .filter(|&i| chosen.binary_search(&problem.items()[i].rule_id).is_ok())
        .collect();
    let report = SelectionReport {
        alpha: None,
        budget_bytes: problem.joint_weight(&idx),
        full_expansion_bytes: problem.total_weight(),
        expansion_bytes: problem.joint_weight(&idx),
        value: idx.iter().map(|&i| problem.items()[i].value).sum(),
        exact: true,
        search_nodes: 0,
    };
    Ok(assemble(p, rules, chosen, report))
}

fn assemble(
    p: build::Prepared,
    rules: &RuleSet,
    mut selected: Vec<u32>,
    report: SelectionReport,
) -> HybridTries {
    selected.sort_unstable();
    let (expanded, kept): (Vec<&Application>, Vec<&Application>) = p
        .applications
        .iter()
        .partition(|a| selected.binary_search(&a.rule).is_ok());
    let mut trie = p.trie;
    let max_branch = et::expand(&mut trie, rules, expanded);
    trie.recompute_max_scores();
    let mut rule_trie = Trie::new();
    tt::add_rule_links(&mut rule_trie, rules, kept);
    HybridTries {
        trie,
        rule_trie,
        rules: rules.clone(),
        rhs_len: build::rhs_lengths(rules),
        max_branch,
        selected,
        report,
    }
}

impl HybridTries {
    pub fn topk(&self, query: &str, k: usize) -> Vec<Completion> {
        let q = query.as_bytes();
        search::lookup(&self.trie, q, k, |node, at, out| {
            et::walk_branches(&self.trie, &self.rhs_len, self.max_branch, node, q, at, out);
            tt::probe_rule_trie(&self.trie, &self.rule_trie, node, q, at, out);
        })
    }

    /// Dictionary trie with the selected rules' branches.
    pub fn trie(&self) -> &Trie {
        &self.trie
    }

    /// Rule trie of the rules left unexpanded.
    pub fn rule_trie(&self) -> &Trie {
        &self.rule_trie
    }

    pub fn rules(&self) -> &RuleSet {
        &self.rules
    }

    /// Expanded rule ids, ascending.
    pub fn selected(&self) -> &[u32] {
        &self.selected
    }

    pub fn report(&self) -> &SelectionReport {
        &self.report
    }

    pub fn budget_bytes(&self) -> u64 {
        self.report.budget_bytes
    }

    pub fn size_bytes(&self, model: &CostModel) -> u64 {
        self.trie.size_bytes(model) + tt::rule_trie_bytes(&self.rule_trie, model)
    }
}
