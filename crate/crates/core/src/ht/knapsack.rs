//! 0/1 knapsack with interacting items, solved by branch and bound.
//!
//! An item's weight depends on which other items are already in the
//! knapsack: items may share storage units (trie nodes), and a shared unit is
//! paid for once. Each item is described by a [`Footprint`], the set of units
//! it needs plus a fixed cost of its own. The weight of any selection is the
//! size of the union of its units plus the fixed costs, independent of the
//! order in which items were added.

use std::cmp::Ordering;

/// Storage an item needs when expanded.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Footprint {
    /// Sorted, deduplicated ids of possibly shared units.
    pub units: Vec<u32>,
    /// Bytes owned by the item alone.
    pub fixed_bytes: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KnapsackItem {
    pub rule_id: u32,
    pub value: u64,
    /// Bytes when expanded with no interacting item present.
    pub weight: u64,
    /// Bytes when every interacting item is already expanded.
    pub min_weight: u64,
    pub part_id: u32,
}

/// A group of items that only interact with each other.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Part {
    pub id: u32,
    /// Indexes into [`KnapsackProblem::items`].
    pub items: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct KnapsackProblem {
    items: Vec<KnapsackItem>,
    footprints: Vec<Footprint>,
    // Per item: units some other item also needs.
    shared: Vec<Vec<u32>>,
    parts: Vec<Part>,
    unit_bytes: u64,
    unit_count: usize,
}

impl KnapsackProblem {
    /// Builds the problem from `(rule_id, value, footprint)` triples. Weights,
    /// minimum weights and parts are derived from the footprints.
    pub fn new(entries: Vec<(u32, u64, Footprint)>, unit_bytes: u64) -> Self {
        let unit_count = entries
            .iter()
            .flat_map(|(_, _, f)| f.units.iter())
            .map(|&u| u as usize + 1)
            .max()
            .unwrap_or(0);

        let mut uses = vec![0u32; unit_count];
        let mut first_user = vec![usize::MAX; unit_count];
        let mut uf = UnionFind::new(entries.len());
        for (i, (_, _, f)) in entries.iter().enumerate() {
            debug_assert!(f.units.windows(2).all(|w| w[0] < w[1]));
            for &u in &f.units {
                let u = u as usize;
                uses[u] += 1;
                if first_user[u] == usize::MAX {
                    first_user[u] = i;
                } else {
                    uf.union(first_user[u], i);
                }
            }
        }

        // Parts numbered by their smallest item index.
        let mut part_of_root = vec![u32::MAX; entries.len()];
        let mut parts: Vec<Part> = Vec::new();
        let mut items = Vec::with_capacity(entries.len());
        let mut footprints = Vec::with_capacity(entries.len());
        let mut shared = Vec::with_capacity(entries.len());
        for (i, (rule_id, value, f)) in entries.into_iter().enumerate() {
            let root = uf.find(i);
            if part_of_root[root] == u32::MAX {
                part_of_root[root] = parts.len() as u32;
                parts.push(Part {
                    id: parts.len() as u32,
                    items: Vec::new(),
                });
            }
            let part_id = part_of_root[root];
            parts[part_id as usize].items.push(i);
            let private = f.units.iter().filter(|&&u| uses[u as usize] == 1).count() as u64;
            items.push(KnapsackItem {
                rule_id,
                value,
                weight: f.units.len() as u64 * unit_bytes + f.fixed_bytes,
                min_weight: private * unit_bytes + f.fixed_bytes,
                part_id,
            });
            shared.push(
                f.units
                    .iter()
                    .copied()
                    .filter(|&u| uses[u as usize] > 1)
                    .collect(),
            );
            footprints.push(f);
        }
        KnapsackProblem {
            items,
            footprints,
            shared,
            parts,
            unit_bytes,
            unit_count,
        }
    }

    pub fn items(&self) -> &[KnapsackItem] {
        &self.items
    }

    pub fn footprints(&self) -> &[Footprint] {
        &self.footprints
    }

    pub fn parts(&self) -> &[Part] {
        &self.parts
    }

    pub fn unit_bytes(&self) -> u64 {
        self.unit_bytes
    }

    /// Bytes of expanding every item in `selection` (indexes into `items`).
    pub fn joint_weight(&self, selection: &[usize]) -> u64 {
        let mut units: Vec<u32> = selection
            .iter()
            .flat_map(|&i| self.footprints[i].units.iter().copied())
            .collect();
        units.sort_unstable();
        units.dedup();
        units.len() as u64 * self.unit_bytes
            + selection
                .iter()
                .map(|&i| self.footprints[i].fixed_bytes)
                .sum::<u64>()
    }

    /// Bytes of all items together.
    pub fn total_weight(&self) -> u64 {
        let all: Vec<usize> = (0..self.items.len()).collect();
        self.joint_weight(&all)
    }

    /// Additional bytes of adding `item` when `included` are already in the
    /// knapsack. Only included items of the same part can share units, so
    /// the others are skipped.
    pub fn exact_weight(&self, item: usize, included: &[usize]) -> u64 {
        let part = self.items[item].part_id;
        let mut covered: Vec<u32> = included
            .iter()
            .filter(|&&j| j != item && self.items[j].part_id == part)
            .flat_map(|&j| self.footprints[j].units.iter().copied())
            .collect();
        covered.sort_unstable();
        covered.dedup();
        let fresh = self.footprints[item]
            .units
            .iter()
            .filter(|u| covered.binary_search(u).is_err())
            .count() as u64;
        fresh * self.unit_bytes + self.footprints[item].fixed_bytes
    }

    /// Item indexes in branching order: value / min_weight descending, ties
    /// by rule id.
    pub fn branching_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.items.len()).collect();
        order.sort_by(|&a, &b| ratio_desc(&self.items[a], &self.items[b]));
        order
    }
}

fn ratio_desc(a: &KnapsackItem, b: &KnapsackItem) -> Ordering {
    let lhs = a.value as u128 * b.min_weight as u128;
    let rhs = b.value as u128 * a.min_weight as u128;
    rhs.cmp(&lhs).then_with(|| a.rule_id.cmp(&b.rule_id))
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Value bound of a partial solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bound {
    pub value: f64,
    /// Largest integer not above `value`, computed exactly.
    pub floor: u64,
}

/// Search state: the next position in branching order, plus the value and
/// exact bytes of the items included so far.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BranchState {
    pub position: usize,
    pub value: u64,
    pub bytes: u64,
}

/// Precomputed prefix sums over the branching order.
#[derive(Debug, Clone)]
pub struct Bounds {
    order: Vec<usize>,
    values: Vec<u64>,
    min_weights: Vec<u64>,
    weights: Vec<u64>,
    prefix_value: Vec<u64>,
    prefix_min: Vec<u64>,
    prefix_weight: Vec<u64>,
    budget: u64,
}

impl Bounds {
    pub fn new(problem: &KnapsackProblem, budget: u64) -> Self {
        let order = problem.branching_order();
        let values: Vec<u64> = order.iter().map(|&i| problem.items[i].value).collect();
        let min_weights: Vec<u64> = order.iter().map(|&i| problem.items[i].min_weight).collect();
        let weights: Vec<u64> = order.iter().map(|&i| problem.items[i].weight).collect();
        let prefix = |xs: &[u64]| {
            let mut p = Vec::with_capacity(xs.len() + 1);
            p.push(0u64);
            for &x in xs {
                p.push(p.last().unwrap() + x);
            }
            p
        };
        Bounds {
            prefix_value: prefix(&values),
            prefix_min: prefix(&min_weights),
            prefix_weight: prefix(&weights),
            order,
            values,
            min_weights,
            weights,
            budget,
        }
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Fractional bound over the remaining items at their minimum weights.
    /// No completion of `state` can exceed it.
    pub fn upper_bound(&self, state: BranchState) -> Bound {
        let Some(room) = self.budget.checked_sub(state.bytes) else {
            return Bound {
                value: state.value as f64,
                floor: state.value,
            };
        };
        let start = state.position;
        let base = self.prefix_min[start];
        // Last position end such that items start..end all fit whole.
        let end = self.prefix_min[start..].partition_point(|&p| p - base <= room) + start - 1;
        let whole = state.value + self.prefix_value[end] - self.prefix_value[start];
        if end == self.order.len() {
            return Bound {
                value: whole as f64,
                floor: whole,
            };
        }
        let left = room - (self.prefix_min[end] - base);
        let (v, w) = (self.values[end], self.min_weights[end]);
        let num = v as u128 * left as u128;
        Bound {
            value: whole as f64 + v as f64 * left as f64 / w as f64,
            floor: whole + (num / w as u128) as u64,
        }
    }

    /// Greedy completion at the items' standalone weights, stopping at the
    /// first item that does not fit. Returns the value and how many items
    /// were taken; the result is always feasible.
    pub fn lower_bound(&self, state: BranchState) -> (u64, usize) {
        let Some(room) = self.budget.checked_sub(state.bytes) else {
            return (state.value, 0);
        };
        let start = state.position;
        let base = self.prefix_weight[start];
        let end = self.prefix_weight[start..].partition_point(|&p| p - base <= room) + start - 1;
        (
            state.value + self.prefix_value[end] - self.prefix_value[start],
            end - start,
        )
    }

    fn standalone_weight(&self, position: usize) -> u64 {
        self.weights[position]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    /// Indexes into the problem's items, ascending.
    pub selected: Vec<usize>,
    pub excluded: Vec<usize>,
    pub value: u64,
    pub bytes: u64,
    /// False when the node cap stopped the search early.
    pub exact: bool,
    pub nodes: u64,
}

pub const DEFAULT_NODE_CAP: u64 = 10_000_000;

/// Depth-first branch and bound. At each node the child with the larger
/// upper bound is explored first; nodes whose bound cannot beat the
/// incumbent are pruned. Greedy lower-bound packings seed the incumbent, and
/// are what remains if `node_cap` is exhausted.
pub fn solve_knapsack_bb(problem: &KnapsackProblem, budget: u64, node_cap: u64) -> Solution {
    let bounds = Bounds::new(problem, budget);
    let mut search = Search {
        problem,
        bounds: &bounds,
        refcount: vec![0u32; problem.unit_count],
        included: Vec::new(),
        best_value: 0,
        best: Vec::new(),
        nodes: 0,
        cap: node_cap,
        aborted: false,
    };
    search.visit(
        BranchState {
            position: 0,
            value: 0,
            bytes: 0,
        },
        None,
        u64::MAX,
    );
    let mut selected = search.best.clone();
    selected.sort_unstable();
    let excluded = (0..problem.items.len())
        .filter(|i| selected.binary_search(i).is_err())
        .collect();
    let bytes = problem.joint_weight(&selected);
    debug_assert!(bytes <= budget);
    Solution {
        value: search.best_value,
        bytes,
        selected,
        excluded,
        exact: !search.aborted,
        nodes: search.nodes,
    }
}

struct Search<'a> {
    problem: &'a KnapsackProblem,
    bounds: &'a Bounds,
    refcount: Vec<u32>,
    included: Vec<usize>,
    best_value: u64,
    best: Vec<usize>,
    nodes: u64,
    cap: u64,
    aborted: bool,
}

impl Search<'_> {
    fn record(&mut self, value: u64, greedy_from: Option<(usize, usize)>, path_bound: u64) {
        debug_assert!(
            value <= path_bound,
            "upper bound {path_bound} below value {value}"
        );
        if value <= self.best_value {
            return;
        }
        self.best_value = value;
        self.best = self.included.clone();
        if let Some((position, count)) = greedy_from {
            self.best.extend(
                self.bounds.order[position..position + count]
                    .iter()
                    .copied(),
            );
        }
    }

    /// Private units are always fresh; only shared ones need checking.
    fn incremental_bytes(&self, item: usize) -> u64 {
        let fresh = self.problem.shared[item]
            .iter()
            .filter(|&&u| self.refcount[u as usize] == 0)
            .count() as u64;
        fresh * self.problem.unit_bytes + self.problem.items[item].min_weight
    }

    fn include(&mut self, item: usize) {
        for &u in &self.problem.shared[item] {
            self.refcount[u as usize] += 1;
        }
        self.included.push(item);
    }

    fn exclude_last(&mut self, item: usize) {
        for &u in &self.problem.shared[item] {
            self.refcount[u as usize] -= 1;
        }
        let popped = self.included.pop();
        debug_assert_eq!(popped, Some(item));
    }

    /// `ub` is the node's upper bound when the parent already computed it.
    fn visit(&mut self, state: BranchState, ub: Option<Bound>, path_bound: u64) {
        if self.aborted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.cap {
            self.aborted = true;
            return;
        }
        let n = self.bounds.order.len();
        if state.position == n {
            self.record(state.value, None, path_bound);
            return;
        }
        let ub = ub.unwrap_or_else(|| self.bounds.upper_bound(state));
        if ub.floor <= self.best_value {
            return;
        }
        let path_bound = path_bound.min(ub.floor);
        let (lb, taken) = self.bounds.lower_bound(state);
        if lb > self.best_value {
            self.record(lb, Some((state.position, taken)), path_bound);
        }

        let item = self.bounds.order[state.position];
        let add = self.incremental_bytes(item);
        debug_assert!(add <= self.bounds.standalone_weight(state.position));
        let with = BranchState {
            position: state.position + 1,
            value: state.value + self.problem.items[item].value,
            bytes: state.bytes + add,
        };
        let without = BranchState {
            position: state.position + 1,
            ..state
        };
        let ub_without = self.bounds.upper_bound(without);
        let ub_with = (with.bytes <= self.bounds.budget).then(|| self.bounds.upper_bound(with));
        match ub_with {
            Some(ub_with) if ub_with.value >= ub_without.value => {
                self.include(item);
                self.visit(with, Some(ub_with), path_bound);
                self.exclude_last(item);
                self.visit(without, Some(ub_without), path_bound);
            }
            _ => {
                self.visit(without, Some(ub_without), path_bound);
                if let Some(ub_with) = ub_with {
                    self.include(item);
                    self.visit(with, Some(ub_with), path_bound);
                    self.exclude_last(item);
                }
            }
        }
    }
}
