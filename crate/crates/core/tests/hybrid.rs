mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use syncomplete::ht::{
    compute_items, solve_knapsack_bb, Bounds, BranchState, Footprint, KnapsackProblem, ValueMode,
    DEFAULT_NODE_CAP,
};
use syncomplete::tt::validate_link;
use syncomplete::{
    build_et, build_ht, build_ht_with_selection, build_tt, CostModel, HtOptions, RuleSet,
    ScoredString, Trie,
};

/// Bytes added to the plain dictionary trie by grafting the rhs of every
/// rule in `selected` at each lhs occurrence, computed directly on a trie.
fn simulated_expansion_bytes(
    dict: &[ScoredString],
    rules: &RuleSet,
    selected: &[u32],
    model: &CostModel,
) -> u64 {
    let tt = build_tt(dict, rules).unwrap();
    let mut trie: Trie = tt.dict_trie().clone();
    let before = trie.size_bytes(model);
    for &id in selected {
        let r = rules.get(id).unwrap();
        for s in dict {
            let bytes = s.text.as_bytes();
            for off in 0..bytes.len() {
                if bytes[off..].starts_with(r.lhs.as_bytes()) {
                    let attach = trie.find(&bytes[..off]).unwrap();
                    let target = trie.find(&bytes[..off + r.lhs.len()]).unwrap();
                    let (end, _) = trie.extend_path(attach, r.rhs.as_bytes());
                    trie.add_link(
                        end,
                        syncomplete::SynonymLink {
                            target,
                            delta: r.delta(),
                            rule: id,
                        },
                    );
                }
            }
        }
    }
    trie.size_bytes(model) - before
}

fn instance(seed: u64, strings: usize, rules: usize) -> (Vec<ScoredString>, RuleSet) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dict = common::random_dict(&mut rng, strings, 8);
    let rules = common::random_rules(&mut rng, &dict, rules);
    (dict, rules)
}

fn rule_ids(p: &KnapsackProblem, idx: &[usize]) -> Vec<u32> {
    idx.iter().map(|&i| p.items()[i].rule_id).collect()
}

#[test]
fn bb_matches_exhaustive_on_trie_instances() {
    let model = CostModel::default();
    let mut checked = 0;
    let mut seed = 0u64;
    while checked < 200 {
        seed += 1;
        let (dict, rules) = instance(seed, 12, 15);
        let p = compute_items(&dict, &rules, &model, ValueMode::Applications).unwrap();
        let n = p.items().len();
        if n == 0 || n > 15 || p.parts().len() > 5 {
            continue;
        }
        checked += 1;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let budget = rng.gen_range(0..=p.total_weight());
        let mut best = 0u64;
        for mask in 0u32..(1 << n) {
            let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let w = simulated_expansion_bytes(&dict, &rules, &rule_ids(&p, &idx), &model);
            assert_eq!(w, p.joint_weight(&idx), "seed {seed} mask {mask}");
            if w <= budget {
                best = best.max(idx.iter().map(|&i| p.items()[i].value).sum());
            }
        }
        let s = solve_knapsack_bb(&p, budget, DEFAULT_NODE_CAP);
        assert!(s.exact);
        assert_eq!(s.value, best, "seed {seed} budget {budget}");
        let used = simulated_expansion_bytes(&dict, &rules, &rule_ids(&p, &s.selected), &model);
        assert!(used <= budget, "seed {seed}: {used} > {budget}");
    }
}

fn random_problem(rng: &mut ChaCha8Rng) -> KnapsackProblem {
    let n = rng.gen_range(1..=15);
    let pool = rng.gen_range(1..=20u32);
    let entries = (0..n)
        .map(|i| {
            let mut units: Vec<u32> = (0..rng.gen_range(0..5))
                .map(|_| rng.gen_range(0..pool))
                .collect();
            units.sort_unstable();
            units.dedup();
            let fp = Footprint {
                units,
                fixed_bytes: rng.gen_range(1..20),
            };
            (i as u32, rng.gen_range(1..30), fp)
        })
        .collect();
    KnapsackProblem::new(entries, rng.gen_range(1..30))
}

#[test]
fn bb_and_bounds_against_exhaustive_on_abstract_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for round in 0..400 {
        let p = random_problem(&mut rng);
        let n = p.items().len();
        let budget = rng.gen_range(0..=p.total_weight());
        let mut best = 0;
        for mask in 0u32..(1 << n) {
            let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            if p.joint_weight(&idx) <= budget {
                best = best.max(idx.iter().map(|&i| p.items()[i].value).sum());
            }
        }
        let s = solve_knapsack_bb(&p, budget, DEFAULT_NODE_CAP);
        assert_eq!(s.value, best, "round {round}");
        assert!(p.joint_weight(&s.selected) <= budget);

        let bounds = Bounds::new(&p, budget);
        let root = BranchState {
            position: 0,
            value: 0,
            bytes: 0,
        };
        assert!(bounds.upper_bound(root).floor >= best);
        let (lb, taken) = bounds.lower_bound(root);
        assert!(lb <= best);
        let greedy: Vec<usize> = bounds.order()[..taken].to_vec();
        assert!(p.joint_weight(&greedy) <= budget);
    }
}

#[test]
fn exact_weight_matches_simulation() {
    let model = CostModel::default();
    for seed in 0..60 {
        let (dict, rules) = instance(500 + seed, 15, 10);
        let p = compute_items(&dict, &rules, &model, ValueMode::Applications).unwrap();
        let n = p.items().len();
        for i in 0..n {
            let alone = simulated_expansion_bytes(&dict, &rules, &rule_ids(&p, &[i]), &model);
            assert_eq!(p.exact_weight(i, &[]), alone);
            assert_eq!(p.items()[i].weight, alone);
            assert!(p.items()[i].min_weight > 0 && p.items()[i].min_weight <= alone);
            let others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
            let base = simulated_expansion_bytes(&dict, &rules, &rule_ids(&p, &others), &model);
            let all: Vec<usize> = (0..n).collect();
            let full = simulated_expansion_bytes(&dict, &rules, &rule_ids(&p, &all), &model);
            assert_eq!(p.exact_weight(i, &others), full - base);
            assert_eq!(p.items()[i].min_weight, full - base);
        }
    }
}

#[test]
fn parts_are_components_of_pairwise_interaction() {
    let model = CostModel::default();
    for seed in 0..60 {
        let (dict, rules) = instance(900 + seed, 15, 10);
        let p = compute_items(&dict, &rules, &model, ValueMode::Applications).unwrap();
        let n = p.items().len();
        let w =
            |idx: &[usize]| simulated_expansion_bytes(&dict, &rules, &rule_ids(&p, idx), &model);
        // Components by repeated relaxation over the pairwise relation.
        let mut comp: Vec<usize> = (0..n).collect();
        let interacts: Vec<Vec<bool>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| i != j && w(&[i]) + w(&[j]) > w(&[i, j]))
                    .collect()
            })
            .collect();
        loop {
            let mut changed = false;
            for i in 0..n {
                for j in 0..n {
                    if interacts[i][j] && comp[i] != comp[j] {
                        let m = comp[i].min(comp[j]);
                        comp[i] = m;
                        comp[j] = m;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        for i in 0..n {
            for j in 0..n {
                let same_part = p.items()[i].part_id == p.items()[j].part_id;
                assert_eq!(same_part, comp[i] == comp[j], "seed {seed} items {i} {j}");
            }
        }
    }
}

#[test]
fn either_order_gives_same_total() {
    let dict = [ScoredString::new("abcde", 1)];
    let rules = syncomplete::parse_rules("abc\tmn\nabc\tmnp").unwrap();
    let model = CostModel::default();
    let p = compute_items(&dict, &rules, &model, ValueMode::Applications).unwrap();
    assert_eq!(
        p.exact_weight(0, &[]) + p.exact_weight(1, &[0]),
        p.exact_weight(1, &[]) + p.exact_weight(0, &[1])
    );
    assert_eq!(p.exact_weight(1, &[0]), model.attached_node_bytes() + 12);
}

#[test]
fn endpoints_budget_and_links() {
    let model = CostModel::default();
    let opts = HtOptions::default();
    for seed in 0..80 {
        let (dict, rules) = instance(2000 + seed, 40, 15);
        let tt = build_tt(&dict, &rules).unwrap();
        let et = build_et(&dict, &rules).unwrap();
        let dict_bytes = tt.dict_trie().size_bytes(&model);
        for alpha in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let ht = build_ht(&dict, &rules, alpha, &opts).unwrap();
            let r = ht.report();
            assert!(r.expansion_bytes <= r.budget_bytes);
            assert_eq!(
                r.expansion_bytes,
                simulated_expansion_bytes(&dict, &rules, ht.selected(), &model)
            );
            let rule_trie = if ht.rule_trie().is_empty() {
                0
            } else {
                ht.rule_trie().size_bytes(&model)
            };
            assert_eq!(
                ht.size_bytes(&model),
                dict_bytes + r.expansion_bytes + rule_trie
            );
            if alpha == 0.0 {
                assert_eq!(ht.size_bytes(&model), tt.size_bytes(&model));
            }
            if alpha == 1.0 {
                assert_eq!(ht.size_bytes(&model), et.size_bytes(&model));
                assert!(ht.rule_trie().is_empty());
            }
            // Same lookups whichever way the selection was reached.
            let again = build_ht_with_selection(&dict, &rules, ht.selected(), &model).unwrap();
            assert_eq!(again.size_bytes(&model), ht.size_bytes(&model));

            for node in ht.rule_trie().node_ids() {
                let depth = ht.rule_trie().node(node).depth();
                for link in ht.rule_trie().node(node).links() {
                    let lhs = rules.get(link.rule).unwrap().lhs.len() as u32;
                    let attach = ht.trie().ancestor(link.target, lhs).unwrap();
                    assert!(validate_link(ht.trie(), link, depth, attach));
                }
            }
            for node in ht.trie().node_ids() {
                for link in ht.trie().node(node).links() {
                    let rule = rules.get(link.rule).unwrap();
                    let attach = ht.trie().ancestor(node, rule.rhs.len() as u32);
                    assert_eq!(
                        attach,
                        ht.trie().ancestor(link.target, rule.lhs.len() as u32)
                    );
                    assert!(ht.trie().node(link.target).is_dict());
                }
            }
        }
    }
}
