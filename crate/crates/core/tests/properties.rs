use proptest::prelude::*;
use syncomplete::oracle::oracle_topk_with_limit;
use syncomplete::{
    build_et, build_ht, build_tt, Completion, CostModel, Error, HtOptions, Index, RuleSet,
    ScoredString, StructureKind, Trie,
};

fn dict_strategy() -> impl Strategy<Value = Vec<ScoredString>> {
    prop::collection::btree_map("[a-d]{1,8}", 1u32..50, 1..25).prop_map(|m| {
        m.into_iter()
            .map(|(t, s)| ScoredString::new(t, s))
            .collect()
    })
}

fn rules_strategy() -> impl Strategy<Value = RuleSet> {
    prop::collection::btree_set(("[a-d]{1,3}", "[a-dxy]{1,3}"), 0..6).prop_filter_map(
        "rules must be valid",
        |pairs| {
            let pairs: Vec<(String, String)> = pairs.into_iter().filter(|(l, r)| l != r).collect();
            RuleSet::from_pairs(pairs).ok()
        },
    )
}

fn indexes(dict: &[ScoredString], rules: &RuleSet) -> Vec<Index> {
    let mut v = vec![
        Index::Tt(build_tt(dict, rules).unwrap()),
        Index::Et(build_et(dict, rules).unwrap()),
    ];
    for a in [0.0, 0.4, 1.0] {
        v.push(Index::Ht(
            build_ht(dict, rules, a, &HtOptions::default()).unwrap(),
        ));
    }
    v
}

/// Undoes the rewrites: the query with each rhs span put back to its lhs.
fn undo(query: &str, c: &Completion, rules: &RuleSet) -> String {
    let mut out = String::new();
    let mut at = 0;
    for r in &c.rewrites {
        out.push_str(&query[at..r.start]);
        out.push_str(&rules.get(r.rule).unwrap().lhs);
        at = r.end;
    }
    out.push_str(&query[at..]);
    out
}

fn check_max_scores(t: &Trie) -> Result<(), TestCaseError> {
    for id in t.node_ids() {
        let n = t.node(id);
        let below = n.children().iter().map(|&(_, c)| t.node(c).max_score());
        let want = below.chain(n.terminal_score()).max().unwrap_or(0);
        prop_assert_eq!(n.max_score(), want);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn every_structure_agrees_with_the_oracle(
        dict in dict_strategy(),
        rules in rules_strategy(),
        query in "[a-dxy]{0,6}",
        k in 0usize..8,
    ) {
        let want = match oracle_topk_with_limit(&dict, &rules, &query, k, 50_000) {
            Err(Error::Overflow { .. }) => return Ok(()),
            r => r.unwrap(),
        };
        for index in indexes(&dict, &rules) {
            prop_assert_eq!(index.topk(&query, k), want.clone(), "{}", index.kind());
        }
    }

    #[test]
    fn results_are_ranked_bounded_and_explained(
        dict in dict_strategy(),
        rules in rules_strategy(),
        query in "[a-dxy]{0,6}",
        k in 0usize..8,
    ) {
        for index in indexes(&dict, &rules) {
            let got = index.topk(&query, k);
            prop_assert!(got.len() <= k);
            for w in got.windows(2) {
                prop_assert!(w[0].rank_cmp(&w[1]).is_lt());
            }
            for c in &got {
                prop_assert!(dict.iter().any(|s| s.text == c.text && s.score == c.score));
                let mut end = 0;
                for r in &c.rewrites {
                    prop_assert!(end <= r.start && r.start < r.end && r.end <= query.len());
                    prop_assert_eq!(&query[r.start..r.end], rules.get(r.rule).unwrap().rhs.as_str());
                    end = r.end;
                }
                prop_assert!(c.text.starts_with(&undo(&query, c, &rules)));
            }
            let more = index.topk(&query, k + 3);
            prop_assert_eq!(&more[..got.len()], &got[..]);
        }
    }

    #[test]
    fn hybrid_endpoints_and_budget(
        dict in dict_strategy(),
        rules in rules_strategy(),
        alpha in 0.0f64..=1.0,
    ) {
        let model = CostModel::default();
        let opts = HtOptions::default();
        let tt = build_tt(&dict, &rules).unwrap();
        let et = build_et(&dict, &rules).unwrap();
        let h0 = build_ht(&dict, &rules, 0.0, &opts).unwrap();
        let h1 = build_ht(&dict, &rules, 1.0, &opts).unwrap();
        prop_assert_eq!(h0.size_bytes(&model), tt.size_bytes(&model));
        prop_assert_eq!(h1.size_bytes(&model), et.size_bytes(&model));
        let h = build_ht(&dict, &rules, alpha, &opts).unwrap();
        let r = h.report();
        prop_assert!(r.expansion_bytes <= r.budget_bytes);
        // Between the endpoints an expansion can cost less than the rule
        // trie entries it replaces, so no ordering against TT is asserted.
        check_max_scores(h.trie())?;
        check_max_scores(et.trie())?;
        check_max_scores(tt.dict_trie())?;
    }

    #[test]
    fn index_dispatch_matches_kind(dict in dict_strategy(), rules in rules_strategy()) {
        for kind in [StructureKind::Tt, StructureKind::Et, StructureKind::Ht] {
            let index = Index::build(kind, &dict, &rules, 0.5, &HtOptions::default()).unwrap();
            prop_assert_eq!(index.kind(), kind);
        }
    }
}
