use proptest::prelude::*;
use syncomplete::{CostModel, HtOptions, Index, RuleSet, ScoredString, StructureKind};
use syncomplete_cli::{Snapshot, SnapshotError};

fn inputs() -> impl Strategy<Value = (Vec<ScoredString>, RuleSet)> {
    let dict = prop::collection::btree_map("[a-dé]{1,8}", 1u32..50, 1..25).prop_map(|m| {
        m.into_iter()
            .map(|(t, s)| ScoredString::new(t, s))
            .collect()
    });
    let rules = prop::collection::btree_set(("[a-d]{1,3}", "[a-dxy]{1,3}"), 0..6).prop_filter_map(
        "rules must be valid",
        |pairs| {
            RuleSet::from_pairs(
                pairs
                    .into_iter()
                    .filter(|(l, r)| l != r)
                    .collect::<Vec<_>>(),
            )
            .ok()
        },
    );
    (dict, rules)
}

fn kind() -> impl Strategy<Value = StructureKind> {
    prop_oneof![
        Just(StructureKind::Tt),
        Just(StructureKind::Et),
        Just(StructureKind::Ht)
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn round_trip_preserves_lookups(
        (dict, rules) in inputs(),
        kind in kind(),
        alpha in 0.0f64..=1.0,
        queries in prop::collection::vec(("[a-dxyé]{0,6}", 0usize..8), 1..20),
    ) {
        let model = CostModel::default();
        let index = Index::build(kind, &dict, &rules, alpha, &HtOptions::default()).unwrap();
        let snap = Snapshot::of(&index, &dict, &model).unwrap();
        let bytes = snap.encode();
        let back = Snapshot::decode(&bytes).unwrap();
        prop_assert_eq!(back.encode(), bytes);
        let rebuilt = back.build().unwrap();
        prop_assert_eq!(rebuilt.kind(), kind);
        prop_assert_eq!(rebuilt.size_bytes(&model), index.size_bytes(&model));
        for (q, k) in &queries {
            prop_assert_eq!(rebuilt.topk(q, *k), index.topk(q, *k));
        }
    }

    #[test]
    fn any_flipped_byte_is_detected(
        (dict, rules) in inputs(),
        at in any::<prop::sample::Index>(),
        mask in 1u8..,
    ) {
        let index = Index::build(StructureKind::Tt, &dict, &rules, 0.0, &HtOptions::default()).unwrap();
        let mut bytes = Snapshot::of(&index, &dict, &CostModel::default()).unwrap().encode();
        let i = at.index(bytes.len());
        bytes[i] ^= mask;
        let rejected = matches!(
            Snapshot::decode(&bytes),
            Err(SnapshotError::BadMagic
                | SnapshotError::UnsupportedVersion(_)
                | SnapshotError::Checksum { .. }
                | SnapshotError::Truncated
                | SnapshotError::Corrupt(_))
        );
        prop_assert!(rejected, "flip at {} went unnoticed", i);
    }
}
