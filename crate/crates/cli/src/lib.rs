//! Snapshots, result formatting and the HTTP service behind the
//! `syncomplete` binary.

pub mod response;
pub mod server;
pub mod snapshot;

pub use response::{CompletionResponse, CompletionView, RewriteView};
pub use snapshot::{Snapshot, SnapshotError};

use syncomplete::{Index, Trie};

/// Links held by each rule-trie node, as `(rhs, count)` in rhs order.
/// Empty for expansion tries, which have no rule trie.
pub fn rule_trie_links(index: &Index) -> Vec<(String, usize)> {
    let trie: &Trie = match index {
        Index::Tt(x) => x.rule_trie(),
        Index::Ht(x) => x.rule_trie(),
        Index::Et(_) => return Vec::new(),
    };
    let mut out: Vec<(String, usize)> = trie
        .node_ids()
        .filter(|&n| !trie.node(n).links().is_empty())
        .map(|n| {
            let rhs = String::from_utf8_lossy(&trie.full_string(n)).into_owned();
            (rhs, trie.node(n).links().len())
        })
        .collect();
    out.sort();
    out
}
