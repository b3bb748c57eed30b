//! Arena-backed byte trie with max-score aggregation.
//!
//! Every index structure in this crate is built from [`Trie`]: the dictionary
//! trie, the rule trie and the expansion trie all share the node layout,
//! size accounting and best-first top-k enumeration defined here.
//!
//! Nodes are addressed by [`NodeId`] handles into a flat arena. Node 0 is the
//! root and represents the empty string.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use crate::completion::{Completion, Witness};
use crate::error::{Error, Result};

/// Handle of a node inside a [`Trie`] arena.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(u32);

impl NodeId {
    pub const ROOT: NodeId = NodeId(0);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Edge from the end of a rule's rhs to the node that ends the matching lhs
/// occurrence in the dictionary trie.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SynonymLink {
    pub target: NodeId,
    /// `len(lhs) - len(rhs)` of the originating rule.
    pub delta: i32,
    pub rule: u32,
}

#[derive(Debug, Clone)]
pub struct TrieNode {
    label: u8,
    is_dict: bool,
    parent: Option<NodeId>,
    depth: u32,
    max_score: u32,
    terminal_score: Option<u32>,
    children: Vec<(u8, NodeId)>,
    links: Vec<SynonymLink>,
}

impl TrieNode {
    fn new(label: u8, parent: Option<NodeId>, depth: u32, is_dict: bool) -> Self {
        TrieNode {
            label,
            is_dict,
            parent,
            depth,
            max_score: 0,
            terminal_score: None,
            children: Vec::new(),
            links: Vec::new(),
        }
    }

    pub fn label(&self) -> u8 {
        self.label
    }

    pub fn parent(&self) -> Option<NodeId> {
        self.parent
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// Largest terminal score in this subtree, 0 when there is none.
    pub fn max_score(&self) -> u32 {
        self.max_score
    }

    pub fn terminal_score(&self) -> Option<u32> {
        self.terminal_score
    }

    /// True when the node lies on the path of a dictionary string.
    pub fn is_dict(&self) -> bool {
        self.is_dict
    }

    /// Children sorted by label.
    pub fn children(&self) -> &[(u8, NodeId)] {
        &self.children
    }

    pub fn links(&self) -> &[SynonymLink] {
        &self.links
    }
}

/// Byte costs used to turn a trie into a deterministic size figure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CostModel {
    pub node_header_bytes: u32,
    pub per_child_ref_bytes: u32,
    pub per_link_bytes: u32,
    pub score_bytes: u32,
}

impl CostModel {
    /// Bytes every node pays for its header, one label byte and its score.
    pub fn node_bytes(&self) -> u64 {
        self.node_header_bytes as u64 + 1 + self.score_bytes as u64
    }

    /// Bytes a freshly attached node adds: its own storage plus the child
    /// reference held by its parent.
    pub fn attached_node_bytes(&self) -> u64 {
        self.node_bytes() + self.per_child_ref_bytes as u64
    }

    pub fn is_valid(&self) -> bool {
        self.node_header_bytes > 0
            && self.per_child_ref_bytes > 0
            && self.per_link_bytes > 0
            && self.score_bytes > 0
    }
}

impl Default for CostModel {
    fn default() -> Self {
        CostModel {
            node_header_bytes: 16,
            per_child_ref_bytes: 8,
            per_link_bytes: 12,
            score_bytes: 4,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Trie {
    nodes: Vec<TrieNode>,
}

impl Default for Trie {
    fn default() -> Self {
        Self::new()
    }
}

impl Trie {
    pub fn new() -> Self {
        Trie {
            nodes: vec![TrieNode::new(0, None, 0, true)],
        }
    }

    #[inline]
    pub fn root(&self) -> NodeId {
        NodeId::ROOT
    }

    #[inline]
    pub fn node(&self, id: NodeId) -> &TrieNode {
        &self.nodes[id.index()]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.len() == 1
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.nodes.len() as u32).map(NodeId)
    }

    #[inline]
    pub fn child(&self, id: NodeId, label: u8) -> Option<NodeId> {
        let children = &self.nodes[id.index()].children;
        children
            .binary_search_by_key(&label, |&(l, _)| l)
            .ok()
            .map(|i| children[i].1)
    }

    fn child_or_insert(&mut self, id: NodeId, label: u8, is_dict: bool) -> (NodeId, bool) {
        let pos = match self.nodes[id.index()]
            .children
            .binary_search_by_key(&label, |&(l, _)| l)
        {
            Ok(i) => {
                let c = self.nodes[id.index()].children[i].1;
                if is_dict {
                    self.nodes[c.index()].is_dict = true;
                }
                return (c, false);
            }
            Err(pos) => pos,
        };
        let c = NodeId(self.nodes.len() as u32);
        let depth = self.nodes[id.index()].depth + 1;
        self.nodes
            .push(TrieNode::new(label, Some(id), depth, is_dict));
        self.nodes[id.index()].children.insert(pos, (label, c));
        (c, true)
    }

    /// Inserts a dictionary string and returns its terminal node.
    ///
    /// A repeated insert keeps the larger score. Max scores are not updated
    /// until [`Trie::recompute_max_scores`] runs.
    pub fn insert(&mut self, bytes: &[u8], score: u32) -> Result<NodeId> {
        if bytes.is_empty() {
            return Err(Error::EmptyString);
        }
        if score < 1 {
            return Err(Error::InvalidScore(score as i64));
        }
        let mut at = self.root();
        for &b in bytes {
            at = self.child_or_insert(at, b, true).0;
        }
        let node = &mut self.nodes[at.index()];
        node.terminal_score = Some(node.terminal_score.map_or(score, |s| s.max(score)));
        Ok(at)
    }

    /// Walks `bytes` down from `start`, creating missing nodes as non-dictionary
    /// nodes. Existing nodes are reused whatever their kind. Returns the last
    /// node and how many nodes were created.
    pub fn extend_path(&mut self, start: NodeId, bytes: &[u8]) -> (NodeId, usize) {
        let mut at = start;
        let mut created = 0;
        for &b in bytes {
            let (next, fresh) = self.child_or_insert(at, b, false);
            created += fresh as usize;
            at = next;
        }
        (at, created)
    }

    /// Adds a link unless the same (rule, target) link is already present.
    pub fn add_link(&mut self, at: NodeId, link: SynonymLink) -> bool {
        let links = &mut self.nodes[at.index()].links;
        if links
            .iter()
            .any(|l| l.rule == link.rule && l.target == link.target)
        {
            return false;
        }
        links.push(link);
        true
    }

    /// Sets every node's max score to the largest terminal score below it.
    pub fn recompute_max_scores(&mut self) {
        // Children always have larger ids than their parent.
        for n in &mut self.nodes {
            n.max_score = n.terminal_score.unwrap_or(0);
        }
        for i in (1..self.nodes.len()).rev() {
            let score = self.nodes[i].max_score;
            let parent = self.nodes[i].parent.expect("non-root node has a parent");
            let p = &mut self.nodes[parent.index()];
            if score > p.max_score {
                p.max_score = score;
            }
        }
    }

    /// Deepest node reachable from `start` by consuming a prefix of `query`,
    /// and the number of bytes consumed.
    pub fn locus(&self, start: NodeId, query: &[u8]) -> (NodeId, usize) {
        let mut at = start;
        for (i, &b) in query.iter().enumerate() {
            match self.child(at, b) {
                Some(c) => at = c,
                None => return (at, i),
            }
        }
        (at, query.len())
    }

    /// Node spelling exactly `bytes` from the root, if present.
    pub fn find(&self, bytes: &[u8]) -> Option<NodeId> {
        let (node, consumed) = self.locus(self.root(), bytes);
        (consumed == bytes.len()).then_some(node)
    }

    /// Ancestor `levels` steps above `id`, or `None` past the root.
    #[inline]
    pub fn ancestor(&self, id: NodeId, levels: u32) -> Option<NodeId> {
        let mut at = id;
        for _ in 0..levels {
            at = self.nodes[at.index()].parent?;
        }
        Some(at)
    }

    /// Concatenated labels from the root down to `id`.
    pub fn full_string(&self, id: NodeId) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.node(id).depth as usize);
        let mut at = id;
        while let Some(parent) = self.nodes[at.index()].parent {
            out.push(self.nodes[at.index()].label);
            at = parent;
        }
        out.reverse();
        out
    }

    pub fn link_count(&self) -> usize {
        self.nodes.iter().map(|n| n.links.len()).sum()
    }

    /// Total size under `model`: every node's header, label and score, one
    /// reference per child edge and the cost of every link.
    pub fn size_bytes(&self, model: &CostModel) -> u64 {
        let edges = (self.nodes.len() - 1) as u64;
        self.nodes.len() as u64 * model.node_bytes()
            + edges * model.per_child_ref_bytes as u64
            + self.link_count() as u64 * model.per_link_bytes as u64
    }

    /// Best-first top-k enumeration of the dictionary strings below `seeds`.
    ///
    /// Each seed is a dictionary node plus the rewrites that led to it. A
    /// string reachable from several seeds is reported once, with the smallest
    /// witness among the seeds above it. Only dictionary children are
    /// expanded, so expansion-only branches never produce results.
    pub fn best_first_topk(&self, seeds: Vec<(NodeId, Witness)>, k: usize) -> Vec<Completion> {
        let mut out = Vec::new();
        if k == 0 || seeds.is_empty() {
            return out;
        }

        // Keep only seeds not dominated by an ancestor seed with a witness at
        // least as good; each kept seed then owns its subtree.
        let mut seeds = seeds;
        seeds.sort_by(|a, b| {
            self.node(a.0)
                .depth
                .cmp(&self.node(b.0).depth)
                .then_with(|| a.1.cmp(&b.1))
                .then_with(|| a.0.cmp(&b.0))
        });
        let mut kept: HashMap<NodeId, usize> = HashMap::new();
        let mut witnesses: Vec<Witness> = Vec::new();
        for (node, witness) in seeds {
            debug_assert!(self.node(node).is_dict, "seeds are dictionary nodes");
            if kept.contains_key(&node) {
                continue;
            }
            let mut dominated = false;
            let mut at = self.node(node).parent;
            while let Some(a) = at {
                if let Some(&w) = kept.get(&a) {
                    if witnesses[w] <= witness {
                        dominated = true;
                        break;
                    }
                }
                at = self.node(a).parent;
            }
            if !dominated {
                kept.insert(node, witnesses.len());
                witnesses.push(witness);
            }
        }

        let mut heap = BinaryHeap::new();
        for (&node, &w) in &kept {
            self.push_entries(&mut heap, node, w);
        }

        let mut batch: Vec<(Vec<u8>, usize, NodeId)> = Vec::new();
        while let Some(entry) = heap.pop() {
            match entry.kind {
                EntryKind::Expand => {
                    for &(_, child) in &self.node(entry.node).children {
                        if self.node(child).is_dict && !kept.contains_key(&child) {
                            self.push_entries(&mut heap, child, entry.witness);
                        }
                    }
                }
                EntryKind::Leaf => {
                    // Every expansion entry keyed at or above this score has
                    // already been processed, so all leaves with this score are
                    // in the heap now.
                    let score = entry.key;
                    batch.clear();
                    batch.push((self.full_string(entry.node), entry.witness, entry.node));
                    while let Some(next) = heap.peek() {
                        if next.kind != EntryKind::Leaf || next.key != score {
                            break;
                        }
                        let next = heap.pop().expect("peeked");
                        batch.push((self.full_string(next.node), next.witness, next.node));
                    }
                    batch.sort_by(|a, b| {
                        a.0.cmp(&b.0)
                            .then_with(|| witnesses[a.1].cmp(&witnesses[b.1]))
                    });
                    batch.dedup_by(|a, b| a.2 == b.2);
                    for (text, w, _) in batch.drain(..) {
                        out.push(Completion {
                            text: String::from_utf8(text).expect("dictionary strings are UTF-8"),
                            score,
                            rewrites: witnesses[w].0.clone(),
                        });
                        if out.len() == k {
                            return out;
                        }
                    }
                }
            }
        }
        out
    }

    fn push_entries(&self, heap: &mut BinaryHeap<Entry>, node: NodeId, witness: usize) {
        let n = self.node(node);
        if let Some(score) = n.terminal_score {
            heap.push(Entry {
                key: score,
                kind: EntryKind::Leaf,
                depth: n.depth,
                label: n.label,
                node,
                witness,
            });
        }
        if n.children.iter().any(|&(_, c)| self.node(c).is_dict) {
            heap.push(Entry {
                key: n.max_score,
                kind: EntryKind::Expand,
                depth: n.depth,
                label: n.label,
                node,
                witness,
            });
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum EntryKind {
    Leaf,
    Expand,
}

#[derive(Debug, PartialEq, Eq)]
struct Entry {
    key: u32,
    kind: EntryKind,
    depth: u32,
    label: u8,
    node: NodeId,
    witness: usize,
}

impl Ord for Entry {
    // Max-heap order: higher key first; on equal keys expansions before
    // leaves, then deeper nodes, then smaller labels.
    fn cmp(&self, other: &Self) -> Ordering {
        self.key
            .cmp(&other.key)
            .then_with(|| match (self.kind, other.kind) {
                (EntryKind::Expand, EntryKind::Leaf) => Ordering::Greater,
                (EntryKind::Leaf, EntryKind::Expand) => Ordering::Less,
                _ => Ordering::Equal,
            })
            .then_with(|| self.depth.cmp(&other.depth))
            .then_with(|| other.label.cmp(&self.label))
            .then_with(|| other.node.cmp(&self.node))
            .then_with(|| other.witness.cmp(&self.witness))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
