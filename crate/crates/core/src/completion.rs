//! Ranked completion results and the rewrite provenance attached to them.

use std::cmp::Ordering;
use std::fmt;

/// A dictionary entry: a string and its ranking score.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ScoredString {
    pub text: String,
    pub score: u32,
}

impl ScoredString {
    pub fn new(text: impl Into<String>, score: u32) -> Self {
        ScoredString {
            text: text.into(),
            score,
        }
    }
}

/// One synonym substitution used to reach a completion: rule `rule` matched
/// its rhs on the query bytes `start..end`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rewrite {
    pub rule: u32,
    pub start: usize,
    pub end: usize,
}

impl Ord for Rewrite {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.start, self.end, self.rule).cmp(&(other.start, other.end, other.rule))
    }
}

impl PartialOrd for Rewrite {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The list of rewrites that turns a query into a dictionary prefix.
///
/// Witnesses are ordered shortest first, then lexicographically by span.
/// That order is preserved by appending the same suffix to both sides, so a
/// per-state minimum can be propagated forward through the query.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Witness(pub Vec<Rewrite>);

impl Witness {
    pub fn empty() -> Self {
        Witness(Vec::new())
    }

    pub fn extended(&self, rewrite: Rewrite) -> Self {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.extend_from_slice(&self.0);
        v.push(rewrite);
        Witness(v)
    }

    pub fn rewrites(&self) -> &[Rewrite] {
        &self.0
    }
}

impl Ord for Witness {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Witness {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A ranked result of a top-k lookup.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Completion {
    pub text: String,
    pub score: u32,
    pub rewrites: Vec<Rewrite>,
}

impl Completion {
    /// Global result order: score descending, then text ascending.
    pub fn rank_cmp(&self, other: &Self) -> Ordering {
        other
            .score
            .cmp(&self.score)
            .then_with(|| self.text.as_bytes().cmp(other.text.as_bytes()))
    }
}

impl fmt::Display for Completion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}", self.score, self.text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rw(rule: u32, start: usize, end: usize) -> Rewrite {
        Rewrite { rule, start, end }
    }

    #[test]
    fn shorter_witness_wins() {
        let a = Witness(vec![rw(5, 3, 4)]);
        let b = Witness(vec![rw(0, 0, 1), rw(0, 1, 2)]);
        assert!(a < b);
        assert!(Witness::empty() < a);
    }

    #[test]
    fn witness_order_survives_common_suffix() {
        let a = Witness(vec![rw(1, 0, 2)]);
        let b = Witness(vec![rw(0, 0, 3)]);
        assert!(a < b);
        let tail = rw(2, 4, 5);
        assert!(a.extended(tail) < b.extended(tail));
    }
}
