//! One type over the three index structures.

use std::fmt;
use std::str::FromStr;

use crate::completion::{Completion, ScoredString};
use crate::error::Result;
use crate::et::{build_et, ExpansionTrie};
use crate::ht::{build_ht, HtOptions, HybridTries};
use crate::rules::RuleSet;
use crate::trie::CostModel;
use crate::tt::{build_tt, TwinTries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StructureKind {
    Tt,
    Et,
    Ht,
}

impl StructureKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StructureKind::Tt => "tt",
            StructureKind::Et => "et",
            StructureKind::Ht => "ht",
        }
    }
}

impl fmt::Display for StructureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StructureKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "tt" => Ok(StructureKind::Tt),
            "et" => Ok(StructureKind::Et),
            "ht" => Ok(StructureKind::Ht),
            other => Err(format!(
                "unknown structure {other:?}, expected tt, et or ht"
            )),
        }
    }
}

#[derive(Debug, Clone)]
pub enum Index {
    Tt(TwinTries),
    Et(ExpansionTrie),
    Ht(HybridTries),
}

impl Index {
    /// Builds `kind`; `alpha` is only read for hybrid tries.
    pub fn build(
        kind: StructureKind,
        dict: &[ScoredString],
        rules: &RuleSet,
        alpha: f64,
        options: &HtOptions,
    ) -> Result<Index> {
        Ok(match kind {
            StructureKind::Tt => Index::Tt(build_tt(dict, rules)?),
            StructureKind::Et => Index::Et(build_et(dict, rules)?),
            StructureKind::Ht => Index::Ht(build_ht(dict, rules, alpha, options)?),
        })
    }

    pub fn kind(&self) -> StructureKind {
        match self {
            Index::Tt(_) => StructureKind::Tt,
            Index::Et(_) => StructureKind::Et,
            Index::Ht(_) => StructureKind::Ht,
        }
    }

    pub fn topk(&self, query: &str, k: usize) -> Vec<Completion> {
        match self {
            Index::Tt(x) => x.topk(query, k),
            Index::Et(x) => x.topk(query, k),
            Index::Ht(x) => x.topk(query, k),
        }
    }

    pub fn rules(&self) -> &RuleSet {
        match self {
            Index::Tt(x) => x.rules(),
            Index::Et(x) => x.rules(),
            Index::Ht(x) => x.rules(),
        }
    }

    pub fn size_bytes(&self, model: &CostModel) -> u64 {
        match self {
            Index::Tt(x) => x.size_bytes(model),
            Index::Et(x) => x.size_bytes(model),
            Index::Ht(x) => x.size_bytes(model),
        }
    }
}
