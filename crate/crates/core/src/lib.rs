//! Top-k string auto-completion under synonym rules.
//!
//! A dictionary of scored strings is indexed so that a query prefix, in
//! which some substrings may be synonyms (rule rhs values) of what the
//! dictionary spells (rule lhs values), returns the best-scoring completions.
//! Three structures trade space for lookup time: [`tt::TwinTries`] keeps the
//! rules in a separate trie, [`et::ExpansionTrie`] grafts every rule into the
//! dictionary trie, and [`ht::HybridTries`] grafts a budgeted subset.
//!
//! ```
//! use syncomplete::{build_tt, parse_rules, ScoredString};
//!
//! let dict = [ScoredString::new("abc", 5), ScoredString::new("cde", 2)];
//! let rules = parse_rules("bc\tmn\nc\tmp").unwrap();
//! let tt = build_tt(&dict, &rules).unwrap();
//! assert_eq!(tt.topk("abmp", 1)[0].text, "abc");
//! ```

mod build;
mod completion;
pub mod dictionary;
mod error;
pub mod et;
pub mod ht;
mod index;
pub mod oracle;
pub mod rules;
mod search;
pub mod trie;
pub mod tt;

pub use completion::{Completion, Rewrite, ScoredString, Witness};
pub use dictionary::parse_dictionary;
pub use error::{Error, Result};
pub use et::{build_et, ExpansionTrie};
pub use ht::{build_ht, build_ht_with_selection, HtOptions, HybridTries};
pub use index::{Index, StructureKind};
pub use rules::{parse_rules, RuleSet, SynonymRule};
pub use trie::{CostModel, NodeId, SynonymLink, Trie};
pub use tt::{build_tt, TwinTries};
