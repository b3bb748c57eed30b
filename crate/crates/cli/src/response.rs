//! Completion results as printed by the CLI and served over HTTP.

use serde::{Deserialize, Serialize};
use syncomplete::{Completion, RuleSet};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RewriteView {
    pub rule_lhs: String,
    pub rule_rhs: String,
    /// Query byte range `[start, end)` that spelled the rhs.
    pub span: [usize; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompletionView {
    pub text: String,
    pub score: u32,
    pub rewrites: Vec<RewriteView>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompletionResponse {
    pub query: String,
    pub k: usize,
    pub completions: Vec<CompletionView>,
    pub latency_us: f64,
    pub structure: String,
}

pub fn view(c: &Completion, rules: &RuleSet) -> CompletionView {
    CompletionView {
        text: c.text.clone(),
        score: c.score,
        rewrites: c
            .rewrites
            .iter()
            .map(|r| {
                let rule = rules
                    .get(r.rule)
                    .expect("completion rule ids come from the index");
                RewriteView {
                    rule_lhs: rule.lhs.clone(),
                    rule_rhs: rule.rhs.clone(),
                    span: [r.start, r.end],
                }
            })
            .collect(),
    }
}

pub fn views(completions: &[Completion], rules: &RuleSet) -> Vec<CompletionView> {
    completions.iter().map(|c| view(c, rules)).collect()
}

/// `score<TAB>text<TAB>rewrites`, rewrites as `lhs→rhs@[start,end)` joined
/// by commas (empty when none fired).
pub fn line(v: &CompletionView) -> String {
    let rewrites: Vec<String> = v
        .rewrites
        .iter()
        .map(|r| {
            format!(
                "{}→{}@[{},{})",
                r.rule_lhs, r.rule_rhs, r.span[0], r.span[1]
            )
        })
        .collect();
    format!("{}\t{}\t{}", v.score, v.text, rewrites.join(","))
}
