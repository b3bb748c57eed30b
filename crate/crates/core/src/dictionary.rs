//! Dictionary ingestion and normalization.

use std::collections::HashMap;

use crate::completion::ScoredString;
use crate::error::{Error, Result};

/// Parses `string<TAB>score` lines. Blank lines are skipped.
pub fn parse_dictionary(text: &str) -> Result<Vec<ScoredString>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.is_empty() {
            continue;
        }
        let fail = |message: String| Error::Line {
            line: i + 1,
            message,
        };
        let Some((s, score)) = line.rsplit_once('\t') else {
            return Err(fail("expected `string<TAB>score`".into()));
        };
        if s.is_empty() {
            return Err(fail("empty string".into()));
        }
        let score: i64 = score
            .trim()
            .parse()
            .map_err(|_| fail(format!("score {score:?} is not an integer")))?;
        if !(1..=u32::MAX as i64).contains(&score) {
            return Err(fail(Error::InvalidScore(score).to_string()));
        }
        out.push(ScoredString::new(s, score as u32));
    }
    Ok(out)
}

/// Validates entries and merges duplicates, keeping the larger score and
/// the position of the first occurrence.
pub fn normalize(entries: &[ScoredString]) -> Result<Vec<ScoredString>> {
    let mut index: HashMap<&str, usize> = HashMap::with_capacity(entries.len());
    let mut out: Vec<ScoredString> = Vec::with_capacity(entries.len());
    for e in entries {
        if e.text.is_empty() {
            return Err(Error::EmptyString);
        }
        if e.score < 1 {
            return Err(Error::InvalidScore(e.score as i64));
        }
        match index.get(e.text.as_str()) {
            Some(&i) => out[i].score = out[i].score.max(e.score),
            None => {
                index.insert(e.text.as_str(), out.len());
                out.push(e.clone());
            }
        }
    }
    Ok(out)
}

/// Canonical TSV form of a dictionary.
pub fn to_tsv(entries: &[ScoredString]) -> String {
    let mut out = String::new();
    for e in entries {
        out.push_str(&e.text);
        out.push('\t');
        out.push_str(&e.score.to_string());
        out.push('\n');
    }
    out
}
