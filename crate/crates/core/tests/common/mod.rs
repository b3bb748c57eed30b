#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use syncomplete::{RuleSet, ScoredString};

pub const ALPHABET: &[u8] = b"abcdef";

pub fn random_word(rng: &mut ChaCha8Rng, alphabet: &[u8], min: usize, max: usize) -> String {
    let n = rng.gen_range(min..=max);
    (0..n)
        .map(|_| *alphabet.choose(rng).unwrap() as char)
        .collect()
}

pub fn random_dict(rng: &mut ChaCha8Rng, max_strings: usize, max_len: usize) -> Vec<ScoredString> {
    let n = rng.gen_range(1..=max_strings);
    let alpha = &ALPHABET[..rng.gen_range(2..=ALPHABET.len())];
    (0..n)
        .map(|_| ScoredString::new(random_word(rng, alpha, 1, max_len), rng.gen_range(1..=20)))
        .collect()
}

/// Rules whose lhs is usually a substring of some dictionary string.
pub fn random_rules(rng: &mut ChaCha8Rng, dict: &[ScoredString], max_rules: usize) -> RuleSet {
    let n = rng.gen_range(0..=max_rules);
    let mut pairs = Vec::new();
    while pairs.len() < n {
        let lhs = if rng.gen_bool(0.8) {
            let s = dict.choose(rng).unwrap().text.as_bytes();
            let len = rng.gen_range(1..=s.len().min(4));
            let start = rng.gen_range(0..=s.len() - len);
            String::from_utf8(s[start..start + len].to_vec()).unwrap()
        } else {
            random_word(rng, ALPHABET, 1, 3)
        };
        let rhs = random_word(rng, b"abcdefxy", 1, 4);
        if lhs != rhs {
            pairs.push((lhs, rhs));
        }
    }
    RuleSet::from_pairs(pairs).unwrap()
}

/// A prefix of a dictionary string with some lhs occurrences rewritten to rhs.
pub fn rewritten_prefix(rng: &mut ChaCha8Rng, dict: &[ScoredString], rules: &RuleSet) -> String {
    let s = dict.choose(rng).unwrap().text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < s.len() {
        let fitting: Vec<_> = rules
            .rules()
            .iter()
            .filter(|r| s[i..].starts_with(r.lhs.as_bytes()))
            .collect();
        if !fitting.is_empty() && rng.gen_bool(0.6) {
            let r = fitting.choose(rng).unwrap();
            out.extend_from_slice(r.rhs.as_bytes());
            i += r.lhs.len();
        } else {
            out.push(s[i]);
            i += 1;
        }
    }
    let cut = rng.gen_range(0..=out.len());
    out.truncate(cut);
    String::from_utf8(out).unwrap()
}

pub fn queries(
    rng: &mut ChaCha8Rng,
    dict: &[ScoredString],
    rules: &RuleSet,
    n: usize,
) -> Vec<String> {
    let mut q = vec![String::new()];
    while q.len() < n {
        if rng.gen_bool(0.75) {
            q.push(rewritten_prefix(rng, dict, rules));
        } else {
            q.push(random_word(rng, b"abcdefxy", 1, 5));
        }
    }
    q
}
