//! Dataset loading and synthetic generation.
//!
//! Synthetic strings are space-separated words. Some words are the lhs of
//! one or more rules; the rhs values are short uppercase abbreviations, so a
//! query spelling an rhs never matches the dictionary literally. Word
//! popularity follows a Zipf law, so a few rules have many applications and
//! most have few.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use rand::distributions::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use syncomplete::{dictionary, parse_rules, RuleSet, ScoredString};

use crate::error::{BenchError, Result};

pub fn load_dictionary(path: &Path) -> Result<Vec<ScoredString>> {
    let text = read(path)?;
    dictionary::parse_dictionary(&text).map_err(|source| BenchError::Parse {
        path: path.to_owned(),
        source,
    })
}

pub fn load_rules(path: &Path) -> Result<RuleSet> {
    let text = read(path)?;
    parse_rules(&text).map_err(|source| BenchError::Parse {
        path: path.to_owned(),
        source,
    })
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| BenchError::Io {
        path: path.to_owned(),
        source,
    })
}

/// Shape of a synthetic dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSpec {
    pub name: String,
    pub string_count: usize,
    pub string_len_avg: usize,
    pub string_len_max: usize,
    pub rule_count: usize,
    pub rules_per_string_avg: f64,
    pub rules_per_string_max: usize,
    /// Letters used in dictionary words, taken from `a` onwards.
    pub alphabet_size: usize,
    pub score_max: u32,
    pub seed: u64,
}

const MIN_LHS_LEN: usize = 4;
const MAX_LHS_LEN: usize = 8;
const FILLER_WORDS: usize = 6000;

impl DatasetSpec {
    /// Publication titles: 24,810 strings, long and varied.
    pub fn dblp() -> Self {
        Self::preset("dblp", 24_810, 60, 295, 368, 2.51, 11)
    }

    /// Postal addresses: 1,000,000 strings of medium length.
    pub fn usps() -> Self {
        Self::preset("usps", 1_000_000, 25, 43, 341, 2.15, 12)
    }

    /// Protein records: 1,000,000 short strings and 1,000 rules.
    pub fn sprot() -> Self {
        Self::preset("sprot", 1_000_000, 20, 28, 1000, 2.11, 12)
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "dblp" => Some(Self::dblp()),
            "usps" => Some(Self::usps()),
            "sprot" => Some(Self::sprot()),
            _ => None,
        }
    }

    fn preset(
        name: &str,
        strings: usize,
        len_avg: usize,
        len_max: usize,
        rules: usize,
        per_avg: f64,
        per_max: usize,
    ) -> Self {
        DatasetSpec {
            name: name.to_owned(),
            string_count: strings,
            string_len_avg: len_avg,
            string_len_max: len_max,
            rule_count: rules,
            rules_per_string_avg: per_avg,
            rules_per_string_max: per_max,
            alphabet_size: 26,
            score_max: 50_000,
            seed: 42,
        }
    }

    pub fn with_strings(mut self, n: usize) -> Self {
        self.string_count = n;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: &str| Err(BenchError::InvalidSpec(m.to_owned()));
        if self.string_count == 0 || self.rule_count == 0 || self.score_max == 0 {
            return fail("counts and score range must be positive");
        }
        if self.string_len_avg == 0 || self.string_len_avg > self.string_len_max {
            return fail("string length average must lie in 1..=max");
        }
        let per = self.rules_per_string_avg;
        if per.is_nan() || per <= 0.0 || per > self.rules_per_string_max as f64 {
            return fail("rules per string average must lie in (0, max]");
        }
        if !(2..=26).contains(&self.alphabet_size) {
            return fail("alphabet size must lie in 2..=26");
        }
        if self.string_len_max < MIN_LHS_LEN {
            return fail("strings too short to hold a rule lhs");
        }
        Ok(())
    }
}

/// Statistics of what was actually generated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationReport {
    pub string_count: usize,
    pub rule_count: usize,
    pub string_len_avg: f64,
    pub string_len_max: usize,
    pub rules_per_string_avg: f64,
    pub rules_per_string_max: usize,
    pub unused_rules: usize,
}

#[derive(Debug, Clone)]
pub struct Synthetic {
    pub dict: Vec<ScoredString>,
    pub rules: RuleSet,
    pub report: GenerationReport,
}

pub fn generate_synthetic(spec: &DatasetSpec) -> Result<Synthetic> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let letters: Vec<u8> = (b'a'..b'a' + spec.alphabet_size as u8).collect();
    let lhs_max = MAX_LHS_LEN.min(spec.string_len_max);

    // Rule words, each with one to three abbreviations.
    let mut used_words = HashSet::new();
    let mut lhs_words: Vec<String> = Vec::new();
    let mut pairs: Vec<(String, String)> = Vec::new();
    let mut pair_set = HashSet::new();
    let mut attempts = 0usize;
    while pairs.len() < spec.rule_count {
        attempts += 1;
        if attempts > spec.rule_count * 1000 {
            return Err(BenchError::InvalidSpec(
                "alphabet too small for the requested rule count".into(),
            ));
        }
        let word = random_word(&mut rng, &letters, MIN_LHS_LEN, lhs_max);
        if !used_words.insert(word.clone()) {
            continue;
        }
        let synonyms = match rng.gen_range(0..10) {
            0..=6 => 1,
            7..=8 => 2,
            _ => 3,
        };
        for _ in 0..synonyms.min(spec.rule_count - pairs.len()) {
            let rhs = random_word(&mut rng, b"ABCDEFGHIJKLMNOPQRSTUVWXYZ", 2, 4);
            if pair_set.insert((word.clone(), rhs.clone())) {
                pairs.push((word.clone(), rhs));
            }
        }
        lhs_words.push(word);
    }
    let rules = RuleSet::from_pairs(pairs)?;
    let synonyms_per_word = rules.len() as f64 / lhs_words.len() as f64;

    let mut fillers: Vec<String> = Vec::with_capacity(FILLER_WORDS);
    while fillers.len() < FILLER_WORDS {
        let w = random_word(&mut rng, &letters, 2, 8.min(spec.string_len_max));
        if used_words.insert(w.clone()) {
            fillers.push(w);
        }
    }
    let zipf = |n: usize| WeightedIndex::new((1..=n).map(|r| 1.0 / r as f64)).unwrap();
    let filler_pick = zipf(fillers.len());
    let lhs_pick = zipf(lhs_words.len());

    let tokens_avg = spec.rules_per_string_avg / synonyms_per_word;
    let trials = spec.rules_per_string_max.max(1);
    let p = (tokens_avg / trials as f64).min(1.0);

    let mut seen = HashSet::with_capacity(spec.string_count);
    let mut dict = Vec::with_capacity(spec.string_count);
    let mut stalls = 0usize;
    while dict.len() < spec.string_count {
        let i = dict.len();
        let target = sample_length(&mut rng, spec);
        let mut words: Vec<&str> = Vec::new();
        let mut len = 0usize;
        // Early strings each carry one rule word in order, so every rule
        // applies somewhere.
        if i < lhs_words.len() {
            words.push(&lhs_words[i]);
            len = lhs_words[i].len();
        }
        let rule_tokens = (0..trials).filter(|_| rng.gen_bool(p)).count();
        for _ in 0..rule_tokens {
            let w = &lhs_words[lhs_pick.sample(&mut rng)];
            if len + 1 + w.len() <= target.max(w.len()) && !words.contains(&w.as_str()) {
                len += w.len() + usize::from(!words.is_empty());
                words.push(w);
            }
        }
        let mut misses = 0;
        while len < target && misses < 8 {
            let w = &fillers[filler_pick.sample(&mut rng)];
            let extra = w.len() + usize::from(!words.is_empty());
            if len + extra <= target {
                len += extra;
                words.push(w);
            } else {
                misses += 1;
            }
        }
        if words.is_empty() {
            continue;
        }
        words.shuffle(&mut rng);
        let text = words.join(" ");
        if seen.insert(text.clone()) {
            dict.push(ScoredString::new(text, rng.gen_range(1..=spec.score_max)));
            stalls = 0;
        } else {
            stalls += 1;
            if stalls > 10_000 {
                return Err(BenchError::InvalidSpec(
                    "cannot generate enough distinct strings".into(),
                ));
            }
        }
    }
    let report = report(&dict, &rules);
    Ok(Synthetic {
        dict,
        rules,
        report,
    })
}

fn sample_length(rng: &mut ChaCha8Rng, spec: &DatasetSpec) -> usize {
    let (avg, max) = (spec.string_len_avg, spec.string_len_max);
    let lo = (2 * avg).saturating_sub(max).max(MIN_LHS_LEN).min(avg);
    if 2 * avg >= max + lo {
        rng.gen_range(lo..=max)
    } else {
        // Skewed: exponential around the average, clamped.
        let x: f64 = rng.gen::<f64>().max(1e-12);
        let len = (-(x.ln()) * (avg - lo) as f64) as usize + lo;
        len.clamp(lo, max)
    }
}

/// Measures lengths and rule applicability of a dataset.
pub fn report(dict: &[ScoredString], rules: &RuleSet) -> GenerationReport {
    let mut applied = vec![false; rules.len()];
    let (mut total_len, mut max_len) = (0usize, 0usize);
    let (mut total_rules, mut max_rules) = (0usize, 0usize);
    for s in dict {
        total_len += s.text.len();
        max_len = max_len.max(s.text.len());
        let found = rules.applicable_rules(s.text.as_bytes());
        total_rules += found.len();
        max_rules = max_rules.max(found.len());
        for (r, _) in found {
            applied[r as usize] = true;
        }
    }
    let n = dict.len().max(1) as f64;
    GenerationReport {
        string_count: dict.len(),
        rule_count: rules.len(),
        string_len_avg: total_len as f64 / n,
        string_len_max: max_len,
        rules_per_string_avg: total_rules as f64 / n,
        rules_per_string_max: max_rules,
        unused_rules: applied.iter().filter(|a| !**a).count(),
    }
}

fn random_word(rng: &mut ChaCha8Rng, letters: &[u8], min: usize, max: usize) -> String {
    let n = rng.gen_range(min..=max.max(min));
    (0..n)
        .map(|_| *letters.choose(rng).unwrap() as char)
        .collect()
}

/// A small random instance: at most 200 strings of length at most 12 over
/// at most six letters, and at most 20 rules, most of which apply.
pub fn desk_instance(seed: u64) -> (Vec<ScoredString>, RuleSet) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let letters = &b"abcdef"[..rng.gen_range(2..=6)];
    let n = rng.gen_range(1..=200);
    let dict: Vec<ScoredString> = (0..n)
        .map(|_| ScoredString::new(random_word(&mut rng, letters, 1, 12), rng.gen_range(1..=50)))
        .collect();
    let rule_count = rng.gen_range(0..=20);
    let mut pairs = Vec::new();
    while pairs.len() < rule_count {
        let lhs = if rng.gen_bool(0.85) {
            let s = dict.choose(&mut rng).unwrap().text.as_bytes();
            let len = rng.gen_range(1..=s.len().min(4));
            let start = rng.gen_range(0..=s.len() - len);
            String::from_utf8(s[start..start + len].to_vec()).unwrap()
        } else {
            random_word(&mut rng, letters, 1, 3)
        };
        let rhs = random_word(&mut rng, b"abcdefxyz", 1, 4);
        if lhs != rhs {
            pairs.push((lhs, rhs));
        }
    }
    let rules = RuleSet::from_pairs(pairs).expect("generated pairs are valid");
    (dict, rules)
}
