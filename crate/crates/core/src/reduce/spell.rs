use std::cmp::Reverse;

use crate::reduce::dictionary::Dictionary;
use crate::text::{is_punctuation_token, tokenize};

/// Unit-cost edit distance over Unicode scalar values.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    if a.is_empty() {
        return b.len();
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Largest edit distance accepted for a replacement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MaxDistance {
    Fixed(usize),
    /// 2 for words of up to four characters, otherwise `ceil(len / 3)`.
    #[default]
    Adaptive,
}

impl MaxDistance {
    pub fn limit(self, word_len: usize) -> usize {
        match self {
            MaxDistance::Fixed(d) => d,
            MaxDistance::Adaptive if word_len <= 4 => 2,
            MaxDistance::Adaptive => word_len.div_ceil(3),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edit {
    pub token_index: usize,
    pub original: String,
    pub replacement: String,
    pub distance: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrectionResult {
    pub original: String,
    pub corrected: String,
    pub edits: Vec<Edit>,
}

impl CorrectionResult {
    /// Re-applies the edits to the original text.
    pub fn replay(&self) -> String {
        let seq = tokenize(&self.original);
        let repl: Vec<(usize, String)> = self
            .edits
            .iter()
            .map(|e| (e.token_index, e.replacement.clone()))
            .collect();
        seq.rewrite(&self.original, &repl)
    }
}

fn is_numeric_token(tok: &str) -> bool {
    tok.chars().all(char::is_numeric)
}

/// Whether `spell_correct` will consider replacing this token.
pub fn is_correctable(token: &str, dict: &Dictionary) -> bool {
    !is_punctuation_token(token)
        && !is_numeric_token(token)
        && !dict.contains(token)
        && dict.table().is_native(token)
}

/// Best same-code dictionary word within the distance limit: smallest
/// distance, then highest frequency, then lexicographic.
pub fn best_candidate<'d>(word: &str, dict: &'d Dictionary, max_dist: MaxDistance) -> Option<(&'d str, usize)> {
    let code = dict.code_of(word)?;
    let limit = max_dist.limit(word.chars().count());
    dict.candidates(&code)
        .iter()
        .map(|c| (c.as_str(), levenshtein(word, c)))
        .filter(|&(_, d)| d <= limit)
        .min_by_key(|&(c, d)| (d, Reverse(dict.freq(c).unwrap_or(0)), c))
}

/// Replaces out-of-dictionary native-script words with their closest
/// phonetic match. Punctuation, numbers and foreign-script tokens are left
/// alone, as is everything between tokens.
pub fn spell_correct(sentence: &str, dict: &Dictionary, max_dist: MaxDistance) -> CorrectionResult {
    let seq = tokenize(sentence);
    let mut edits = Vec::new();
    for (i, tok) in seq.tokens.iter().enumerate() {
        if !is_correctable(tok, dict) {
            continue;
        }
        if let Some((word, distance)) = best_candidate(tok, dict, max_dist) {
            edits.push(Edit {
                token_index: i,
                original: tok.clone(),
                replacement: word.to_string(),
                distance,
            });
        }
    }
    let repl: Vec<(usize, String)> = edits
        .iter()
        .map(|e| (e.token_index, e.replacement.clone()))
        .collect();
    CorrectionResult {
        original: sentence.to_string(),
        corrected: seq.rewrite(sentence, &repl),
        edits,
    }
}
