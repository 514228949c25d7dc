//! Out-of-vocabulary and random masking, and mask filling.

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::reduce::dictionary::{Dictionary, Vocabulary};
use crate::text::{is_punctuation_token, tokenize, TokenSequence};

pub const MASK_TOKEN: &str = "<MASK>";

/// Indices of word tokens missing from `vocab`.
pub fn detect_oov(tokens: &TokenSequence, vocab: &dyn Vocabulary) -> Vec<usize> {
    tokens
        .word_indices()
        .filter(|&i| !vocab.contains_word(&tokens.tokens[i]))
        .collect()
}

/// Replaces every out-of-vocabulary word with [`MASK_TOKEN`].
pub fn mask_oov(sentence: &str, vocab: &dyn Vocabulary) -> String {
    let seq = tokenize(sentence);
    let repl: Vec<(usize, String)> = detect_oov(&seq, vocab)
        .into_iter()
        .map(|i| (i, MASK_TOKEN.to_string()))
        .collect();
    seq.rewrite(sentence, &repl)
}

/// Masks each word token independently with probability `p`.
pub fn mask_random(sentence: &str, p: f64, seed: u64) -> Result<String> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    let seq = tokenize(sentence);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let repl: Vec<(usize, String)> = seq
        .word_indices()
        .filter(|_| rng.gen::<f64>() < p)
        .map(|i| (i, MASK_TOKEN.to_string()))
        .collect();
    Ok(seq.rewrite(sentence, &repl))
}

/// What a predictor sees for one mask.
#[derive(Debug, Clone, Copy)]
pub struct MaskQuery<'a> {
    /// Current text; the mask being filled is its first [`MASK_TOKEN`].
    pub text: &'a str,
    /// Word token immediately before the mask, if any.
    pub left_word: Option<&'a str>,
}

pub trait MaskFillProvider {
    fn predict(&mut self, query: MaskQuery<'_>) -> Result<String>;
}

/// Fallback predictor: the dictionary word seen most often after the left
/// word, else the most frequent dictionary word. Ties go to the
/// lexicographically smaller word.
#[derive(Debug, Clone)]
pub struct BigramFillPredictor {
    unigram_best: Option<String>,
    following: HashMap<String, String>,
}

impl BigramFillPredictor {
    /// `bigrams` maps `(left, word)` to counts; pairs whose right side is not
    /// in the dictionary are ignored.
    pub fn new(dict: &Dictionary, bigrams: &HashMap<(String, String), u64>) -> Self {
        let unigram_best = dict
            .iter()
            .max_by(|a, b| a.1.cmp(&b.1).then_with(|| b.0.cmp(a.0)))
            .map(|(w, _)| w.to_string());

        let mut grouped: HashMap<&str, BTreeMap<&str, u64>> = HashMap::new();
        for ((left, word), &count) in bigrams {
            if count > 0 && dict.contains(word) {
                *grouped.entry(left).or_default().entry(word).or_insert(0) += count;
            }
        }
        let following = grouped
            .into_iter()
            .filter_map(|(left, words)| {
                // BTreeMap iterates in lexicographic order; keep the first max.
                let mut best: Option<(&str, u64)> = None;
                for (w, c) in words {
                    if best.is_none_or(|(_, bc)| c > bc) {
                        best = Some((w, c));
                    }
                }
                best.map(|(w, _)| (left.to_string(), w.to_string()))
            })
            .collect();
        BigramFillPredictor {
            unigram_best,
            following,
        }
    }

    /// Counts adjacent word-token pairs in `texts`.
    pub fn from_texts<S: AsRef<str>>(dict: &Dictionary, texts: &[S]) -> Self {
        Self::new(dict, &count_bigrams(texts))
    }
}

pub fn count_bigrams<S: AsRef<str>>(texts: &[S]) -> HashMap<(String, String), u64> {
    let mut counts = HashMap::new();
    for text in texts {
        let seq = tokenize(text.as_ref());
        for pair in seq.tokens.windows(2) {
            if pair.iter().any(|t| is_punctuation_token(t) || t == MASK_TOKEN) {
                continue;
            }
            *counts.entry((pair[0].clone(), pair[1].clone())).or_insert(0) += 1;
        }
    }
    counts
}

impl MaskFillProvider for BigramFillPredictor {
    fn predict(&mut self, query: MaskQuery<'_>) -> Result<String> {
        query
            .left_word
            .and_then(|l| self.following.get(l))
            .or(self.unigram_best.as_ref())
            .cloned()
            .ok_or_else(|| Error::PredictorFailure("dictionary is empty".into()))
    }
}

/// Replaces every [`MASK_TOKEN`], left to right, with the predictor's
/// answer for that position.
pub fn fill_masks(masked: &str, predictor: &mut dyn MaskFillProvider) -> Result<String> {
    let mut text = masked.to_string();
    while let Some(pos) = text.find(MASK_TOKEN) {
        let prefix = tokenize(&text[..pos]);
        let left_word = prefix
            .tokens
            .last()
            .filter(|t| !is_punctuation_token(t))
            .map(String::as_str);
        let prediction = predictor.predict(MaskQuery {
            text: &text,
            left_word,
        })?;
        let prediction = prediction.trim();
        if prediction.is_empty() || prediction.contains(['<', '>']) {
            return Err(Error::PredictorFailure(format!(
                "unusable prediction {prediction:?}"
            )));
        }
        text.replace_range(pos..pos + MASK_TOKEN.len(), prediction);
    }
    Ok(text)
}
