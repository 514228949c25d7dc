//! Seeded synthetic Bangla-like corpora for benchmarks and end-to-end tests.
//!
//! Each document starts from a clean sentence and receives one or more
//! corruptions matching its noise labels, so labels are learnable from the
//! text and the clean sentence serves as a correction reference.

use noisekit::{Document, NoiseLabel, NoiseLabelSet, SentimentLabel};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CONSONANTS: &[char] = &[
    'ক', 'খ', 'গ', 'ঘ', 'চ', 'ছ', 'জ', 'ট', 'ড', 'ত', 'থ', 'দ', 'ন', 'প', 'ব', 'ভ', 'ম', 'র', 'ল', 'শ', 'স', 'হ',
];
const VOWEL_SIGNS: &[char] = &['া', 'ি', 'ী', 'ু', 'ে', 'ো'];
const POSITIVE: &[&str] = &["ভালো", "সুন্দর", "চমৎকার", "দারুণ"];
const NEGATIVE: &[&str] = &["খারাপ", "বাজে", "জঘন্য", "ভুল"];
const ENGLISH: &[&str] = &["good", "very", "nice", "bad", "video", "please", "price", "service"];
const LOCAL: &[&str] = &["হেব্বি", "কইলাম", "গেছিলাম", "খাইছি"];
const COINED: &[&str] = &["😀", "😡", "http://x.co", "#ট্রেন্ড"];

#[derive(Debug, Clone)]
pub struct SyntheticCorpus {
    pub documents: Vec<Document>,
    /// Uncorrupted sentence for each document.
    pub clean: Vec<String>,
    /// Every clean word with its corpus frequency, sorted by word.
    pub dictionary: Vec<(String, u64)>,
}

fn make_word(rng: &mut ChaCha8Rng) -> String {
    let syllables = rng.gen_range(1..=3);
    let mut w = String::new();
    for _ in 0..syllables {
        w.push(*CONSONANTS.choose(rng).unwrap());
        if rng.gen_bool(0.7) {
            w.push(*VOWEL_SIGNS.choose(rng).unwrap());
        }
    }
    w
}

fn misspell(rng: &mut ChaCha8Rng, word: &str) -> String {
    let mut chars: Vec<char> = word.chars().collect();
    let i = rng.gen_range(0..chars.len());
    if VOWEL_SIGNS.contains(&chars[i]) {
        chars[i] = *VOWEL_SIGNS.choose(rng).unwrap();
        if chars.iter().collect::<String>() == word {
            chars.remove(i);
        }
    } else {
        chars.insert(i + 1, *VOWEL_SIGNS.choose(rng).unwrap());
    }
    chars.into_iter().collect()
}

fn pick_sentiment(rng: &mut ChaCha8Rng) -> SentimentLabel {
    // Roughly the neutral/positive/negative imbalance of the real data.
    let r = rng.gen_range(0..12_033);
    if r < 2767 {
        SentimentLabel::Neutral
    } else if r < 2767 + 4948 {
        SentimentLabel::Positive
    } else {
        SentimentLabel::Negative
    }
}

fn pick_labels(rng: &mut ChaCha8Rng) -> NoiseLabelSet {
    let rates = [0.14, 0.05, 0.04, 0.02, 0.41, 0.39, 0.16, 0.38, 0.04, 0.08];
    let mut set: NoiseLabelSet = NoiseLabel::ALL
        .iter()
        .zip(rates)
        .filter_map(|(&l, p)| rng.gen_bool(p).then_some(l))
        .collect();
    if set.is_empty() {
        set.insert(NoiseLabel::ALL[rng.gen_range(0..NoiseLabel::COUNT)]);
    }
    set
}

/// `n` documents with ids `s0`, `s1`, ...
pub fn synthetic_corpus(n: usize, seed: u64) -> SyntheticCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vocab: Vec<String> = Vec::new();
    while vocab.len() < 400 {
        let w = make_word(&mut rng);
        if !vocab.contains(&w) {
            vocab.push(w);
        }
    }
    let mut documents = Vec::with_capacity(n);
    let mut clean = Vec::with_capacity(n);
    let mut freq = std::collections::BTreeMap::<String, u64>::new();

    for i in 0..n {
        let sentiment = pick_sentiment(&mut rng);
        let len = rng.gen_range(5..16);
        let mut words: Vec<String> = (0..len).map(|_| vocab.choose(&mut rng).unwrap().clone()).collect();
        match sentiment {
            SentimentLabel::Positive => words.insert(rng.gen_range(0..words.len()), POSITIVE.choose(&mut rng).unwrap().to_string()),
            SentimentLabel::Negative => words.insert(rng.gen_range(0..words.len()), NEGATIVE.choose(&mut rng).unwrap().to_string()),
            SentimentLabel::Neutral => {}
        }
        for w in &words {
            *freq.entry(w.clone()).or_insert(0) += 1;
        }
        let clean_text = format!("{} ।", words.join(" "));
        let labels = pick_labels(&mut rng);
        let mut noisy = words.clone();
        let mut ending = " ।".to_string();
        for label in labels.iter() {
            let k = rng.gen_range(0..noisy.len());
            match label {
                NoiseLabel::LocalWord => noisy.insert(k, LOCAL.choose(&mut rng).unwrap().to_string()),
                NoiseLabel::WordMisuse => noisy[k] = vocab.choose(&mut rng).unwrap().clone(),
                NoiseLabel::ContextWordMissing => {
                    if noisy.len() > 3 {
                        noisy.remove(k);
                    }
                }
                NoiseLabel::WrongSerial => {
                    let j = (k + 1) % noisy.len();
                    noisy.swap(k, j);
                }
                NoiseLabel::MixedLanguage => noisy.insert(k, ENGLISH.choose(&mut rng).unwrap().to_string()),
                NoiseLabel::PunctuationError => ending = ["!!!", " ,,", "???", ""].choose(&mut rng).unwrap().to_string(),
                NoiseLabel::SpacingError => {
                    if noisy.len() > 1 {
                        let j = (k + 1).min(noisy.len() - 1).max(1);
                        let merged = format!("{}{}", noisy[j - 1], noisy[j]);
                        noisy[j - 1] = merged;
                        noisy.remove(j);
                    }
                }
                NoiseLabel::SpellingError => noisy[k] = misspell(&mut rng, &noisy[k]),
                NoiseLabel::CoinedWord => noisy.push(COINED.choose(&mut rng).unwrap().to_string()),
                NoiseLabel::Others => noisy.insert(k, "…".to_string()),
            }
        }
        let text = format!("{}{ending}", noisy.join(" "));
        documents.push(
            Document::new(format!("s{i}"), noisekit::normalize(&text))
                .with_sentiment(sentiment)
                .with_noise(labels),
        );
        clean.push(noisekit::normalize(&clean_text));
    }
    SyntheticCorpus {
        documents,
        clean,
        dictionary: freq.into_iter().collect(),
    }
}

/// Dictionary file contents: `word<TAB>frequency` lines.
pub fn dictionary_tsv(dictionary: &[(String, u64)]) -> String {
    dictionary.iter().map(|(w, f)| format!("{w}\t{f}\n")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_labelled() {
        let a = synthetic_corpus(50, 3);
        let b = synthetic_corpus(50, 3);
        assert_eq!(a.documents, b.documents);
        assert!(a.documents.iter().all(|d| d.noise.is_some_and(|s| !s.is_empty())));
        assert!(a.documents.iter().all(|d| !d.text.is_empty()));
        assert_eq!(a.clean.len(), 50);
    }
}
