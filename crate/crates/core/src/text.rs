//! Text normalization, tokenization and n-gram extraction.
//!
//! Everything downstream (featurization, spell correction, metrics, dataset
//! statistics) sees text through [`normalize`] and [`tokenize`], so the rules
//! here define what a "word" and a "character" mean for the whole toolkit.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use unicode_general_category::{get_general_category, GeneralCategory};
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};

/// Joins the tokens of a word n-gram. Stripped by [`normalize`], so it can
/// never collide with input text.
pub const NGRAM_SEPARATOR: char = '\u{241F}';

const BUILTIN_PUNCT_TABLE: &str = include_str!("../data/punct_canon.tsv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SentimentLabel {
    Neutral,
    Positive,
    Negative,
}

impl SentimentLabel {
    /// Column order used everywhere (tie-breaks, weight vectors, reports).
    pub const ALL: [SentimentLabel; 3] = [
        SentimentLabel::Neutral,
        SentimentLabel::Positive,
        SentimentLabel::Negative,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SentimentLabel::Neutral => "neutral",
            SentimentLabel::Positive => "positive",
            SentimentLabel::Negative => "negative",
        }
    }
}

impl fmt::Display for SentimentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SentimentLabel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "neutral" => Ok(SentimentLabel::Neutral),
            "positive" => Ok(SentimentLabel::Positive),
            "negative" => Ok(SentimentLabel::Negative),
            other => Err(format!("unknown sentiment {other:?}")),
        }
    }
}

/// The ten noise categories, in their canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NoiseLabel {
    LocalWord,
    WordMisuse,
    ContextWordMissing,
    WrongSerial,
    MixedLanguage,
    PunctuationError,
    SpacingError,
    SpellingError,
    CoinedWord,
    Others,
}

impl NoiseLabel {
    pub const COUNT: usize = 10;

    pub const ALL: [NoiseLabel; NoiseLabel::COUNT] = [
        NoiseLabel::LocalWord,
        NoiseLabel::WordMisuse,
        NoiseLabel::ContextWordMissing,
        NoiseLabel::WrongSerial,
        NoiseLabel::MixedLanguage,
        NoiseLabel::PunctuationError,
        NoiseLabel::SpacingError,
        NoiseLabel::SpellingError,
        NoiseLabel::CoinedWord,
        NoiseLabel::Others,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            NoiseLabel::LocalWord => "Local Word",
            NoiseLabel::WordMisuse => "Word Misuse",
            NoiseLabel::ContextWordMissing => "Context/Word Missing",
            NoiseLabel::WrongSerial => "Wrong Serial",
            NoiseLabel::MixedLanguage => "Mixed Language",
            NoiseLabel::PunctuationError => "Punctuation Error",
            NoiseLabel::SpacingError => "Spacing Error",
            NoiseLabel::SpellingError => "Spelling Error",
            NoiseLabel::CoinedWord => "Coined Word",
            NoiseLabel::Others => "Others",
        }
    }
}

impl fmt::Display for NoiseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Fixed-order set of noise flags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct NoiseLabelSet(u16);

impl NoiseLabelSet {
    const MASK: u16 = (1 << NoiseLabel::COUNT) - 1;

    pub fn empty() -> Self {
        NoiseLabelSet(0)
    }

    pub fn from_bits(bits: u16) -> Self {
        NoiseLabelSet(bits & Self::MASK)
    }

    pub fn bits(self) -> u16 {
        self.0
    }

    pub fn from_flags(flags: &[bool]) -> Self {
        let mut set = Self::empty();
        for (i, &on) in flags.iter().enumerate().take(NoiseLabel::COUNT) {
            if on {
                set.0 |= 1 << i;
            }
        }
        set
    }

    pub fn contains(self, label: NoiseLabel) -> bool {
        self.0 & (1 << label.index()) != 0
    }

    pub fn insert(&mut self, label: NoiseLabel) {
        self.0 |= 1 << label.index();
    }

    pub fn remove(&mut self, label: NoiseLabel) {
        self.0 &= !(1 << label.index());
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = NoiseLabel> {
        NoiseLabel::ALL.into_iter().filter(move |l| self.contains(*l))
    }

    pub fn union(self, other: Self) -> Self {
        NoiseLabelSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        NoiseLabelSet(self.0 & other.0)
    }

    /// Ten-character `0`/`1` string in canonical label order.
    pub fn to_bitstring(self) -> String {
        NoiseLabel::ALL
            .iter()
            .map(|l| if self.contains(*l) { '1' } else { '0' })
            .collect()
    }

    pub fn parse_bitstring(s: &str) -> Option<Self> {
        if s.len() != NoiseLabel::COUNT {
            return None;
        }
        let mut set = Self::empty();
        for (i, b) in s.bytes().enumerate() {
            match b {
                b'1' => set.0 |= 1 << i,
                b'0' => {}
                _ => return None,
            }
        }
        Some(set)
    }
}

impl FromIterator<NoiseLabel> for NoiseLabelSet {
    fn from_iter<I: IntoIterator<Item = NoiseLabel>>(iter: I) -> Self {
        let mut set = Self::empty();
        for l in iter {
            set.insert(l);
        }
        set
    }
}

/// One corpus record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    pub text: String,
    pub sentiment: Option<SentimentLabel>,
    pub noise: Option<NoiseLabelSet>,
}

impl Document {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        Document {
            id: id.into(),
            text: text.into(),
            sentiment: None,
            noise: None,
        }
    }

    pub fn with_sentiment(mut self, label: SentimentLabel) -> Self {
        self.sentiment = Some(label);
        self
    }

    pub fn with_noise(mut self, labels: NoiseLabelSet) -> Self {
        self.noise = Some(labels);
        self
    }
}

/// Code-point mapping that folds visually equivalent punctuation together.
#[derive(Debug, Clone, Default)]
pub struct PunctTable {
    map: HashMap<char, char>,
}

impl PunctTable {
    /// Parses `FROM<TAB>TO` lines; code points are written `U+XXXX` or as
    /// the literal character.
    pub fn parse(src: &str) -> std::result::Result<Self, (usize, String)> {
        let mut map = HashMap::new();
        for (lineno, raw) in src.lines().enumerate() {
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let mut fields = line.split('\t');
            let (Some(from), Some(to), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err((lineno + 1, "expected FROM<TAB>TO".into()));
            };
            let from = parse_code_point(from).ok_or((lineno + 1, format!("bad code point {from:?}")))?;
            let to = parse_code_point(to).ok_or((lineno + 1, format!("bad code point {to:?}")))?;
            map.insert(from, to);
        }
        // Chains would make normalization order-dependent.
        for (from, to) in &map {
            if map.contains_key(to) && to != from {
                return Err((0, format!("mapping target U+{:04X} is itself mapped", *to as u32)));
            }
        }
        Ok(PunctTable { map })
    }

    pub fn builtin() -> &'static PunctTable {
        static TABLE: OnceLock<PunctTable> = OnceLock::new();
        TABLE.get_or_init(|| PunctTable::parse(BUILTIN_PUNCT_TABLE).expect("builtin punctuation table"))
    }

    pub fn get(&self, c: char) -> Option<char> {
        self.map.get(&c).copied()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

pub(crate) fn parse_code_point(field: &str) -> Option<char> {
    let field = field.trim();
    if let Some(hex) = field.strip_prefix("U+").or_else(|| field.strip_prefix("u+")) {
        return u32::from_str_radix(hex, 16).ok().and_then(char::from_u32);
    }
    let mut chars = field.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => Some(c),
        _ => None,
    }
}

/// Canonical form of `text` using the built-in punctuation table.
pub fn normalize(text: &str) -> String {
    normalize_with(text, PunctTable::builtin())
}

/// NFC composition, punctuation folding, separator stripping and
/// whitespace collapsing.
pub fn normalize_with(text: &str, table: &PunctTable) -> String {
    let fold = |s: &str| -> String {
        s.chars()
            .filter(|&c| c != NGRAM_SEPARATOR)
            .map(|c| table.get(c).unwrap_or(c))
            .collect()
    };
    // Folding before and after composition: removing a separator can expose
    // a new composable pair, and composition can yield a mapped code point.
    let composed: String = fold(text).nfc().collect();
    let folded = fold(&composed);

    let mut out = String::with_capacity(folded.len());
    let mut pending_space = false;
    for c in folded.chars() {
        if c.is_whitespace() {
            pending_space = !out.is_empty();
        } else {
            if pending_space {
                out.push(' ');
                pending_space = false;
            }
            out.push(c);
        }
    }
    out
}

/// Whether `c` is a punctuation code point (Unicode general category P*).
pub fn is_punctuation(c: char) -> bool {
    matches!(
        get_general_category(c),
        GeneralCategory::ConnectorPunctuation
            | GeneralCategory::DashPunctuation
            | GeneralCategory::OpenPunctuation
            | GeneralCategory::ClosePunctuation
            | GeneralCategory::InitialPunctuation
            | GeneralCategory::FinalPunctuation
            | GeneralCategory::OtherPunctuation
    )
}

/// Whether a token is a single punctuation code point.
pub fn is_punctuation_token(token: &str) -> bool {
    let mut chars = token.chars();
    matches!((chars.next(), chars.next()), (Some(c), None) if is_punctuation(c))
}

/// Tokens with their character spans (`start..end`, in Unicode scalar
/// values) into the text they were cut from.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TokenSequence {
    pub tokens: Vec<String>,
    pub spans: Vec<(usize, usize)>,
}

impl TokenSequence {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn is_word(&self, i: usize) -> bool {
        !is_punctuation_token(&self.tokens[i])
    }

    /// Indices of non-punctuation tokens.
    pub fn word_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.tokens.len()).filter(|&i| self.is_word(i))
    }

    pub fn words(&self) -> impl Iterator<Item = &str> + '_ {
        self.word_indices().map(|i| self.tokens[i].as_str())
    }

    pub fn as_strs(&self) -> Vec<&str> {
        self.tokens.iter().map(String::as_str).collect()
    }

    /// Rewrites `source` (the text this sequence was cut from), substituting
    /// the tokens at the given indices and leaving everything else
    /// byte-for-byte intact.
    pub fn rewrite(&self, source: &str, replacements: &[(usize, String)]) -> String {
        let mut by_index: Vec<Option<&str>> = vec![None; self.tokens.len()];
        for (i, r) in replacements {
            by_index[*i] = Some(r.as_str());
        }
        let byte_at = char_to_byte_offsets(source);
        let mut out = String::with_capacity(source.len());
        let mut cursor = 0;
        for (i, &(start, end)) in self.spans.iter().enumerate() {
            if let Some(r) = by_index[i] {
                let (bs, be) = (byte_at[start], byte_at[end]);
                out.push_str(&source[cursor..bs]);
                out.push_str(r);
                cursor = be;
            }
        }
        out.push_str(&source[cursor..]);
        out
    }
}

fn char_to_byte_offsets(s: &str) -> Vec<usize> {
    let mut v: Vec<usize> = s.char_indices().map(|(b, _)| b).collect();
    v.push(s.len());
    v
}

/// Splits on whitespace; every punctuation code point becomes its own
/// token, other characters (combining marks included) stay with their word.
pub fn tokenize(text: &str) -> TokenSequence {
    let mut seq = TokenSequence::default();
    let mut current = String::new();
    let mut start = 0;
    let flush = |seq: &mut TokenSequence, current: &mut String, start: usize, end: usize| {
        if !current.is_empty() {
            seq.tokens.push(std::mem::take(current));
            seq.spans.push((start, end));
        }
    };
    for (pos, c) in text.chars().enumerate() {
        if c.is_whitespace() {
            flush(&mut seq, &mut current, start, pos);
        } else if is_punctuation(c) {
            flush(&mut seq, &mut current, start, pos);
            seq.tokens.push(c.to_string());
            seq.spans.push((pos, pos + 1));
        } else {
            if current.is_empty() {
                start = pos;
            }
            current.push(c);
        }
    }
    let end = text.chars().count();
    flush(&mut seq, &mut current, start, end);
    seq
}

fn check_range(n_min: usize, n_max: usize) {
    assert!(
        n_min >= 1 && n_min <= n_max,
        "n-gram range must satisfy 1 <= n_min <= n_max (got {n_min}..={n_max})"
    );
}

/// Contiguous character n-grams for every `n` in `n_min..=n_max`, grouped
/// by `n` and in reading order within each group. Duplicates are kept.
///
/// # Panics
///
/// If `n_min == 0` or `n_min > n_max`.
pub fn char_ngrams(text: &str, n_min: usize, n_max: usize) -> Vec<String> {
    check_range(n_min, n_max);
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    for n in n_min..=n_max {
        if n > chars.len() {
            break;
        }
        out.extend(chars.windows(n).map(|w| w.iter().collect::<String>()));
    }
    out
}

/// Contiguous token windows joined by [`NGRAM_SEPARATOR`].
///
/// # Panics
///
/// If `n_min == 0` or `n_min > n_max`.
pub fn word_ngrams<S: AsRef<str>>(tokens: &[S], n_min: usize, n_max: usize) -> Vec<String> {
    check_range(n_min, n_max);
    let mut out = Vec::new();
    let mut sep = [0u8; 4];
    let sep: &str = NGRAM_SEPARATOR.encode_utf8(&mut sep);
    for n in n_min..=n_max {
        if n > tokens.len() {
            break;
        }
        out.extend(tokens.windows(n).map(|w| {
            w.iter().map(AsRef::as_ref).collect::<Vec<&str>>().join(sep)
        }));
    }
    out
}

/// Parses the punctuation table from a file.
pub fn load_punct_table(path: &std::path::Path) -> Result<PunctTable> {
    let src = std::fs::read_to_string(path)?;
    PunctTable::parse(&src).map_err(|(line, reason)| Error::malformed(path, line, 1, reason))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn collapses_whitespace() {
        assert_eq!(normalize("a  b"), "a b");
        assert_eq!(normalize("  a \t\n b  "), "a b");
        assert_eq!(normalize("abc"), "abc");
        assert_eq!(normalize(""), "");
        assert_eq!(normalize("   "), "");
    }

    #[test]
    fn recomposes_decomposed_vowel_sign() {
        // BENGALI VOWEL SIGN O decomposes to E + AA.
        let decomposed = "\u{0995}\u{09C7}\u{09BE}";
        let out = normalize(decomposed);
        assert_eq!(out, "\u{0995}\u{09CB}");
        assert_eq!(normalize(&out), out);
    }

    #[test]
    fn folds_punctuation_and_strips_separator() {
        assert_eq!(normalize("\u{201C}hi\u{201D}"), "\"hi\"");
        assert_eq!(normalize("a\u{2014}b"), "a-b");
        assert_eq!(normalize("a|b"), "a\u{0964}b");
        assert_eq!(normalize("a\u{241F}b"), "ab");
    }

    #[test]
    fn builtin_table_loads() {
        assert!(PunctTable::builtin().len() > 20);
    }

    #[test]
    fn tokenize_examples() {
        assert_eq!(tokenize("a b").tokens, vec!["a", "b"]);
        assert_eq!(tokenize("a, b").tokens, vec!["a", ",", "b"]);
        assert!(tokenize("").is_empty());
        let seq = tokenize("ab,c");
        assert_eq!(seq.tokens, vec!["ab", ",", "c"]);
        assert_eq!(seq.spans, vec![(0, 2), (2, 3), (3, 4)]);
    }

    #[test]
    fn combining_marks_stay_attached() {
        let seq = tokenize("\u{0995}\u{09BF} \u{0996}\u{09CD}");
        assert_eq!(seq.tokens, vec!["\u{0995}\u{09BF}", "\u{0996}\u{09CD}"]);
    }

    #[test]
    fn mask_token_is_one_word() {
        let seq = tokenize("x <MASK>, y");
        assert_eq!(seq.tokens, vec!["x", "<MASK>", ",", "y"]);
    }

    #[test]
    fn rewrite_preserves_spacing() {
        let text = "aa, bb  cc";
        let seq = tokenize(text);
        assert_eq!(seq.rewrite(text, &[(2, "X".into())]), "aa, X  cc");
        assert_eq!(seq.rewrite(text, &[]), text);
    }

    #[test]
    fn char_ngram_examples() {
        assert_eq!(char_ngrams("ab", 1, 2), vec!["a", "b", "ab"]);
        assert_eq!(char_ngrams("abc", 2, 2), vec!["ab", "bc"]);
        assert!(char_ngrams("", 1, 4).is_empty());
    }

    #[test]
    fn word_ngram_examples() {
        assert_eq!(word_ngrams(&["a", "b"], 1, 2), vec!["a", "b", "a\u{241F}b"]);
        assert!(word_ngrams(&["a"], 2, 2).is_empty());
    }

    #[test]
    #[should_panic]
    fn zero_n_min_panics() {
        char_ngrams("abc", 0, 2);
    }

    #[test]
    fn noise_bitstring() {
        let set = NoiseLabelSet::parse_bitstring("0100000000").unwrap();
        assert_eq!(set.iter().collect::<Vec<_>>(), vec![NoiseLabel::WordMisuse]);
        assert_eq!(set.to_bitstring(), "0100000000");
        assert!(NoiseLabelSet::parse_bitstring("01").is_none());
        assert!(NoiseLabelSet::parse_bitstring("010000000x").is_none());
    }

    fn expected_count(len: usize, n_min: usize, n_max: usize) -> usize {
        (n_min..=n_max).map(|n| (len + 1).saturating_sub(n)).sum()
    }

    #[test]
    fn ngram_counts_exhaustive_up_to_20() {
        let alphabet = ['a', 'ক', ' ', ','];
        for len in 0..=20usize {
            let s: String = (0..len).map(|i| alphabet[(i * 7 + len) % alphabet.len()]).collect();
            assert_eq!(char_ngrams(&s, 1, 4).len(), expected_count(len, 1, 4));
            let toks: Vec<String> = (0..len).map(|i| i.to_string()).collect();
            for (lo, hi) in [(1, 1), (1, 4), (2, 3), (3, 8)] {
                assert_eq!(char_ngrams(&s, lo, hi).len(), expected_count(len, lo, hi));
                assert_eq!(word_ngrams(&toks, lo, hi).len(), expected_count(len, lo, hi));
            }
        }
    }

    fn noisy_string() -> impl Strategy<Value = String> {
        let pool: Vec<char> = vec![
            'a', 'b', ' ', '\t', '\n', ',', '.', '|', '\u{201C}', '\u{2014}', '\u{241F}',
            '\u{0995}', '\u{09C7}', '\u{09BE}', '\u{09CB}', '\u{0301}', 'e', '\u{00A0}',
            '\u{037E}', '\u{200C}', '!', '\u{FF01}',
        ];
        proptest::collection::vec(proptest::sample::select(pool), 0..24)
            .prop_map(|v| v.into_iter().collect())
    }

    proptest! {
        #[test]
        fn normalize_is_idempotent(s in noisy_string()) {
            let once = normalize(&s);
            prop_assert_eq!(normalize(&once), once.clone());
        }

        #[test]
        fn normalize_is_idempotent_any(s in "\\PC{0,30}") {
            let once = normalize(&s);
            prop_assert_eq!(normalize(&once), once.clone());
        }

        #[test]
        fn tokens_match_spans_and_keep_order(s in noisy_string()) {
            let text = normalize(&s);
            let seq = tokenize(&text);
            let chars: Vec<char> = text.chars().collect();
            let mut last_end = 0;
            for (tok, &(a, b)) in seq.tokens.iter().zip(&seq.spans) {
                prop_assert!(a >= last_end && a < b);
                let sub: String = chars[a..b].iter().collect();
                prop_assert_eq!(&sub, tok);
                last_end = b;
            }
            let joined: String = seq.tokens.concat();
            let non_ws: String = text.chars().filter(|c| !c.is_whitespace()).collect();
            prop_assert_eq!(joined, non_ws);
        }
    }
}
