use std::collections::{BTreeMap, HashMap, HashSet};

use crate::reduce::phonetic::{phonetic_encode, PhoneticCode, PhoneticTable};
use crate::text::{is_punctuation_token, tokenize};

/// Anything that can answer "is this word known?".
pub trait Vocabulary {
    fn contains_word(&self, word: &str) -> bool;
}

impl Vocabulary for HashSet<String> {
    fn contains_word(&self, word: &str) -> bool {
        self.contains(word)
    }
}

/// Word list with frequencies and a phonetic index.
#[derive(Debug, Clone)]
pub struct Dictionary {
    freq: BTreeMap<String, u64>,
    phonetic_index: HashMap<PhoneticCode, Vec<String>>,
    table: PhoneticTable,
}

/// Why a word could not be added.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RejectedWord {
    /// Does not tokenize to exactly one non-punctuation token.
    NotSingleWord,
    /// Contains a mask placeholder delimiter.
    ReservedCharacter,
}

impl Dictionary {
    pub fn new(table: PhoneticTable) -> Self {
        Dictionary {
            freq: BTreeMap::new(),
            phonetic_index: HashMap::new(),
            table,
        }
    }

    /// Builds a dictionary, silently skipping words that are not single
    /// word tokens.
    pub fn from_words<I, S>(table: PhoneticTable, words: I) -> Self
    where
        I: IntoIterator<Item = (S, u64)>,
        S: AsRef<str>,
    {
        let mut dict = Dictionary::new(table);
        for (w, f) in words {
            let _ = dict.insert(w.as_ref(), f);
        }
        dict
    }

    /// Adds `count` occurrences of `word`.
    pub fn insert(&mut self, word: &str, count: u64) -> Result<(), RejectedWord> {
        if word.contains(['<', '>']) {
            return Err(RejectedWord::ReservedCharacter);
        }
        let seq = tokenize(word);
        if seq.len() != 1 || is_punctuation_token(&seq.tokens[0]) || seq.tokens[0] != word {
            return Err(RejectedWord::NotSingleWord);
        }
        match self.freq.get_mut(word) {
            Some(f) => *f += count,
            None => {
                self.freq.insert(word.to_string(), count);
                let code = phonetic_encode(word, &self.table).expect("non-empty word");
                let bucket = self.phonetic_index.entry(code).or_default();
                // Keep buckets sorted so candidate order is deterministic.
                let pos = bucket.binary_search_by(|w| w.as_str().cmp(word)).unwrap_err();
                bucket.insert(pos, word.to_string());
            }
        }
        Ok(())
    }

    pub fn contains(&self, word: &str) -> bool {
        self.freq.contains_key(word)
    }

    pub fn freq(&self, word: &str) -> Option<u64> {
        self.freq.get(word).copied()
    }

    pub fn len(&self) -> usize {
        self.freq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freq.is_empty()
    }

    pub fn table(&self) -> &PhoneticTable {
        &self.table
    }

    /// Words in lexicographic order with their frequencies.
    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> + '_ {
        self.freq.iter().map(|(w, &f)| (w.as_str(), f))
    }

    /// Dictionary words sharing `code`, sorted.
    pub fn candidates(&self, code: &PhoneticCode) -> &[String] {
        self.phonetic_index.get(code).map_or(&[], Vec::as_slice)
    }

    pub fn code_of(&self, word: &str) -> Option<PhoneticCode> {
        phonetic_encode(word, &self.table).ok()
    }
}

impl Vocabulary for Dictionary {
    fn contains_word(&self, word: &str) -> bool {
        self.contains(word)
    }
}
