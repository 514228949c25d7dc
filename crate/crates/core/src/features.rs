//! TF-IDF featurization over character and word n-grams.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::{char_ngrams, tokenize, word_ngrams, Document};

pub const TFIDF_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnalyzerMode {
    Char,
    Word,
    CharPlusWord,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyzerConfig {
    pub mode: AnalyzerMode,
    pub n_min: usize,
    pub n_max: usize,
    /// Terms seen in fewer documents than this are dropped.
    #[serde(default = "default_min_df")]
    pub min_df: usize,
}

fn default_min_df() -> usize {
    1
}

impl AnalyzerConfig {
    pub const MAX_N: usize = 8;

    pub fn new(mode: AnalyzerMode) -> Self {
        AnalyzerConfig {
            mode,
            n_min: 1,
            n_max: 4,
            min_df: 1,
        }
    }

    pub fn with_range(mut self, n_min: usize, n_max: usize) -> Self {
        self.n_min = n_min;
        self.n_max = n_max;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_min < 1 || self.n_min > self.n_max || self.n_max > Self::MAX_N {
            return Err(Error::InvalidConfig(format!(
                "n-gram range {}..={} must satisfy 1 <= n_min <= n_max <= {}",
                self.n_min,
                self.n_max,
                Self::MAX_N
            )));
        }
        if self.min_df < 1 {
            return Err(Error::InvalidConfig("min_df must be at least 1".into()));
        }
        Ok(())
    }
}

impl Default for AnalyzerConfig {
    fn default() -> Self {
        AnalyzerConfig::new(AnalyzerMode::Char)
    }
}

/// Sparse vector with strictly increasing indices and no stored zeros.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SparseVector {
    entries: Vec<(u32, f64)>,
}

impl SparseVector {
    pub fn zero() -> Self {
        SparseVector::default()
    }

    /// Builds a vector from arbitrary `(index, weight)` pairs, summing
    /// duplicates and dropping zeros.
    pub fn from_pairs(mut pairs: Vec<(u32, f64)>) -> Self {
        pairs.sort_by_key(|&(i, _)| i);
        let mut entries: Vec<(u32, f64)> = Vec::with_capacity(pairs.len());
        for (i, w) in pairs {
            match entries.last_mut() {
                Some((j, acc)) if *j == i => *acc += w,
                _ => entries.push((i, w)),
            }
        }
        entries.retain(|&(_, w)| w != 0.0);
        SparseVector { entries }
    }

    pub fn entries(&self) -> &[(u32, f64)] {
        &self.entries
    }

    /// Number of stored (non-zero) entries.
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|&(_, w)| w * w).sum::<f64>().sqrt()
    }

    /// One past the largest stored index (0 for the zero vector).
    pub fn min_dimension(&self) -> usize {
        self.entries.last().map_or(0, |&(i, _)| i as usize + 1)
    }

    pub fn dot_dense(&self, dense: &[f64]) -> f64 {
        self.entries.iter().map(|&(i, w)| w * dense[i as usize]).sum()
    }

    /// Scales to unit L2 norm; the zero vector stays zero.
    pub fn normalized(mut self) -> Self {
        let norm = self.norm();
        if norm > 0.0 {
            for (_, w) in &mut self.entries {
                *w /= norm;
            }
        }
        self
    }
}

/// Concatenates two feature spaces: `b` is shifted by `offset` and the result
/// rescaled to unit norm.
pub fn combine(a: &SparseVector, b: &SparseVector, offset: usize) -> Result<SparseVector> {
    let required = a.min_dimension();
    if offset < required {
        return Err(Error::OffsetTooSmall { offset, required });
    }
    let mut entries = a.entries.clone();
    entries.extend(b.entries.iter().map(|&(i, w)| (i + offset as u32, w)));
    Ok(SparseVector { entries }.normalized())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TermSpace {
    Char,
    Word,
}

#[derive(Debug, Clone)]
struct Vocabulary {
    space: TermSpace,
    terms: Vec<String>,
    idf: Vec<f64>,
    index: HashMap<String, u32>,
}

impl Vocabulary {
    fn from_terms(space: TermSpace, terms: Vec<String>, idf: Vec<f64>) -> Self {
        let index = terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i as u32))
            .collect();
        Vocabulary {
            space,
            terms,
            idf,
            index,
        }
    }

    fn vectorize(&self, terms: &[String]) -> SparseVector {
        let mut counts: HashMap<u32, f64> = HashMap::new();
        for t in terms {
            if let Some(&i) = self.index.get(t) {
                *counts.entry(i).or_insert(0.0) += 1.0;
            }
        }
        let pairs = counts
            .into_iter()
            .map(|(i, tf)| (i, tf * self.idf[i as usize]))
            .collect();
        SparseVector::from_pairs(pairs).normalized()
    }
}

fn extract(space: TermSpace, text: &str, config: &AnalyzerConfig) -> Vec<String> {
    match space {
        TermSpace::Char => char_ngrams(text, config.n_min, config.n_max),
        TermSpace::Word => word_ngrams(&tokenize(text).tokens, config.n_min, config.n_max),
    }
}

fn spaces_for(mode: AnalyzerMode) -> &'static [TermSpace] {
    match mode {
        AnalyzerMode::Char => &[TermSpace::Char],
        AnalyzerMode::Word => &[TermSpace::Word],
        AnalyzerMode::CharPlusWord => &[TermSpace::Char, TermSpace::Word],
    }
}

/// Smoothed inverse document frequency.
pub fn smoothed_idf(corpus_size: usize, doc_freq: usize) -> f64 {
    ((1.0 + corpus_size as f64) / (1.0 + doc_freq as f64)).ln() + 1.0
}

/// A fitted TF-IDF vectorizer. For [`AnalyzerMode::CharPlusWord`] the
/// character space occupies the low indices and the word space follows it.
#[derive(Debug, Clone)]
pub struct TfidfModel {
    config: AnalyzerConfig,
    corpus_size: usize,
    spaces: Vec<Vocabulary>,
}

pub fn fit_tfidf(corpus: &[Document], config: AnalyzerConfig) -> Result<TfidfModel> {
    let texts: Vec<&str> = corpus.iter().map(|d| d.text.as_str()).collect();
    TfidfModel::fit(&texts, config)
}

pub fn transform(model: &TfidfModel, doc: &Document) -> SparseVector {
    model.transform(&doc.text)
}

impl TfidfModel {
    pub fn fit<S: AsRef<str>>(texts: &[S], config: AnalyzerConfig) -> Result<Self> {
        config.validate()?;
        if texts.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        let n = texts.len();
        let spaces = spaces_for(config.mode)
            .iter()
            .map(|&space| {
                let mut df: HashMap<String, usize> = HashMap::new();
                for text in texts {
                    let unique: HashSet<String> = extract(space, text.as_ref(), &config).into_iter().collect();
                    for term in unique {
                        *df.entry(term).or_insert(0) += 1;
                    }
                }
                let mut terms: Vec<(String, usize)> =
                    df.into_iter().filter(|&(_, d)| d >= config.min_df).collect();
                terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
                let idf = terms.iter().map(|&(_, d)| smoothed_idf(n, d)).collect();
                let terms = terms.into_iter().map(|(t, _)| t).collect();
                Vocabulary::from_terms(space, terms, idf)
            })
            .collect();
        Ok(TfidfModel {
            config,
            corpus_size: n,
            spaces,
        })
    }

    pub fn config(&self) -> &AnalyzerConfig {
        &self.config
    }

    pub fn corpus_size(&self) -> usize {
        self.corpus_size
    }

    /// Total number of features.
    pub fn dimension(&self) -> usize {
        self.spaces.iter().map(|v| v.terms.len()).sum()
    }

    /// Feature index and idf of a term in the given space.
    pub fn lookup(&self, space: TermSpace, term: &str) -> Option<(usize, f64)> {
        let mut offset = 0;
        for v in &self.spaces {
            if v.space == space {
                return v
                    .index
                    .get(term)
                    .map(|&i| (offset + i as usize, v.idf[i as usize]));
            }
            offset += v.terms.len();
        }
        None
    }

    pub fn transform(&self, text: &str) -> SparseVector {
        let mut out = SparseVector::zero();
        let mut offset = 0;
        for v in &self.spaces {
            let part = v.vectorize(&extract(v.space, text, &self.config));
            out = if offset == 0 {
                part
            } else {
                combine(&out, &part, offset).expect("offset covers preceding space")
            };
            offset += v.terms.len();
        }
        out
    }

    pub fn to_json(&self) -> TfidfModelJson {
        let mut terms = Vec::with_capacity(self.dimension());
        let mut offset = 0;
        for v in &self.spaces {
            for (i, (t, &idf)) in v.terms.iter().zip(&v.idf).enumerate() {
                terms.push(TermEntry {
                    term: t.clone(),
                    index: offset + i,
                    idf,
                    space: v.space,
                });
            }
            offset += v.terms.len();
        }
        TfidfModelJson {
            version: TFIDF_FORMAT_VERSION,
            config: self.config,
            corpus_size: self.corpus_size,
            terms,
        }
    }

    pub fn from_json(json: TfidfModelJson) -> Result<Self> {
        if json.version != TFIDF_FORMAT_VERSION {
            return Err(Error::UnsupportedVersion(json.version));
        }
        json.config.validate()?;
        let expected = spaces_for(json.config.mode);
        let mut grouped: BTreeMap<usize, (Vec<String>, Vec<f64>)> = BTreeMap::new();
        for (pos, entry) in json.terms.into_iter().enumerate() {
            if entry.index != pos {
                return Err(Error::InvalidConfig(format!(
                    "term indices must be dense and sorted; found {} at position {pos}",
                    entry.index
                )));
            }
            if !(entry.idf > 0.0 && entry.idf.is_finite()) {
                return Err(Error::InvalidConfig(format!("non-positive idf for {:?}", entry.term)));
            }
            let slot = expected
                .iter()
                .position(|&s| s == entry.space)
                .ok_or_else(|| Error::InvalidConfig(format!("unexpected term space {:?}", entry.space)))?;
            if grouped.keys().next_back().is_some_and(|&last| last > slot) {
                return Err(Error::InvalidConfig("term spaces out of order".into()));
            }
            let (terms, idf) = grouped.entry(slot).or_default();
            terms.push(entry.term);
            idf.push(entry.idf);
        }
        let spaces = expected
            .iter()
            .enumerate()
            .map(|(slot, &space)| {
                let (terms, idf) = grouped.remove(&slot).unwrap_or_default();
                Vocabulary::from_terms(space, terms, idf)
            })
            .collect();
        Ok(TfidfModel {
            config: json.config,
            corpus_size: json.corpus_size,
            spaces,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut s = serde_json::to_string(&self.to_json())?;
        s.push('\n');
        std::fs::write(path, s)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let s = std::fs::read_to_string(path)?;
        Self::from_json(serde_json::from_str(&s)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermEntry {
    pub term: String,
    pub index: usize,
    pub idf: f64,
    pub space: TermSpace,
}

/// On-disk form of a [`TfidfModel`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TfidfModelJson {
    pub version: u32,
    pub config: AnalyzerConfig,
    pub corpus_size: usize,
    pub terms: Vec<TermEntry>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn docs(texts: &[&str]) -> Vec<Document> {
        texts
            .iter()
            .enumerate()
            .map(|(i, t)| Document::new(i.to_string(), *t))
            .collect()
    }

    fn word1() -> AnalyzerConfig {
        AnalyzerConfig::new(AnalyzerMode::Word).with_range(1, 1)
    }

    #[test]
    fn idf_formula() {
        let m = fit_tfidf(&docs(&["x y"]), word1()).unwrap();
        assert_eq!(m.lookup(TermSpace::Word, "x").unwrap().1, 1.0);

        let m = fit_tfidf(&docs(&["a b", "a c", "a d", "a"]), word1()).unwrap();
        assert_eq!(m.lookup(TermSpace::Word, "a").unwrap().1, 1.0);
        let idf_b = m.lookup(TermSpace::Word, "b").unwrap().1;
        assert!((idf_b - (2.5f64.ln() + 1.0)).abs() < 1e-12);
        assert!((idf_b - 1.9163).abs() < 1e-4);
    }

    #[test]
    fn lexicographic_indices() {
        let m = fit_tfidf(&docs(&["c a", "b"]), word1()).unwrap();
        assert_eq!(m.lookup(TermSpace::Word, "a").unwrap().0, 0);
        assert_eq!(m.lookup(TermSpace::Word, "b").unwrap().0, 1);
        assert_eq!(m.lookup(TermSpace::Word, "c").unwrap().0, 2);
    }

    #[test]
    fn empty_corpus_rejected() {
        assert!(matches!(fit_tfidf(&[], word1()), Err(Error::EmptyCorpus)));
    }

    #[test]
    fn bad_range_rejected() {
        let cfg = AnalyzerConfig::new(AnalyzerMode::Char).with_range(2, 9);
        assert!(matches!(fit_tfidf(&docs(&["a"]), cfg), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn transform_examples() {
        let m = fit_tfidf(&docs(&["a b", "c"]), word1()).unwrap();
        let v = m.transform("a");
        assert_eq!(v.entries(), &[(0, 1.0)]);
        assert!(m.transform("zzz qqq").is_zero());
        let v = m.transform("a b");
        let h = 1.0 / 2f64.sqrt();
        for &(_, w) in v.entries() {
            assert!((w - h).abs() < 1e-12);
        }
    }

    #[test]
    fn min_df_drops_rare_terms() {
        let mut cfg = word1();
        cfg.min_df = 2;
        let m = fit_tfidf(&docs(&["a b", "a c"]), cfg).unwrap();
        assert_eq!(m.dimension(), 1);
    }

    #[test]
    fn combine_examples() {
        let v = SparseVector::from_pairs(vec![(0, 0.6), (2, 0.8)]);
        let z = SparseVector::zero();
        let shifted = combine(&z, &v, 5).unwrap();
        assert_eq!(shifted.entries().iter().map(|e| e.0).collect::<Vec<_>>(), vec![5, 7]);
        let same = combine(&v, &z, 3).unwrap();
        for (a, b) in same.entries().iter().zip(v.entries()) {
            assert_eq!(a.0, b.0);
            assert!((a.1 - b.1).abs() < 1e-12);
        }
        let both = combine(&v, &v, 3).unwrap();
        assert_eq!(both.nnz(), 4);
        assert!((both.norm() - 1.0).abs() < 1e-12);
        assert!(matches!(combine(&v, &v, 2), Err(Error::OffsetTooSmall { .. })));
    }

    #[test]
    fn char_plus_word_layout() {
        let cfg = AnalyzerConfig::new(AnalyzerMode::CharPlusWord).with_range(1, 2);
        let m = fit_tfidf(&docs(&["ab c", "c"]), cfg).unwrap();
        let (ci, _) = m.lookup(TermSpace::Char, "a").unwrap();
        let (wi, _) = m.lookup(TermSpace::Word, "ab").unwrap();
        assert!(ci < wi);
        let v = m.transform("ab");
        assert!((v.norm() - 1.0).abs() < 1e-12);
        assert!(v.entries().iter().any(|&(i, _)| i as usize == wi));
    }

    #[test]
    fn json_round_trip() {
        let cfg = AnalyzerConfig::new(AnalyzerMode::CharPlusWord).with_range(1, 3);
        let m = fit_tfidf(&docs(&["ab c", "c d", "abc"]), cfg).unwrap();
        let json = m.to_json();
        let back = TfidfModel::from_json(json.clone()).unwrap();
        assert_eq!(back.to_json(), json);
        assert_eq!(back.transform("ab d"), m.transform("ab d"));
    }

    #[test]
    fn json_rejects_gaps() {
        let m = fit_tfidf(&docs(&["a b"]), word1()).unwrap();
        let mut json = m.to_json();
        json.terms[1].index = 5;
        assert!(TfidfModel::from_json(json).is_err());
    }
}
