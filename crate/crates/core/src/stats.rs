//! Corpus statistics: duplicates, per-class counts, text lengths and
//! noise-label correlations.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::{normalize, tokenize, Document, NoiseLabel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DedupeKey {
    /// Compare normalized text.
    #[default]
    Normalized,
    /// Compare text byte for byte.
    Raw,
}

/// Keeps the first document for each key, preserving order. Returns the
/// kept documents and the number removed.
pub fn dedupe(corpus: &[Document], key: DedupeKey) -> (Vec<Document>, usize) {
    let mut seen = HashSet::new();
    let kept: Vec<Document> = corpus
        .iter()
        .filter(|d| {
            let k = match key {
                DedupeKey::Normalized => normalize(&d.text),
                DedupeKey::Raw => d.text.clone(),
            };
            seen.insert(k)
        })
        .cloned()
        .collect();
    let removed = corpus.len() - kept.len();
    (kept, removed)
}

/// Number of word (non-punctuation) tokens.
pub fn word_count(text: &str) -> usize {
    tokenize(text).word_indices().count()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassStat {
    pub label: String,
    pub count: usize,
    /// Mean word tokens per instance; 0 when `defined` is false.
    pub mean_words: f64,
    pub defined: bool,
}

/// Instance count and mean word count for each noise class. Every document
/// must carry noise labels.
pub fn class_stats(corpus: &[Document]) -> Result<Vec<ClassStat>> {
    let mut counts = [0usize; NoiseLabel::COUNT];
    let mut words = [0usize; NoiseLabel::COUNT];
    for doc in corpus {
        let labels = doc
            .noise
            .ok_or_else(|| Error::MissingLabels(format!("document {} has no noise labels", doc.id)))?;
        let n = word_count(&doc.text);
        for label in labels.iter() {
            counts[label.index()] += 1;
            words[label.index()] += n;
        }
    }
    Ok(NoiseLabel::ALL
        .iter()
        .map(|l| {
            let i = l.index();
            let defined = counts[i] > 0;
            ClassStat {
                label: l.name().to_string(),
                count: counts[i],
                mean_words: if defined { words[i] as f64 / counts[i] as f64 } else { 0.0 },
                defined,
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bin {
    /// Inclusive lower bound of the bin in characters.
    pub start: usize,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LengthHistogram {
    pub bin_width: usize,
    /// Contiguous bins from the one holding the shortest text to the one
    /// holding the longest; empty for an empty corpus.
    pub bins: Vec<Bin>,
    pub min: usize,
    pub max: usize,
    pub mean: f64,
}

/// Character-length histogram. Lengths count Unicode scalar values of the
/// text as given.
pub fn length_histogram<S: AsRef<str>>(texts: &[S], bin_width: usize) -> Result<LengthHistogram> {
    if bin_width == 0 {
        return Err(Error::InvalidConfig("bin width must be at least 1".into()));
    }
    let lengths: Vec<usize> = texts.iter().map(|t| t.as_ref().chars().count()).collect();
    let (Some(&min), Some(&max)) = (lengths.iter().min(), lengths.iter().max()) else {
        return Ok(LengthHistogram {
            bin_width,
            bins: Vec::new(),
            min: 0,
            max: 0,
            mean: 0.0,
        });
    };
    let first = min / bin_width;
    let last = max / bin_width;
    let mut bins: Vec<Bin> = (first..=last)
        .map(|b| Bin {
            start: b * bin_width,
            count: 0,
        })
        .collect();
    for &len in &lengths {
        bins[len / bin_width - first].count += 1;
    }
    let mean = lengths.iter().sum::<usize>() as f64 / lengths.len() as f64;
    Ok(LengthHistogram {
        bin_width,
        bins,
        min,
        max,
        mean,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix {
    pub labels: Vec<String>,
    pub values: Vec<Vec<f64>>,
    /// Labels whose indicator column is constant; their off-diagonal
    /// entries are reported as 0.
    pub constant: Vec<String>,
}

impl CorrelationMatrix {
    pub fn get(&self, a: NoiseLabel, b: NoiseLabel) -> f64 {
        self.values[a.index()][b.index()]
    }
}

pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Pearson correlation between every pair of 0/1 noise indicator columns.
pub fn label_correlation(corpus: &[Document]) -> Result<CorrelationMatrix> {
    let sets: Vec<_> = corpus.iter().filter_map(|d| d.noise).collect();
    if sets.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "need at least 2 labelled documents, found {}",
            sets.len()
        )));
    }
    let columns: Vec<Vec<f64>> = NoiseLabel::ALL
        .iter()
        .map(|&l| sets.iter().map(|s| f64::from(u8::from(s.contains(l)))).collect())
        .collect();
    let k = NoiseLabel::COUNT;
    let mut values = vec![vec![0.0; k]; k];
    let mut constant = Vec::new();
    for i in 0..k {
        values[i][i] = 1.0;
        if pearson(&columns[i], &columns[i]).is_none() {
            log::warn!("noise label {} is constant; its correlations are reported as 0", NoiseLabel::ALL[i]);
            constant.push(NoiseLabel::ALL[i].name().to_string());
        }
        for j in 0..i {
            let r = pearson(&columns[i], &columns[j]).unwrap_or(0.0);
            values[i][j] = r;
            values[j][i] = r;
        }
    }
    Ok(CorrelationMatrix {
        labels: NoiseLabel::ALL.iter().map(|l| l.name().to_string()).collect(),
        values,
        constant,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub documents: usize,
    pub sentiment_counts: BTreeMap<String, usize>,
    pub classes: Option<Vec<ClassStat>>,
    pub lengths: LengthHistogram,
    pub correlation: Option<CorrelationMatrix>,
}

/// Everything above in one report. Class statistics and correlations are
/// included only when every document carries noise labels.
pub fn corpus_stats(corpus: &[Document], bin_width: usize) -> Result<CorpusStats> {
    let mut sentiment_counts = BTreeMap::new();
    for d in corpus {
        if let Some(s) = d.sentiment {
            *sentiment_counts.entry(s.to_string()).or_insert(0) += 1;
        }
    }
    let labelled = !corpus.is_empty() && corpus.iter().all(|d| d.noise.is_some());
    let texts: Vec<&str> = corpus.iter().map(|d| d.text.as_str()).collect();
    Ok(CorpusStats {
        documents: corpus.len(),
        sentiment_counts,
        classes: if labelled { Some(class_stats(corpus)?) } else { None },
        lengths: length_histogram(&texts, bin_width)?,
        correlation: if labelled && corpus.len() >= 2 {
            Some(label_correlation(corpus)?)
        } else {
            None
        },
    })
}

/// `start<TAB>count` lines.
pub fn histogram_tsv(h: &LengthHistogram) -> String {
    let mut out = String::from("bin\tcount\n");
    for b in &h.bins {
        let _ = writeln!(out, "{}\t{}", b.start, b.count);
    }
    out
}

/// `row<TAB>column<TAB>value` lines.
pub fn correlation_tsv(m: &CorrelationMatrix) -> String {
    let mut out = String::from("row\tcolumn\tvalue\n");
    for (i, row) in m.values.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let _ = writeln!(out, "{}\t{}\t{v}", m.labels[i], m.labels[j]);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::NoiseLabelSet;

    fn doc(id: &str, text: &str, bits: u16) -> Document {
        Document::new(id, text).with_noise(NoiseLabelSet::from_bits(bits))
    }

    #[test]
    fn dedupe_examples() {
        let c = vec![doc("1", "x", 0), doc("2", "x", 0), doc("3", "y", 0)];
        let (kept, removed) = dedupe(&c, DedupeKey::Normalized);
        assert_eq!(removed, 1);
        assert_eq!(kept.iter().map(|d| d.id.as_str()).collect::<Vec<_>>(), ["1", "3"]);
        let (_, none) = dedupe(&kept, DedupeKey::Normalized);
        assert_eq!(none, 0);
    }

    #[test]
    fn dedupe_modes_differ_on_whitespace() {
        let c = vec![doc("1", "a b", 0), doc("2", "a  b", 0)];
        assert_eq!(dedupe(&c, DedupeKey::Normalized).1, 1);
        assert_eq!(dedupe(&c, DedupeKey::Raw).1, 0);
    }

    #[test]
    fn class_stats_examples() {
        let c = vec![doc("1", "one two , three", 0b1)];
        let s = class_stats(&c).unwrap();
        assert_eq!(s[0].count, 1);
        assert_eq!(s[0].mean_words, 3.0);
        assert!(s[0].defined);
        assert_eq!(s[1].count, 0);
        assert!(!s[1].defined);
        assert_eq!(s[1].mean_words, 0.0);

        let unlabelled = vec![Document::new("1", "x")];
        assert!(matches!(class_stats(&unlabelled), Err(Error::MissingLabels(_))));
    }

    #[test]
    fn histogram_examples() {
        let h = length_histogram(&["abcde"], 10).unwrap();
        assert_eq!(h.bins, vec![Bin { start: 0, count: 1 }]);
        assert_eq!((h.min, h.max, h.mean), (5, 5, 5.0));

        let h = length_histogram(&["ab", "abcdefghijklmnopqrstuv"], 5).unwrap();
        assert_eq!(h.bins.len(), 5);
        assert_eq!(h.bins.iter().map(|b| b.count).sum::<usize>(), 2);
        assert_eq!(h.bins[0].start, 0);
        assert_eq!(h.bins[4].start, 20);
        assert!(length_histogram(&["a"], 0).is_err());
    }

    #[test]
    fn correlation_examples() {
        let c = vec![doc("1", "a", 0b01), doc("2", "b", 0b01), doc("3", "c", 0b10), doc("4", "d", 0b10)];
        let m = label_correlation(&c).unwrap();
        assert!((m.values[0][1] + 1.0).abs() < 1e-12);
        assert_eq!(m.values[0][0], 1.0);
        assert_eq!(m.values[5][5], 1.0);
        assert_eq!(m.values[5][0], 0.0);
        assert_eq!(m.constant.len(), 8);
        assert!(matches!(label_correlation(&c[..1]), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn tsv_emitters() {
        let h = length_histogram(&["ab"], 2).unwrap();
        assert_eq!(histogram_tsv(&h), "bin\tcount\n2\t1\n");
        let c = vec![doc("1", "a", 0b01), doc("2", "b", 0b10)];
        let tsv = correlation_tsv(&label_correlation(&c).unwrap());
        assert_eq!(tsv.lines().count(), 101);
    }
}
