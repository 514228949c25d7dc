//! Evaluation metrics: surface overlap (BLEU, ROUGE-L), embedding
//! similarity, the semantic-vs-surface composite, word coverage, human
//! evaluation tallies, and precision/recall/F1.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::reduce::dictionary::Vocabulary;
use crate::text::{is_punctuation_token, tokenize, NoiseLabel, NoiseLabelSet};

/// Floor applied to zero n-gram precisions and to composite inputs.
pub const EPSILON: f64 = 1e-9;

fn ngram_counts<S: AsRef<str>>(tokens: &[S], n: usize) -> HashMap<Vec<&str>, usize> {
    let mut counts = HashMap::new();
    if n == 0 || n > tokens.len() {
        return counts;
    }
    for w in tokens.windows(n) {
        let key: Vec<&str> = w.iter().map(AsRef::as_ref).collect();
        *counts.entry(key).or_insert(0) += 1;
    }
    counts
}

/// Clipped n-gram precision: candidate n-gram counts are capped at their
/// reference counts. `None` when the candidate has no n-grams of order `n`.
pub fn modified_precision<S: AsRef<str>, T: AsRef<str>>(candidate: &[S], reference: &[T], n: usize) -> Option<f64> {
    let cand = ngram_counts(candidate, n);
    if cand.is_empty() {
        return None;
    }
    let refc = ngram_counts(reference, n);
    let total: usize = cand.values().sum();
    let clipped: usize = cand
        .iter()
        .map(|(g, &c)| c.min(refc.get(g).copied().unwrap_or(0)))
        .sum();
    Some(clipped as f64 / total as f64)
}

/// Sentence BLEU: geometric mean of clipped precisions for
/// `n = 1..=min(max_n, |candidate|)` (zeros floored at [`EPSILON`]) times
/// the brevity penalty. An empty candidate scores 0.
pub fn bleu<S: AsRef<str>, T: AsRef<str>>(candidate: &[S], reference: &[T], max_n: usize) -> Result<f64> {
    if reference.is_empty() {
        return Err(Error::EmptyReference);
    }
    if candidate.is_empty() {
        return Ok(0.0);
    }
    let orders = max_n.min(candidate.len()).max(1);
    let log_sum: f64 = (1..=orders)
        .map(|n| {
            modified_precision(candidate, reference, n)
                .unwrap_or(0.0)
                .max(EPSILON)
                .ln()
        })
        .sum();
    let c = candidate.len() as f64;
    let r = reference.len() as f64;
    let brevity = (1.0 - r / c).min(0.0).exp();
    Ok(brevity * (log_sum / orders as f64).exp())
}

pub fn lcs_len<S: AsRef<str>, T: AsRef<str>>(a: &[S], b: &[T]) -> usize {
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    for x in a {
        for (j, y) in b.iter().enumerate() {
            cur[j + 1] = if x.as_ref() == y.as_ref() {
                prev[j] + 1
            } else {
                prev[j + 1].max(cur[j])
            };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// ROUGE-L F-measure over tokens.
pub fn rouge_l<S: AsRef<str>, T: AsRef<str>>(candidate: &[S], reference: &[T]) -> f64 {
    if candidate.is_empty() || reference.is_empty() {
        return 0.0;
    }
    let lcs = lcs_len(candidate, reference) as f64;
    let p = lcs / candidate.len() as f64;
    let r = lcs / reference.len() as f64;
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

/// Percentage of non-punctuation tokens found in `vocab`.
pub fn word_coverage<S: AsRef<str>>(tokens: &[S], vocab: &dyn Vocabulary) -> Result<f64> {
    let words: Vec<&str> = tokens
        .iter()
        .map(AsRef::as_ref)
        .filter(|t| !is_punctuation_token(t))
        .collect();
    if words.is_empty() {
        return Err(Error::EmptyInput);
    }
    let known = words.iter().filter(|w| vocab.contains_word(w)).count();
    Ok(100.0 * known as f64 / words.len() as f64)
}

/// Word vectors of a fixed dimension.
#[derive(Debug, Clone, Default)]
pub struct EmbeddingTable {
    dim: usize,
    vectors: HashMap<String, Vec<f64>>,
}

impl EmbeddingTable {
    pub fn new(dim: usize) -> Self {
        EmbeddingTable {
            dim,
            vectors: HashMap::new(),
        }
    }

    pub fn insert(&mut self, word: impl Into<String>, vector: Vec<f64>) -> Result<()> {
        if vector.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: vector.len(),
            });
        }
        if vector.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig("embedding components must be finite".into()));
        }
        self.vectors.insert(word.into(), vector);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn get(&self, word: &str) -> Option<&[f64]> {
        self.vectors.get(word).map(Vec::as_slice)
    }

    fn mean_vector<S: AsRef<str>>(&self, tokens: &[S]) -> Option<Vec<f64>> {
        let mut sum = vec![0.0; self.dim];
        let mut n = 0usize;
        for t in tokens {
            if let Some(v) = self.get(t.as_ref()) {
                sum.iter_mut().zip(v).for_each(|(s, x)| *s += x);
                n += 1;
            }
        }
        (n > 0).then(|| sum.into_iter().map(|s| s / n as f64).collect())
    }
}

impl Vocabulary for EmbeddingTable {
    fn contains_word(&self, word: &str) -> bool {
        self.vectors.contains_key(word)
    }
}

pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        (dot / (na * nb)).clamp(-1.0, 1.0)
    }
}

/// Cosine between mean word vectors, skipping out-of-vocabulary words.
/// Zero when either side has no known word.
pub fn sentence_similarity<S: AsRef<str>, T: AsRef<str>>(candidate: &[S], reference: &[T], table: &EmbeddingTable) -> f64 {
    match (table.mean_vector(candidate), table.mean_vector(reference)) {
        (Some(a), Some(b)) => cosine(&a, &b),
        _ => 0.0,
    }
}

pub const DEFAULT_BETA: f64 = 4.0;

/// Weighted harmonic mean of a semantic score and the dissimilarity
/// `1 - surface_bleu`, with weight `beta` on the semantic side. Inputs are
/// clamped to `[EPSILON, 1]` and `[0, 1 - EPSILON]`.
pub fn composite_similarity(semantic: f64, surface_bleu: f64, beta: f64) -> f64 {
    let s = semantic.clamp(EPSILON, 1.0);
    let d = 1.0 - surface_bleu.clamp(0.0, 1.0 - EPSILON);
    (beta + 1.0) / (beta / s + 1.0 / d)
}

/// `accurate / total * 100`.
pub fn human_eval_score(accurate: u64, total: u64) -> Result<f64> {
    if total == 0 || accurate > total {
        return Err(Error::InvalidCounts { accurate, total });
    }
    Ok(accurate as f64 / total as f64 * 100.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ClassCounts {
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl ClassCounts {
    pub fn support(&self) -> u64 {
        self.tp + self.fn_
    }
}

/// Per-class confusion counts.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub classes: Vec<ClassCounts>,
}

impl ConfusionCounts {
    pub fn new(classes: usize) -> Self {
        ConfusionCounts {
            classes: vec![ClassCounts::default(); classes],
        }
    }

    /// Counts from multi-label predictions over the ten noise classes.
    pub fn from_label_sets(gold: &[NoiseLabelSet], predicted: &[NoiseLabelSet]) -> Result<Self> {
        if gold.len() != predicted.len() {
            return Err(Error::LengthMismatch {
                expected: gold.len(),
                found: predicted.len(),
            });
        }
        let mut counts = ConfusionCounts::new(NoiseLabel::COUNT);
        for (g, p) in gold.iter().zip(predicted) {
            for label in NoiseLabel::ALL {
                let c = &mut counts.classes[label.index()];
                match (g.contains(label), p.contains(label)) {
                    (true, true) => c.tp += 1,
                    (false, true) => c.fp += 1,
                    (true, false) => c.fn_ += 1,
                    (false, false) => {}
                }
            }
        }
        Ok(counts)
    }

    /// Counts from single-label predictions given as class indices.
    pub fn from_multiclass(gold: &[usize], predicted: &[usize], classes: usize) -> Result<Self> {
        if gold.len() != predicted.len() {
            return Err(Error::LengthMismatch {
                expected: gold.len(),
                found: predicted.len(),
            });
        }
        let mut counts = ConfusionCounts::new(classes);
        for (&g, &p) in gold.iter().zip(predicted) {
            if g >= classes || p >= classes {
                return Err(Error::DimensionMismatch {
                    expected: classes,
                    found: g.max(p) + 1,
                });
            }
            if g == p {
                counts.classes[g].tp += 1;
            } else {
                counts.classes[p].fp += 1;
                counts.classes[g].fn_ += 1;
            }
        }
        Ok(counts)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Averaging {
    Micro,
    Macro,
    Weighted,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn harmonic(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

impl Prf {
    pub fn from_counts(c: &ClassCounts) -> Self {
        let precision = ratio(c.tp, c.tp + c.fp);
        let recall = ratio(c.tp, c.tp + c.fn_);
        Prf {
            precision,
            recall,
            f1: harmonic(precision, recall),
        }
    }
}

/// Precision, recall and F1 with `0/0 = 0`. Macro and weighted averaging
/// average the per-class scores (F1 included) rather than recomputing F1
/// from averaged precision and recall.
pub fn prf(counts: &ConfusionCounts, averaging: Averaging) -> Prf {
    match averaging {
        Averaging::Micro => {
            let pooled = counts.classes.iter().fold(ClassCounts::default(), |acc, c| ClassCounts {
                tp: acc.tp + c.tp,
                fp: acc.fp + c.fp,
                fn_: acc.fn_ + c.fn_,
            });
            Prf::from_counts(&pooled)
        }
        Averaging::Macro | Averaging::Weighted => {
            let per: Vec<(Prf, f64)> = counts
                .classes
                .iter()
                .map(|c| {
                    let w = if averaging == Averaging::Macro { 1.0 } else { c.support() as f64 };
                    (Prf::from_counts(c), w)
                })
                .collect();
            let total: f64 = per.iter().map(|(_, w)| w).sum();
            if total == 0.0 {
                return Prf::default();
            }
            let avg = |f: fn(&Prf) -> f64| per.iter().map(|(p, w)| f(p) * w).sum::<f64>() / total;
            Prf {
                precision: avg(|p| p.precision),
                recall: avg(|p| p.recall),
                f1: avg(|p| p.f1),
            }
        }
    }
}

/// Corpus-averaged scores for one reduction method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub method: String,
    pub sentences: usize,
    /// Mean sentence BLEU against the ground truth, in [0, 1].
    pub bleu: f64,
    /// Mean ROUGE-L F against the ground truth, in [0, 1].
    pub rouge_l: f64,
    /// Percentage of output word tokens in the coverage vocabulary.
    pub word_coverage: Option<f64>,
    /// Mean embedding cosine against the ground truth, in [-1, 1].
    pub embedding_similarity: Option<f64>,
    /// Mean composite of embedding similarity and the self-BLEU penalty.
    pub composite: Option<f64>,
    /// Human evaluation percentage, when tallies are supplied.
    pub human_eval: Option<f64>,
}

/// Optional inputs for [`evaluate_reduction`].
#[derive(Default)]
pub struct EvalResources<'a> {
    /// Noisy inputs, aligned with the ground truth; needed for the
    /// self-similarity penalty of the composite score.
    pub inputs: Option<&'a [String]>,
    pub embeddings: Option<&'a EmbeddingTable>,
    /// Vocabulary for word coverage; the embedding table is used when
    /// absent.
    pub coverage_vocab: Option<&'a dyn Vocabulary>,
    /// Method name to `(accurate, total)`.
    pub human_tallies: Option<&'a BTreeMap<String, (u64, u64)>>,
    pub beta: Option<f64>,
    pub max_n: Option<usize>,
}

fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        0.0
    } else {
        values.iter().sum::<f64>() / values.len() as f64
    }
}

/// Scores every method's outputs against the ground truth. Methods are
/// reported in name order.
pub fn evaluate_reduction(
    outputs: &BTreeMap<String, Vec<String>>,
    ground_truth: &[String],
    res: &EvalResources<'_>,
) -> Result<Vec<ReductionReport>> {
    let max_n = res.max_n.unwrap_or(4);
    let beta = res.beta.unwrap_or(DEFAULT_BETA);
    if let Some(inputs) = res.inputs {
        if inputs.len() != ground_truth.len() {
            return Err(Error::LengthMismatch {
                expected: ground_truth.len(),
                found: inputs.len(),
            });
        }
    }
    let truth_tokens: Vec<Vec<String>> = ground_truth.iter().map(|t| tokenize(t).tokens).collect();
    let input_tokens: Option<Vec<Vec<String>>> =
        res.inputs.map(|v| v.iter().map(|t| tokenize(t).tokens).collect());
    let coverage_vocab: Option<&dyn Vocabulary> = res
        .coverage_vocab
        .or(res.embeddings.map(|e| e as &dyn Vocabulary));

    let mut reports = Vec::with_capacity(outputs.len());
    for (method, outs) in outputs {
        if outs.len() != ground_truth.len() {
            return Err(Error::LengthMismatch {
                expected: ground_truth.len(),
                found: outs.len(),
            });
        }
        let out_tokens: Vec<Vec<String>> = outs.iter().map(|t| tokenize(t).tokens).collect();
        let mut bleus = Vec::with_capacity(outs.len());
        let mut rouges = Vec::with_capacity(outs.len());
        let mut sims = Vec::new();
        let mut composites = Vec::new();
        for (i, (cand, truth)) in out_tokens.iter().zip(&truth_tokens).enumerate() {
            bleus.push(bleu(cand, truth, max_n)?);
            rouges.push(rouge_l(cand, truth));
            if let Some(table) = res.embeddings {
                let sim = sentence_similarity(cand, truth, table);
                sims.push(sim);
                if let Some(inputs) = &input_tokens {
                    // Self-BLEU of the output against its own noisy input;
                    // an empty input gives nothing to copy.
                    let surface = if inputs[i].is_empty() { 0.0 } else { bleu(cand, &inputs[i], max_n)? };
                    composites.push(composite_similarity(sim, surface, beta));
                }
            }
        }
        let word_coverage = match coverage_vocab {
            Some(vocab) => {
                let all: Vec<&String> = out_tokens.iter().flatten().collect();
                Some(word_coverage(&all, vocab)?)
            }
            None => None,
        };
        let human_eval = match res.human_tallies.and_then(|t| t.get(method)) {
            Some(&(accurate, total)) => Some(human_eval_score(accurate, total)?),
            None => None,
        };
        reports.push(ReductionReport {
            method: method.clone(),
            sentences: outs.len(),
            bleu: mean(&bleus),
            rouge_l: mean(&rouges),
            word_coverage,
            embedding_similarity: res.embeddings.map(|_| mean(&sims)),
            composite: (!composites.is_empty()).then(|| mean(&composites)),
            human_eval,
        });
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn toks(s: &str) -> Vec<&str> {
        s.split_whitespace().collect()
    }

    #[test]
    fn bleu_identity_and_brevity() {
        let s = toks("a b c d e");
        assert!((bleu(&s, &s, 4).unwrap() - 1.0).abs() < 1e-12);
        let b = bleu(&toks("a b"), &toks("a b c d"), 4).unwrap();
        assert!((b - (-1.0f64).exp()).abs() < 1e-12);
        assert!((b - 0.3679).abs() < 1e-4);
    }

    #[test]
    fn bleu_clipped_unigram_precision() {
        let cand = toks("the the the the the the the");
        let reference = toks("the cat is on the mat");
        assert_eq!(modified_precision(&cand, &reference, 1), Some(2.0 / 7.0));
    }

    #[test]
    fn bleu_edge_cases() {
        assert!(matches!(bleu(&toks("a"), &Vec::<&str>::new(), 4), Err(Error::EmptyReference)));
        assert_eq!(bleu(&Vec::<&str>::new(), &toks("a"), 4).unwrap(), 0.0);
        let b = bleu(&toks("x y"), &toks("a b"), 4).unwrap();
        assert!(b > 0.0 && b < 1e-8);
    }

    #[test]
    fn rouge_examples() {
        let s = toks("a b c");
        assert_eq!(rouge_l(&s, &s), 1.0);
        assert_eq!(rouge_l(&toks("a b"), &toks("c d")), 0.0);
        assert!((rouge_l(&toks("a b c"), &toks("a c b")) - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn coverage_examples() {
        let v: HashSet<String> = ["a", "b"].iter().map(|s| s.to_string()).collect();
        assert_eq!(word_coverage(&toks("a b c d"), &v).unwrap(), 50.0);
        assert_eq!(word_coverage(&toks("a b , a"), &v).unwrap(), 100.0);
        assert!(matches!(word_coverage(&toks(", ."), &v), Err(Error::EmptyInput)));
    }

    fn table() -> EmbeddingTable {
        let mut t = EmbeddingTable::new(2);
        t.insert("a", vec![1.0, 0.0]).unwrap();
        t.insert("b", vec![0.0, 1.0]).unwrap();
        t.insert("c", vec![1.0, 1.0]).unwrap();
        t
    }

    #[test]
    fn similarity_examples() {
        let t = table();
        assert!((sentence_similarity(&toks("a b"), &toks("a b"), &t) - 1.0).abs() < 1e-12);
        assert_eq!(sentence_similarity(&toks("x y"), &toks("z"), &t), 0.0);
        // mean(a, b) = (0.5, 0.5); mean(a, c) = (1, 0.5).
        // cos = (0.5 + 0.25) / (sqrt(0.5) * sqrt(1.25)) = 0.75 / sqrt(0.625)
        let got = sentence_similarity(&toks("a b"), &toks("a c"), &t);
        assert!((got - 0.75 / 0.625f64.sqrt()).abs() < 1e-12);
        // OOV words are skipped.
        assert!((sentence_similarity(&toks("a zz"), &toks("a"), &t) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn embedding_dimension_checked() {
        let mut t = EmbeddingTable::new(3);
        assert!(matches!(t.insert("a", vec![1.0]), Err(Error::DimensionMismatch { .. })));
        assert!(t.insert("a", vec![f64::NAN, 0.0, 0.0]).is_err());
    }

    #[test]
    fn composite_examples() {
        for beta in [0.5, 1.0, 4.0, 10.0] {
            assert!((composite_similarity(1.0, 0.0, beta) - 1.0).abs() < 1e-12);
        }
        assert!((composite_similarity(0.8, 0.5, 4.0) - 5.0 / 7.0).abs() < 1e-12);
        // Copying the input verbatim drives the score to ~0.
        assert!(composite_similarity(0.9, 1.0, 4.0) < 1e-6);
    }

    #[test]
    fn human_eval_examples() {
        assert_eq!(human_eval_score(0, 1000).unwrap(), 0.0);
        assert!((human_eval_score(379, 1000).unwrap() - 37.90).abs() < 1e-12);
        assert_eq!(human_eval_score(7, 7).unwrap(), 100.0);
        assert!(human_eval_score(8, 7).is_err());
        assert!(human_eval_score(0, 0).is_err());
    }

    #[test]
    fn prf_examples() {
        let c = ConfusionCounts {
            classes: vec![
                ClassCounts { tp: 5, fp: 1, fn_: 1 },
                ClassCounts { tp: 3, fp: 1, fn_: 1 },
            ],
        };
        let m = prf(&c, Averaging::Micro);
        assert!((m.precision - 0.8).abs() < 1e-12);
        assert!((m.recall - 0.8).abs() < 1e-12);
        assert!((m.f1 - 0.8).abs() < 1e-12);

        let perfect = ConfusionCounts {
            classes: vec![ClassCounts { tp: 4, fp: 0, fn_: 0 }; 3],
        };
        for avg in [Averaging::Micro, Averaging::Macro, Averaging::Weighted] {
            assert_eq!(prf(&perfect, avg), Prf { precision: 1.0, recall: 1.0, f1: 1.0 });
        }

        let none = ConfusionCounts {
            classes: vec![ClassCounts { tp: 0, fp: 0, fn_: 6 }],
        };
        assert_eq!(prf(&none, Averaging::Micro).precision, 0.0);
        assert_eq!(prf(&none, Averaging::Micro).f1, 0.0);
    }

    #[test]
    fn weighted_uses_support() {
        let c = ConfusionCounts {
            classes: vec![
                ClassCounts { tp: 1, fp: 0, fn_: 0 },
                ClassCounts { tp: 0, fp: 0, fn_: 3 },
            ],
        };
        assert!((prf(&c, Averaging::Weighted).recall - 0.25).abs() < 1e-12);
        assert!((prf(&c, Averaging::Macro).recall - 0.5).abs() < 1e-12);
    }

    #[test]
    fn confusion_from_predictions() {
        let g = [NoiseLabelSet::from_bits(0b11), NoiseLabelSet::from_bits(0b100)];
        let p = [NoiseLabelSet::from_bits(0b01), NoiseLabelSet::from_bits(0b110)];
        let c = ConfusionCounts::from_label_sets(&g, &p).unwrap();
        assert_eq!(c.classes[0], ClassCounts { tp: 1, fp: 0, fn_: 0 });
        assert_eq!(c.classes[1], ClassCounts { tp: 0, fp: 1, fn_: 1 });
        assert_eq!(c.classes[2], ClassCounts { tp: 1, fp: 0, fn_: 0 });

        let c = ConfusionCounts::from_multiclass(&[0, 1, 2], &[0, 2, 2], 3).unwrap();
        assert_eq!(c.classes[2], ClassCounts { tp: 1, fp: 1, fn_: 0 });
        assert_eq!(c.classes[1], ClassCounts { tp: 0, fp: 0, fn_: 1 });
    }

    fn strings(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn evaluation_of_perfect_outputs() {
        let truth = strings(&["a b c", "b c"]);
        let mut outputs = BTreeMap::new();
        outputs.insert("copy".to_string(), truth.clone());
        let r = evaluate_reduction(&outputs, &truth, &EvalResources::default()).unwrap();
        assert_eq!(r[0].bleu, 1.0);
        assert_eq!(r[0].rouge_l, 1.0);
        assert_eq!(r[0].composite, None);
    }

    #[test]
    fn evaluation_averages_per_sentence() {
        let truth = strings(&["a b c", "a b c d"]);
        let out = strings(&["a c b", "a b"]);
        let mut outputs = BTreeMap::new();
        outputs.insert("m".to_string(), out.clone());
        let t = table();
        let res = EvalResources {
            embeddings: Some(&t),
            inputs: Some(&out),
            ..Default::default()
        };
        let r = &evaluate_reduction(&outputs, &truth, &res).unwrap()[0];
        let b0 = bleu(&toks("a c b"), &toks("a b c"), 4).unwrap();
        let b1 = bleu(&toks("a b"), &toks("a b c d"), 4).unwrap();
        assert!((r.bleu - (b0 + b1) / 2.0).abs() < 1e-12);
        let r0 = rouge_l(&toks("a c b"), &toks("a b c"));
        let r1 = rouge_l(&toks("a b"), &toks("a b c d"));
        assert!((r.rouge_l - (r0 + r1) / 2.0).abs() < 1e-12);
        // Outputs equal their inputs: the composite collapses.
        assert!(r.composite.unwrap() < r.embedding_similarity.unwrap());
        assert!(r.composite.unwrap() < 1e-6);
    }

    #[test]
    fn evaluation_length_mismatch() {
        let truth = strings(&["a"]);
        let mut outputs = BTreeMap::new();
        outputs.insert("m".to_string(), strings(&["a", "b"]));
        assert!(matches!(
            evaluate_reduction(&outputs, &truth, &EvalResources::default()),
            Err(Error::LengthMismatch { .. })
        ));
    }
}
