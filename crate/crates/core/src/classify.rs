//! Linear classifiers over sparse TF-IDF features.
//!
//! Two trainers share one model type:
//!
//! * one-vs-rest hinge-loss (linear SVM) for the ten noise labels, trained by
//!   seeded stochastic subgradient descent;
//! * class-weighted softmax regression for sentiment, trained by gradient
//!   descent on the weighted cross-entropy.
//!
//! Both are bit-deterministic for a fixed data order and seed.

use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{SparseVector, TfidfModel, TfidfModelJson};
use crate::text::{NoiseLabel, NoiseLabelSet, SentimentLabel};

pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelKind {
    OneVsRestHinge,
    SoftmaxWeighted,
}

impl ModelKind {
    fn name(self) -> &'static str {
        match self {
            ModelKind::OneVsRestHinge => "OneVsRestHinge",
            ModelKind::SoftmaxWeighted => "SoftmaxWeighted",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    /// Regularization strength; larger means weaker regularization.
    pub c: f64,
    pub epochs: usize,
    pub learning_rate: f64,
    pub seed: u64,
    #[serde(default)]
    pub class_weights: Option<Vec<f64>>,
    /// Softmax only: examples per gradient step, 0 for full batch.
    #[serde(default)]
    pub batch_size: usize,
}

impl TrainConfig {
    pub fn hinge() -> Self {
        TrainConfig {
            c: 1.0,
            epochs: 30,
            learning_rate: 1.0,
            seed: 0,
            class_weights: None,
            batch_size: 0,
        }
    }

    pub fn softmax() -> Self {
        TrainConfig {
            c: 1.0,
            epochs: 300,
            learning_rate: 1.0,
            seed: 0,
            class_weights: None,
            batch_size: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_epochs(mut self, epochs: usize) -> Self {
        self.epochs = epochs;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::InvalidConfig(format!("c must be positive, got {}", self.c)));
        }
        if self.epochs < 1 {
            return Err(Error::InvalidConfig("epochs must be at least 1".into()));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "learning rate must be positive, got {}",
                self.learning_rate
            )));
        }
        Ok(())
    }
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self::hinge()
    }
}

/// Per-class loss multipliers, in class order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassWeights(pub Vec<f64>);

impl ClassWeights {
    pub fn uniform(classes: usize) -> Self {
        ClassWeights(vec![1.0; classes])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// Balanced weights `N / (K * n_c)`.
pub fn compute_class_weights(counts: &[u64]) -> Result<ClassWeights> {
    if let Some(class) = counts.iter().position(|&n| n == 0) {
        return Err(Error::ZeroCount { class });
    }
    let total: u64 = counts.iter().sum();
    let k = counts.len() as f64;
    Ok(ClassWeights(
        counts.iter().map(|&n| total as f64 / (k * n as f64)).collect(),
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub kind: ModelKind,
    pub class_names: Vec<String>,
    pub dim: usize,
    pub weights: Vec<Vec<f64>>,
    pub biases: Vec<f64>,
    pub train_config: TrainConfig,
}

impl LinearModel {
    pub fn classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn decision_values(&self, x: &SparseVector) -> Result<Vec<f64>> {
        if x.min_dimension() > self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.min_dimension(),
            });
        }
        Ok(self
            .weights
            .iter()
            .zip(&self.biases)
            .map(|(w, b)| x.dot_dense(w) + b)
            .collect())
    }

    fn expect_kind(&self, kind: ModelKind) -> Result<()> {
        if self.kind != kind {
            return Err(Error::WrongModelKind {
                expected: kind.name().into(),
                found: self.kind.name().into(),
            });
        }
        Ok(())
    }

    pub fn to_json(&self) -> LinearModelJson {
        LinearModelJson {
            version: MODEL_FORMAT_VERSION,
            kind: self.kind,
            class_names: self.class_names.clone(),
            dim: self.dim,
            biases: self.biases.clone(),
            weights: self
                .weights
                .iter()
                .map(|w| {
                    w.iter()
                        .enumerate()
                        .filter(|(_, &v)| v != 0.0)
                        .map(|(i, &v)| (i as u32, v))
                        .collect()
                })
                .collect(),
            train_config: self.train_config.clone(),
        }
    }

    pub fn from_json(json: LinearModelJson) -> Result<Self> {
        if json.version != MODEL_FORMAT_VERSION {
            return Err(Error::UnsupportedVersion(json.version));
        }
        let k = json.class_names.len();
        if json.biases.len() != k || json.weights.len() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                found: json.weights.len().max(json.biases.len()),
            });
        }
        let mut weights = vec![vec![0.0; json.dim]; k];
        for (dense, sparse) in weights.iter_mut().zip(&json.weights) {
            for &(i, v) in sparse {
                let slot = dense.get_mut(i as usize).ok_or(Error::DimensionMismatch {
                    expected: json.dim,
                    found: i as usize + 1,
                })?;
                *slot = v;
            }
        }
        Ok(LinearModel {
            kind: json.kind,
            class_names: json.class_names,
            dim: json.dim,
            weights,
            biases: json.biases,
            train_config: json.train_config,
        })
    }
}

/// On-disk form of a [`LinearModel`]; weights are stored as `[index, value]`
/// pairs per class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModelJson {
    pub version: u32,
    pub kind: ModelKind,
    pub class_names: Vec<String>,
    pub dim: usize,
    pub biases: Vec<f64>,
    pub weights: Vec<Vec<(u32, f64)>>,
    pub train_config: TrainConfig,
}

fn check_training_set<L>(features: &[SparseVector], labels: &[L]) -> Result<usize> {
    if features.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    if features.len() != labels.len() {
        return Err(Error::LengthMismatch {
            expected: features.len(),
            found: labels.len(),
        });
    }
    Ok(features.iter().map(SparseVector::min_dimension).max().unwrap_or(0))
}

/// `0.5 * |w|^2 + c * sum_i max(0, 1 - y_i (w.x_i + b))` with `y_i` in {-1, +1}.
pub fn hinge_objective(w: &[f64], b: f64, features: &[SparseVector], targets: &[bool], c: f64) -> f64 {
    let reg = 0.5 * w.iter().map(|v| v * v).sum::<f64>();
    let loss: f64 = features
        .iter()
        .zip(targets)
        .map(|(x, &t)| {
            let y = if t { 1.0 } else { -1.0 };
            (1.0 - y * (x.dot_dense(w) + b)).max(0.0)
        })
        .sum();
    reg + c * loss
}

/// Trains one binary hinge-loss classifier with the Pegasos-style schedule
/// `eta_t = lr / (1 + lr * lambda * t)`, `lambda = 1 / (c * n)`.
///
/// Returns the weight vector (length `dim`) and bias.
pub fn train_binary_hinge(
    features: &[SparseVector],
    targets: &[bool],
    dim: usize,
    config: &TrainConfig,
) -> Result<(Vec<f64>, f64)> {
    config.validate()?;
    let needed = check_training_set(features, targets)?;
    if needed > dim {
        return Err(Error::DimensionMismatch { expected: dim, found: needed });
    }
    let n = features.len();
    let lambda = 1.0 / (config.c * n as f64);
    let lr = config.learning_rate;

    // w = scale * v, so the shrink step is O(1).
    let mut v = vec![0.0; dim];
    let mut scale = 1.0f64;
    let mut bias = 0.0f64;
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut t = 0u64;

    for _ in 0..config.epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            let x = &features[i];
            let y = if targets[i] { 1.0 } else { -1.0 };
            let eta = lr / (1.0 + lr * lambda * t as f64);
            let margin = y * (scale * x.dot_dense(&v) + bias);
            scale *= 1.0 - eta * lambda;
            if margin < 1.0 {
                let step = eta * y / scale;
                for &(j, xj) in x.entries() {
                    v[j as usize] += step * xj;
                }
                bias += eta * y;
            }
            if scale < 1e-9 {
                v.iter_mut().for_each(|e| *e *= scale);
                scale = 1.0;
            }
            t += 1;
        }
    }
    v.iter_mut().for_each(|e| *e *= scale);
    Ok((v, bias))
}

/// One-vs-rest hinge-loss training over the ten noise labels.
pub fn train_ovr_hinge(
    features: &[SparseVector],
    labels: &[NoiseLabelSet],
    config: &TrainConfig,
) -> Result<LinearModel> {
    let dim = check_training_set(features, labels)?;
    train_ovr_hinge_with_dim(features, labels, dim, config)
}

/// As [`train_ovr_hinge`] with an explicit feature-space size (normally
/// the fitted TF-IDF dimension).
pub fn train_ovr_hinge_with_dim(
    features: &[SparseVector],
    labels: &[NoiseLabelSet],
    dim: usize,
    config: &TrainConfig,
) -> Result<LinearModel> {
    config.validate()?;
    check_training_set(features, labels)?;
    let mut weights = Vec::with_capacity(NoiseLabel::COUNT);
    let mut biases = Vec::with_capacity(NoiseLabel::COUNT);
    for label in NoiseLabel::ALL {
        let targets: Vec<bool> = labels.iter().map(|s| s.contains(label)).collect();
        let (w, b) = train_binary_hinge(features, &targets, dim, config)?;
        log::debug!("trained {label}: bias {b:.4}");
        weights.push(w);
        biases.push(b);
    }
    Ok(LinearModel {
        kind: ModelKind::OneVsRestHinge,
        class_names: NoiseLabel::ALL.iter().map(|l| l.name().to_string()).collect(),
        dim,
        weights,
        biases,
        train_config: config.clone(),
    })
}

fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Labels whose decision value is non-negative; never empty (falls back to
/// the single highest-scoring label).
pub fn predict_multilabel(model: &LinearModel, x: &SparseVector) -> Result<NoiseLabelSet> {
    model.expect_kind(ModelKind::OneVsRestHinge)?;
    let scores = model.decision_values(x)?;
    let mut set: NoiseLabelSet = scores
        .iter()
        .enumerate()
        .filter(|(_, &s)| s >= 0.0)
        .filter_map(|(i, _)| NoiseLabel::from_index(i))
        .collect();
    if set.is_empty() {
        if let Some(label) = NoiseLabel::from_index(argmax(&scores)) {
            set.insert(label);
        }
    }
    Ok(set)
}

/// Numerically stable softmax.
pub fn softmax(z: &[f64]) -> Vec<f64> {
    let max = z.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = z.iter().map(|v| (v - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}

/// Class-weighted cross-entropy with L2 penalty on the weights (not the
/// biases):
///
/// `L(W, b) = sum_i w[y_i] * -ln softmax(W x_i + b)[y_i] + |W|^2 / (2c)`
///
/// Parameters are laid out as `classes * dim` row-major weights followed by
/// `classes` biases.
pub struct WeightedSoftmaxObjective<'a> {
    pub features: &'a [SparseVector],
    pub labels: &'a [usize],
    pub class_weights: &'a [f64],
    pub c: f64,
    pub dim: usize,
}

impl WeightedSoftmaxObjective<'_> {
    pub fn classes(&self) -> usize {
        self.class_weights.len()
    }

    pub fn param_len(&self) -> usize {
        self.classes() * (self.dim + 1)
    }

    fn logits(&self, params: &[f64], x: &SparseVector) -> Vec<f64> {
        let k = self.classes();
        let bias = &params[k * self.dim..];
        (0..k)
            .map(|c| x.dot_dense(&params[c * self.dim..(c + 1) * self.dim]) + bias[c])
            .collect()
    }

    fn penalty(&self, params: &[f64]) -> f64 {
        let w = &params[..self.classes() * self.dim];
        w.iter().map(|v| v * v).sum::<f64>() / (2.0 * self.c)
    }

    pub fn loss(&self, params: &[f64]) -> f64 {
        let data: f64 = self
            .features
            .iter()
            .zip(self.labels)
            .map(|(x, &y)| {
                let z = self.logits(params, x);
                let max = z.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let lse = max + z.iter().map(|v| (v - max).exp()).sum::<f64>().ln();
                self.class_weights[y] * (lse - z[y])
            })
            .sum();
        data + self.penalty(params)
    }

    /// Gradient restricted to the examples in `batch` (penalty included once).
    pub fn gradient_on(&self, params: &[f64], batch: &[usize]) -> Vec<f64> {
        let k = self.classes();
        let mut grad = vec![0.0; self.param_len()];
        for &i in batch {
            let x = &self.features[i];
            let y = self.labels[i];
            let p = softmax(&self.logits(params, x));
            let wy = self.class_weights[y];
            for c in 0..k {
                let d = wy * (p[c] - if c == y { 1.0 } else { 0.0 });
                let row = &mut grad[c * self.dim..(c + 1) * self.dim];
                for &(j, xj) in x.entries() {
                    row[j as usize] += d * xj;
                }
                grad[k * self.dim + c] += d;
            }
        }
        for (g, w) in grad.iter_mut().zip(&params[..k * self.dim]) {
            *g += w / self.c;
        }
        grad
    }

    pub fn gradient(&self, params: &[f64]) -> Vec<f64> {
        let all: Vec<usize> = (0..self.features.len()).collect();
        self.gradient_on(params, &all)
    }
}

/// Gradient descent on [`WeightedSoftmaxObjective`]. Each step is scaled by
/// the total class weight of the batch, so the learning rate is insensitive
/// to corpus size. Full batch unless `config.batch_size > 0`, in which case
/// batches are drawn from a seeded shuffle.
pub fn train_softmax_weighted(
    features: &[SparseVector],
    labels: &[SentimentLabel],
    weights: &ClassWeights,
    config: &TrainConfig,
) -> Result<LinearModel> {
    let dim = check_training_set(features, labels)?;
    train_softmax_weighted_with_dim(features, labels, weights, dim, config)
}

pub fn train_softmax_weighted_with_dim(
    features: &[SparseVector],
    labels: &[SentimentLabel],
    weights: &ClassWeights,
    dim: usize,
    config: &TrainConfig,
) -> Result<LinearModel> {
    config.validate()?;
    let needed = check_training_set(features, labels)?;
    if needed > dim {
        return Err(Error::DimensionMismatch { expected: dim, found: needed });
    }
    let k = SentimentLabel::ALL.len();
    if weights.0.len() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            found: weights.0.len(),
        });
    }
    if weights.0.iter().any(|&w| !(w > 0.0 && w.is_finite())) {
        return Err(Error::InvalidConfig("class weights must be positive".into()));
    }
    let y: Vec<usize> = labels.iter().map(|l| l.index()).collect();
    let objective = WeightedSoftmaxObjective {
        features,
        labels: &y,
        class_weights: &weights.0,
        c: config.c,
        dim,
    };
    let mut params = vec![0.0; objective.param_len()];
    let mut order: Vec<usize> = (0..features.len()).collect();
    let batch = if config.batch_size == 0 {
        features.len()
    } else {
        config.batch_size.min(features.len())
    };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    for epoch in 0..config.epochs {
        if batch < features.len() {
            order.shuffle(&mut rng);
        }
        for chunk in order.chunks(batch) {
            let mass: f64 = chunk.iter().map(|&i| weights.0[y[i]]).sum();
            let grad = objective.gradient_on(&params, chunk);
            let step = config.learning_rate / mass;
            for (p, g) in params.iter_mut().zip(&grad) {
                *p -= step * g;
            }
        }
        if log::log_enabled!(log::Level::Trace) {
            log::trace!("epoch {epoch}: loss {:.6}", objective.loss(&params));
        }
    }

    let biases = params[k * dim..].to_vec();
    let weights_out = (0..k).map(|c| params[c * dim..(c + 1) * dim].to_vec()).collect();
    Ok(LinearModel {
        kind: ModelKind::SoftmaxWeighted,
        class_names: SentimentLabel::ALL.iter().map(|l| l.as_str().to_string()).collect(),
        dim,
        weights: weights_out,
        biases,
        train_config: TrainConfig {
            class_weights: Some(weights.0.clone()),
            ..config.clone()
        },
    })
}

/// Most probable sentiment (ties go to the earlier class) and the full
/// probability vector.
pub fn predict_sentiment(model: &LinearModel, x: &SparseVector) -> Result<(SentimentLabel, Vec<f64>)> {
    model.expect_kind(ModelKind::SoftmaxWeighted)?;
    let probs = softmax(&model.decision_values(x)?);
    let label = SentimentLabel::from_index(argmax(&probs)).ok_or(Error::DimensionMismatch {
        expected: SentimentLabel::ALL.len(),
        found: probs.len(),
    })?;
    Ok((label, probs))
}

/// A featurizer and the classifier trained on its output, stored together.
#[derive(Debug, Clone)]
pub struct TextClassifier {
    pub featurizer: TfidfModel,
    pub model: LinearModel,
}

#[derive(Serialize, Deserialize)]
struct TextClassifierJson {
    version: u32,
    tfidf: TfidfModelJson,
    classifier: LinearModelJson,
}

impl TextClassifier {
    pub fn features(&self, text: &str) -> SparseVector {
        self.featurizer.transform(text)
    }

    pub fn to_json_string(&self) -> Result<String> {
        let mut s = serde_json::to_string(&TextClassifierJson {
            version: MODEL_FORMAT_VERSION,
            tfidf: self.featurizer.to_json(),
            classifier: self.model.to_json(),
        })?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let json: TextClassifierJson = serde_json::from_str(s)?;
        if json.version != MODEL_FORMAT_VERSION {
            return Err(Error::UnsupportedVersion(json.version));
        }
        let featurizer = TfidfModel::from_json(json.tfidf)?;
        let model = LinearModel::from_json(json.classifier)?;
        if model.dim != featurizer.dimension() {
            return Err(Error::DimensionMismatch {
                expected: featurizer.dimension(),
                found: model.dim,
            });
        }
        Ok(TextClassifier { featurizer, model })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json_string()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }
}
