//! Noisy-text toolkit: normalization and tokenization, TF-IDF features,
//! linear classifiers for noise types and sentiment, noise reduction,
//! evaluation metrics, annotator agreement, corpus statistics and file
//! formats.

pub mod agreement;
pub mod classify;
pub mod dataio;
pub mod error;
pub mod features;
pub mod metrics;
pub mod reduce;
pub mod stats;
pub mod text;

pub use error::{Error, ErrorClass, Result};
pub use text::{normalize, tokenize, Document, NoiseLabel, NoiseLabelSet, SentimentLabel, TokenSequence};
