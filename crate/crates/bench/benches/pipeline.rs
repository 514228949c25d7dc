use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use noisekit::classify::{train_ovr_hinge_with_dim, TrainConfig};
use noisekit::features::{AnalyzerConfig, AnalyzerMode, TfidfModel};
use noisekit::metrics::{bleu, rouge_l};
use noisekit::reduce::{spell_correct, Dictionary, MaxDistance, PhoneticTable};
use noisekit::{normalize, tokenize};
use noisekit_bench::synthetic_corpus;

fn text_benches(c: &mut Criterion) {
    let corpus = synthetic_corpus(500, 1);
    let texts: Vec<&str> = corpus.documents.iter().map(|d| d.text.as_str()).collect();
    c.bench_function("normalize_tokenize_500", |b| {
        b.iter(|| {
            for t in &texts {
                black_box(tokenize(&normalize(t)));
            }
        })
    });
}

fn feature_benches(c: &mut Criterion) {
    let corpus = synthetic_corpus(500, 2);
    let texts: Vec<&str> = corpus.documents.iter().map(|d| d.text.as_str()).collect();
    let cfg = AnalyzerConfig::new(AnalyzerMode::Char);
    c.bench_function("tfidf_fit_char_500", |b| b.iter(|| TfidfModel::fit(black_box(&texts), cfg).unwrap()));
    let model = TfidfModel::fit(&texts, cfg).unwrap();
    c.bench_function("tfidf_transform_char_500", |b| {
        b.iter(|| {
            for t in &texts {
                black_box(model.transform(t));
            }
        })
    });
}

fn training_benches(c: &mut Criterion) {
    let corpus = synthetic_corpus(300, 3);
    let texts: Vec<&str> = corpus.documents.iter().map(|d| d.text.as_str()).collect();
    let model = TfidfModel::fit(&texts, AnalyzerConfig::new(AnalyzerMode::Word)).unwrap();
    let x: Vec<_> = texts.iter().map(|t| model.transform(t)).collect();
    let y: Vec<_> = corpus.documents.iter().map(|d| d.noise.unwrap()).collect();
    let cfg = TrainConfig::hinge().with_epochs(5);
    let mut group = c.benchmark_group("training");
    group.sample_size(10);
    group.bench_function("ovr_hinge_word_300x5", |b| {
        b.iter(|| train_ovr_hinge_with_dim(&x, &y, model.dimension(), &cfg).unwrap())
    });
    group.finish();
}

fn reduction_benches(c: &mut Criterion) {
    let corpus = synthetic_corpus(200, 4);
    let dict = Dictionary::from_words(
        PhoneticTable::bangla().clone(),
        corpus.dictionary.iter().map(|(w, f)| (w.as_str(), *f)),
    );
    c.bench_function("spell_correct_200", |b| {
        b.iter(|| {
            for d in &corpus.documents {
                black_box(spell_correct(&d.text, &dict, MaxDistance::Adaptive));
            }
        })
    });
    let pairs: Vec<(Vec<String>, Vec<String>)> = corpus
        .documents
        .iter()
        .zip(&corpus.clean)
        .map(|(d, c)| (tokenize(&d.text).tokens, tokenize(c).tokens))
        .collect();
    c.bench_function("bleu_rouge_200", |b| {
        b.iter(|| {
            for (cand, reference) in &pairs {
                black_box(bleu(cand, reference, 4).unwrap());
                black_box(rouge_l(cand, reference));
            }
        })
    });
}

criterion_group!(benches, text_benches, feature_benches, training_benches, reduction_benches);
criterion_main!(benches);
