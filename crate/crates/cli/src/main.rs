mod pretty;

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use noisekit::agreement::{fleiss_kappa, label_set_kappa, trustworthiness, TrustMode};
use noisekit::classify::{
    compute_class_weights, predict_multilabel, predict_sentiment, train_ovr_hinge_with_dim,
    train_softmax_weighted_with_dim, ClassWeights, LinearModel, TextClassifier, TrainConfig,
};
use noisekit::dataio::{self, LoadOptions};
use noisekit::features::{AnalyzerConfig, AnalyzerMode, SparseVector, TfidfModel};
use noisekit::metrics::{evaluate_reduction, prf, Averaging, ConfusionCounts, EvalResources, Prf};
use noisekit::reduce::{
    reduce, BigramFillPredictor, ClientMaskPredictor, Dictionary, MaxDistance, Method, PhoneticTable, Resources,
    SubprocessClient, TextClient, TranslatorClient,
};
use noisekit::stats::{self, DedupeKey};
use noisekit::{Document, Error, ErrorClass, NoiseLabel, SentimentLabel};

#[derive(Parser)]
#[command(name = "noisekit", version, about = "Noisy-text classification, reduction and evaluation")]
struct Cli {
    /// Normalize text on load (default).
    #[arg(long, global = true, overrides_with = "no_normalize")]
    normalize: bool,
    /// Keep text exactly as stored.
    #[arg(long, global = true)]
    no_normalize: bool,
    /// Print human-readable tables instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dataset statistics.
    Stats(StatsArgs),
    /// Remove duplicate texts, keeping the first occurrence.
    Dedupe(DedupeArgs),
    /// Train the one-vs-rest noise-type classifier.
    TrainNoise(TrainNoiseArgs),
    /// Predict noise types, scoring against gold labels when present.
    PredictNoise(PredictArgs),
    /// Train the weighted softmax sentiment classifier.
    TrainSentiment(TrainSentimentArgs),
    /// Predict sentiment, scoring against gold labels when present.
    PredictSentiment(PredictArgs),
    /// Apply a noise-reduction method to every document.
    Reduce(ReduceArgs),
    /// Score reduction outputs against a corrected reference.
    EvalReduction(EvalArgs),
    /// Annotator agreement.
    #[command(subcommand)]
    Agreement(AgreementCommand),
    /// Convert a published CSV release into the corpus format.
    Import(ImportArgs),
}

#[derive(Args)]
struct StatsArgs {
    corpus: PathBuf,
    #[arg(long, default_value_t = 10)]
    bin_width: usize,
    /// Also write the length histogram as TSV.
    #[arg(long)]
    histogram_tsv: Option<PathBuf>,
    /// Also write the correlation matrix as TSV.
    #[arg(long)]
    correlation_tsv: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum KeyArg {
    Normalized,
    Raw,
}

#[derive(Args)]
struct DedupeArgs {
    input: PathBuf,
    output: PathBuf,
    /// Compare normalized or raw text.
    #[arg(long, value_enum, default_value = "normalized")]
    key: KeyArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum AnalyzerArg {
    Char,
    Word,
    #[value(name = "char+word")]
    CharWord,
}

impl From<AnalyzerArg> for AnalyzerMode {
    fn from(a: AnalyzerArg) -> Self {
        match a {
            AnalyzerArg::Char => AnalyzerMode::Char,
            AnalyzerArg::Word => AnalyzerMode::Word,
            AnalyzerArg::CharWord => AnalyzerMode::CharPlusWord,
        }
    }
}

#[derive(Args)]
struct FeatureArgs {
    #[arg(long, value_enum, default_value = "char")]
    analyzer: AnalyzerArg,
    #[arg(long, default_value_t = 1)]
    ngram_min: usize,
    #[arg(long, default_value_t = 4)]
    ngram_max: usize,
    #[arg(long, default_value_t = 1)]
    min_df: usize,
}

impl FeatureArgs {
    fn config(&self) -> AnalyzerConfig {
        let mut cfg = AnalyzerConfig::new(self.analyzer.into()).with_range(self.ngram_min, self.ngram_max);
        cfg.min_df = self.min_df;
        cfg
    }
}

#[derive(Args)]
struct TrainNoiseArgs {
    train: PathBuf,
    #[command(flatten)]
    features: FeatureArgs,
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    #[arg(long, default_value_t = 30)]
    epochs: usize,
    #[arg(long, default_value_t = 1.0)]
    learning_rate: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct TrainSentimentArgs {
    train: PathBuf,
    #[command(flatten)]
    features: FeatureArgs,
    /// Weight classes by N / (K * n_c) from the training counts.
    #[arg(long)]
    auto_weights: bool,
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    #[arg(long, default_value_t = 300)]
    epochs: usize,
    #[arg(long, default_value_t = 1.0)]
    learning_rate: f64,
    /// Examples per step; 0 for full batch.
    #[arg(long, default_value_t = 0)]
    batch_size: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PredictArgs {
    model: PathBuf,
    corpus: PathBuf,
    /// Write the corpus with predicted labels in place of gold ones.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PredictorArg {
    /// Dictionary bigram model built from the input corpus.
    Bigram,
    /// Ask the client (`--client` or `--fixture`).
    Client,
}

#[derive(Args)]
struct ReduceArgs {
    corpus: PathBuf,
    #[arg(long, value_parser = parse_method)]
    method: Method,
    /// Dictionary file: word[TAB]frequency per line.
    #[arg(long)]
    dict: Option<PathBuf>,
    /// Consonant-class table; the built-in Bangla table by default.
    #[arg(long)]
    phonetic_table: Option<PathBuf>,
    /// Command speaking the JSON-lines client protocol.
    #[arg(long, conflicts_with = "fixture")]
    client: Option<String>,
    /// Recorded client responses (JSON lines).
    #[arg(long)]
    fixture: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "bigram")]
    predictor: PredictorArg,
    /// `adaptive` or a fixed number of edits.
    #[arg(long, default_value = "adaptive", value_parser = parse_max_dist)]
    max_dist: MaxDistance,
    #[arg(long, default_value_t = 0.2)]
    mask_probability: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "bn")]
    src: String,
    #[arg(long, default_value = "en")]
    pivot: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    /// Reduced corpora, as `name=path` or a path whose file stem names the
    /// method.
    #[arg(required = true)]
    outputs: Vec<String>,
    /// Corrected reference corpus.
    #[arg(long)]
    truth: PathBuf,
    /// Noisy inputs, needed for the composite score.
    #[arg(long)]
    inputs: Option<PathBuf>,
    #[arg(long)]
    embeddings: Option<PathBuf>,
    /// Dictionary for word coverage; the embedding vocabulary by default.
    #[arg(long)]
    coverage_dict: Option<PathBuf>,
    /// `method[TAB]accurate[TAB]total` per line.
    #[arg(long)]
    human_tallies: Option<PathBuf>,
    #[arg(long, default_value_t = 4.0)]
    beta: f64,
}

#[derive(Subcommand)]
enum AgreementCommand {
    /// Fleiss' kappa of a rating matrix.
    Kappa { matrix: PathBuf },
    /// Per-category and pooled kappa from multi-label annotations.
    KappaLabels { annotations: PathBuf },
    /// Control-sample trustworthiness of one annotator.
    Trust {
        annotator: PathBuf,
        gold: PathBuf,
        #[arg(long, default_value_t = 90.0)]
        threshold: f64,
        #[arg(long, value_enum, default_value = "exact")]
        mode: TrustArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TrustArg {
    Exact,
    Jaccard,
}

#[derive(Args)]
struct ImportArgs {
    csv: PathBuf,
    out: PathBuf,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse()
}

fn parse_max_dist(s: &str) -> Result<MaxDistance, String> {
    if s == "adaptive" {
        return Ok(MaxDistance::Adaptive);
    }
    s.parse()
        .map(MaxDistance::Fixed)
        .map_err(|_| format!("expected 'adaptive' or a number, found {s:?}"))
}

struct Ctx {
    load: LoadOptions,
    pretty: bool,
}

impl Ctx {
    fn corpus(&self, path: &Path) -> Result<Vec<Document>, Error> {
        Ok(dataio::load_corpus_with(path, self.load)?.documents)
    }

    fn emit<T: Serialize>(&self, value: &T) -> Result<(), Error> {
        let v = serde_json::to_value(value)?;
        if self.pretty {
            print!("{}", pretty::render_value(&v));
        } else {
            println!("{}", serde_json::to_string(&v)?);
        }
        Ok(())
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments");
            eprintln!("ERROR USAGE: {}", first.trim_start_matches("error: "));
            return ExitCode::from(1);
        }
    };

    if let Some(n) = std::env::var("NOISEKIT_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::warn!("could not size the thread pool: {e}");
        }
    }

    let ctx = Ctx {
        load: LoadOptions {
            normalize: !cli.no_normalize || cli.normalize,
        },
        pretty: cli.pretty,
    };
    match run(cli.command, &ctx) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            eprintln!("ERROR {}: {msg}", e.code());
            ExitCode::from(match e.class() {
                ErrorClass::Data => 2,
                ErrorClass::Client => 3,
            })
        }
    }
}

fn run(command: Command, ctx: &Ctx) -> Result<(), Error> {
    match command {
        Command::Stats(a) => cmd_stats(a, ctx),
        Command::Dedupe(a) => cmd_dedupe(a, ctx),
        Command::TrainNoise(a) => cmd_train_noise(a, ctx),
        Command::PredictNoise(a) => cmd_predict_noise(a, ctx),
        Command::TrainSentiment(a) => cmd_train_sentiment(a, ctx),
        Command::PredictSentiment(a) => cmd_predict_sentiment(a, ctx),
        Command::Reduce(a) => cmd_reduce(a, ctx),
        Command::EvalReduction(a) => cmd_eval(a, ctx),
        Command::Agreement(a) => cmd_agreement(a, ctx),
        Command::Import(a) => cmd_import(a, ctx),
    }
}

fn cmd_stats(a: StatsArgs, ctx: &Ctx) -> Result<(), Error> {
    let corpus = ctx.corpus(&a.corpus)?;
    let mut report = stats::corpus_stats(&corpus, a.bin_width)?;
    // Correlations are taken over distinct texts.
    let (distinct, duplicates) = stats::dedupe(&corpus, DedupeKey::Normalized);
    if report.correlation.is_some() && duplicates > 0 {
        report.correlation = Some(stats::label_correlation(&distinct)?);
    }
    if let Some(p) = &a.histogram_tsv {
        std::fs::write(p, stats::histogram_tsv(&report.lengths))?;
    }
    if let Some(p) = &a.correlation_tsv {
        let m = report
            .correlation
            .as_ref()
            .ok_or_else(|| Error::MissingLabels("correlations need noise labels on every document".into()))?;
        std::fs::write(p, stats::correlation_tsv(m))?;
    }
    let mut v = serde_json::to_value(&report)?;
    v["duplicates"] = json!(duplicates);
    ctx.emit(&v)
}

fn cmd_dedupe(a: DedupeArgs, ctx: &Ctx) -> Result<(), Error> {
    let corpus = ctx.corpus(&a.input)?;
    let key = match a.key {
        KeyArg::Normalized => DedupeKey::Normalized,
        KeyArg::Raw => DedupeKey::Raw,
    };
    let (kept, removed) = stats::dedupe(&corpus, key);
    dataio::save_corpus(&kept, &a.output)?;
    ctx.emit(&json!({"input": corpus.len(), "kept": kept.len(), "removed": removed}))
}

fn featurize(model: &TfidfModel, corpus: &[Document]) -> Vec<SparseVector> {
    corpus.par_iter().map(|d| model.transform(&d.text)).collect()
}

fn cmd_train_noise(a: TrainNoiseArgs, ctx: &Ctx) -> Result<(), Error> {
    let corpus = ctx.corpus(&a.train)?;
    let labels = corpus
        .iter()
        .map(|d| d.noise.ok_or_else(|| Error::MissingLabels(format!("document {} has no noise labels", d.id))))
        .collect::<Result<Vec<_>, _>>()?;
    let texts: Vec<&str> = corpus.iter().map(|d| d.text.as_str()).collect();
    let featurizer = TfidfModel::fit(&texts, a.features.config())?;
    let x = featurize(&featurizer, &corpus);
    let config = TrainConfig {
        c: a.c,
        epochs: a.epochs,
        learning_rate: a.learning_rate,
        ..TrainConfig::hinge().with_seed(a.seed)
    };
    let model = train_ovr_hinge_with_dim(&x, &labels, featurizer.dimension(), &config)?;
    let dim = featurizer.dimension();
    TextClassifier { featurizer, model }.save(&a.out)?;
    ctx.emit(&json!({"documents": corpus.len(), "features": dim, "model": a.out}))
}

fn prf_report(counts: &ConfusionCounts, names: &[String]) -> Value {
    let per_class: Vec<Value> = counts
        .classes
        .iter()
        .zip(names)
        .map(|(c, n)| {
            let p = Prf::from_counts(c);
            json!({"label": n, "precision": p.precision, "recall": p.recall, "f1": p.f1, "support": c.support()})
        })
        .collect();
    json!({
        "micro": prf(counts, Averaging::Micro),
        "macro": prf(counts, Averaging::Macro),
        "weighted": prf(counts, Averaging::Weighted),
        "per_class": per_class,
    })
}

fn load_classifier(path: &Path, expected: &str) -> Result<TextClassifier, Error> {
    let clf = TextClassifier::load(path)?;
    let kind = format!("{:?}", clf.model.kind);
    if kind != expected {
        return Err(Error::WrongModelKind {
            expected: expected.into(),
            found: kind,
        });
    }
    Ok(clf)
}

fn class_names(model: &LinearModel) -> Vec<String> {
    model.class_names.clone()
}

fn cmd_predict_noise(a: PredictArgs, ctx: &Ctx) -> Result<(), Error> {
    let clf = load_classifier(&a.model, "OneVsRestHinge")?;
    let corpus = ctx.corpus(&a.corpus)?;
    let x = featurize(&clf.featurizer, &corpus);
    let predicted = x
        .par_iter()
        .map(|v| predict_multilabel(&clf.model, v))
        .collect::<Result<Vec<_>, _>>()?;
    let predictions: Vec<Value> = corpus
        .iter()
        .zip(&predicted)
        .map(|(d, p)| json!({"id": d.id, "noise": p.to_bitstring()}))
        .collect();
    let gold: Option<Vec<_>> = corpus.iter().map(|d| d.noise).collect();
    let metrics = match gold {
        Some(g) if !g.is_empty() => Some(prf_report(
            &ConfusionCounts::from_label_sets(&g, &predicted)?,
            &class_names(&clf.model),
        )),
        _ => None,
    };
    if let Some(out) = &a.out {
        let docs: Vec<Document> = corpus
            .iter()
            .zip(&predicted)
            .map(|(d, &p)| Document { noise: Some(p), ..d.clone() })
            .collect();
        dataio::save_corpus(&docs, out)?;
    }
    ctx.emit(&json!({"documents": corpus.len(), "predictions": predictions, "metrics": metrics}))
}

fn cmd_train_sentiment(a: TrainSentimentArgs, ctx: &Ctx) -> Result<(), Error> {
    let corpus = ctx.corpus(&a.train)?;
    let labels = corpus
        .iter()
        .map(|d| d.sentiment.ok_or_else(|| Error::MissingLabels(format!("document {} has no sentiment", d.id))))
        .collect::<Result<Vec<_>, _>>()?;
    let mut counts = [0u64; 3];
    for l in &labels {
        counts[l.index()] += 1;
    }
    let weights = if a.auto_weights {
        compute_class_weights(&counts)?
    } else {
        ClassWeights::uniform(SentimentLabel::ALL.len())
    };
    let texts: Vec<&str> = corpus.iter().map(|d| d.text.as_str()).collect();
    let featurizer = TfidfModel::fit(&texts, a.features.config())?;
    let x = featurize(&featurizer, &corpus);
    let config = TrainConfig {
        c: a.c,
        epochs: a.epochs,
        learning_rate: a.learning_rate,
        batch_size: a.batch_size,
        ..TrainConfig::softmax().with_seed(a.seed)
    };
    let model = train_softmax_weighted_with_dim(&x, &labels, &weights, featurizer.dimension(), &config)?;
    let dim = featurizer.dimension();
    TextClassifier { featurizer, model }.save(&a.out)?;
    let class_weights: BTreeMap<&str, f64> = SentimentLabel::ALL
        .iter()
        .map(|l| (l.as_str(), weights.0[l.index()]))
        .collect();
    ctx.emit(&json!({
        "documents": corpus.len(),
        "features": dim,
        "class_weights": class_weights,
        "model": a.out,
    }))
}

fn cmd_predict_sentiment(a: PredictArgs, ctx: &Ctx) -> Result<(), Error> {
    let clf = load_classifier(&a.model, "SoftmaxWeighted")?;
    let corpus = ctx.corpus(&a.corpus)?;
    let x = featurize(&clf.featurizer, &corpus);
    let predicted = x
        .par_iter()
        .map(|v| predict_sentiment(&clf.model, v))
        .collect::<Result<Vec<_>, _>>()?;
    let predictions: Vec<Value> = corpus
        .iter()
        .zip(&predicted)
        .map(|(d, (l, p))| json!({"id": d.id, "sentiment": l, "probabilities": p}))
        .collect();
    let gold: Option<Vec<usize>> = corpus.iter().map(|d| d.sentiment.map(SentimentLabel::index)).collect();
    let metrics = match gold {
        Some(g) if !g.is_empty() => {
            let p: Vec<usize> = predicted.iter().map(|(l, _)| l.index()).collect();
            Some(prf_report(
                &ConfusionCounts::from_multiclass(&g, &p, SentimentLabel::ALL.len())?,
                &class_names(&clf.model),
            ))
        }
        _ => None,
    };
    if let Some(out) = &a.out {
        let docs: Vec<Document> = corpus
            .iter()
            .zip(&predicted)
            .map(|(d, (l, _))| Document { sentiment: Some(*l), ..d.clone() })
            .collect();
        dataio::save_corpus(&docs, out)?;
    }
    ctx.emit(&json!({"documents": corpus.len(), "predictions": predictions, "metrics": metrics}))
}

/// Independent per-document stream derived from the run seed.
fn document_seed(seed: u64, index: usize) -> u64 {
    let mut z = seed.wrapping_add((index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn open_client(a: &ReduceArgs) -> Result<Option<TranslatorClient>, Error> {
    if let Some(cmd) = &a.client {
        return Ok(Some(TranslatorClient::Subprocess(SubprocessClient::spawn(cmd)?)));
    }
    if let Some(f) = &a.fixture {
        return Ok(Some(TranslatorClient::Fixture(dataio::load_fixture(f)?)));
    }
    Ok(None)
}

fn cmd_reduce(a: ReduceArgs, ctx: &Ctx) -> Result<(), Error> {
    let corpus = ctx.corpus(&a.corpus)?;
    let table = match &a.phonetic_table {
        Some(p) => PhoneticTable::load(p)?,
        None => PhoneticTable::bangla().clone(),
    };
    let dict: Option<Dictionary> = a.dict.as_deref().map(|p| dataio::load_dictionary(p, &table)).transpose()?;
    let uses_dict = matches!(a.method, Method::Spell | Method::SpellParaphrase | Method::MaskOovFill);
    if uses_dict && dict.is_none() {
        return Err(Error::MissingResource(format!("--dict required for {}", a.method)));
    }
    let masks = matches!(a.method, Method::MaskOovFill | Method::MaskRandomFill);
    let needs_client = matches!(a.method, Method::SpellParaphrase | Method::BackTranslate)
        || (masks && matches!(a.predictor, PredictorArg::Client));
    let mut client = if needs_client { open_client(&a)? } else { None };
    if needs_client && client.is_none() {
        return Err(Error::MissingResource(format!("--client or --fixture required for {}", a.method)));
    }
    let empty_dict;
    let bigram_dict = match &dict {
        Some(d) => d,
        None => {
            empty_dict = Dictionary::new(table.clone());
            &empty_dict
        }
    };
    if masks && matches!(a.predictor, PredictorArg::Bigram) && bigram_dict.is_empty() {
        return Err(Error::MissingResource("--dict required for the bigram predictor".into()));
    }

    let texts: Vec<&str> = corpus.iter().map(|d| d.text.as_str()).collect();
    let outputs: Vec<String> = match client.as_mut() {
        None => {
            // Pure methods: documents are independent.
            let predictor = BigramFillPredictor::from_texts(bigram_dict, &texts);
            corpus
                .par_iter()
                .enumerate()
                .map_init(
                    || predictor.clone(),
                    |p, (i, d)| {
                        let mut res = Resources {
                            dictionary: dict.as_ref(),
                            predictor: Some(p),
                            ..plain_resources(&a, document_seed(a.seed, i))
                        };
                        reduce(&d.text, a.method, &mut res)
                    },
                )
                .collect::<Result<_, _>>()?
        }
        Some(client) => {
            let mut out = Vec::with_capacity(corpus.len());
            for (i, d) in corpus.iter().enumerate() {
                let seed = document_seed(a.seed, i);
                let text = if masks {
                    let mut predictor = ClientMaskPredictor {
                        client: client as &mut dyn TextClient,
                        lang: a.src.clone(),
                    };
                    let mut res = Resources {
                        dictionary: dict.as_ref(),
                        predictor: Some(&mut predictor),
                        ..plain_resources(&a, seed)
                    };
                    reduce(&d.text, a.method, &mut res)?
                } else {
                    let mut res = Resources {
                        dictionary: dict.as_ref(),
                        client: Some(client as &mut dyn TextClient),
                        ..plain_resources(&a, seed)
                    };
                    reduce(&d.text, a.method, &mut res)?
                };
                out.push(text);
            }
            out
        }
    };

    let mut changed = 0;
    let mut reduced = Vec::with_capacity(corpus.len());
    for (d, text) in corpus.iter().zip(outputs) {
        let text = if ctx.load.normalize { noisekit::normalize(&text) } else { text };
        if noisekit::normalize(&text).is_empty() {
            return Err(Error::PredictorFailure(format!("empty output for document {}", d.id)));
        }
        changed += usize::from(text != d.text);
        reduced.push(Document { text, ..d.clone() });
    }
    dataio::save_corpus(&reduced, &a.out)?;
    ctx.emit(&json!({
        "documents": corpus.len(),
        "changed": changed,
        "method": a.method.as_str(),
        "out": a.out,
    }))
}

/// Reduction settings without any borrowed resource.
fn plain_resources<'r>(a: &ReduceArgs, seed: u64) -> Resources<'r> {
    Resources {
        max_dist: a.max_dist,
        mask_probability: a.mask_probability,
        seed,
        source_lang: a.src.clone(),
        pivot_lang: a.pivot.clone(),
        ..Resources::default()
    }
}

fn aligned_texts(truth: &[Document], other: &[Document], what: &str) -> Result<Vec<String>, Error> {
    if other.len() != truth.len() {
        return Err(Error::LengthMismatch {
            expected: truth.len(),
            found: other.len(),
        });
    }
    let by_id: HashMap<&str, &Document> = dataio::index_by_id(other);
    truth
        .iter()
        .map(|t| {
            by_id
                .get(t.id.as_str())
                .map(|d| d.text.clone())
                .ok_or_else(|| Error::MissingResource(format!("{what} has no document {}", t.id)))
        })
        .collect()
}

fn cmd_eval(a: EvalArgs, ctx: &Ctx) -> Result<(), Error> {
    let truth_docs = ctx.corpus(&a.truth)?;
    let truth: Vec<String> = truth_docs.iter().map(|d| d.text.clone()).collect();
    let mut outputs = BTreeMap::new();
    for arg in &a.outputs {
        let (name, path) = match arg.split_once('=') {
            Some((n, p)) => (n.to_string(), PathBuf::from(p)),
            None => {
                let p = PathBuf::from(arg);
                let stem = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                (stem, p)
            }
        };
        let docs = ctx.corpus(&path)?;
        if outputs.insert(name.clone(), aligned_texts(&truth_docs, &docs, &name)?).is_some() {
            return Err(Error::InvalidConfig(format!("method {name:?} given twice")));
        }
    }
    let inputs = match &a.inputs {
        Some(p) => Some(aligned_texts(&truth_docs, &ctx.corpus(p)?, "inputs")?),
        None => None,
    };
    let embeddings = a.embeddings.as_deref().map(dataio::load_embeddings).transpose()?;
    let coverage = a
        .coverage_dict
        .as_deref()
        .map(|p| dataio::load_dictionary(p, PhoneticTable::bangla()))
        .transpose()?;
    let tallies = a.human_tallies.as_deref().map(dataio::load_human_tallies).transpose()?;
    let res = EvalResources {
        inputs: inputs.as_deref(),
        embeddings: embeddings.as_ref(),
        coverage_vocab: coverage.as_ref().map(|d| d as &dyn noisekit::reduce::Vocabulary),
        human_tallies: tallies.as_ref(),
        beta: Some(a.beta),
        max_n: None,
    };
    let reports = evaluate_reduction(&outputs, &truth, &res)?;
    ctx.emit(&json!({"sentences": truth.len(), "reports": reports}))
}

fn cmd_agreement(a: AgreementCommand, ctx: &Ctx) -> Result<(), Error> {
    match a {
        AgreementCommand::Kappa { matrix } => {
            let m = dataio::load_rating_matrix(&matrix)?;
            ctx.emit(&json!({
                "items": m.items(),
                "raters": m.raters(),
                "categories": m.categories(),
                "kappa": fleiss_kappa(&m),
            }))
        }
        AgreementCommand::KappaLabels { annotations } => {
            let ann = dataio::load_annotations(&annotations)?;
            ctx.emit(&label_set_kappa(&ann)?)
        }
        AgreementCommand::Trust {
            annotator,
            gold,
            threshold,
            mode,
        } => {
            let ann = dataio::load_label_sets(&annotator)?;
            let gold = dataio::load_label_sets(&gold)?;
            let by_id: HashMap<&str, _> = ann.iter().map(|(id, s)| (id.as_str(), *s)).collect();
            if ann.len() != gold.len() {
                return Err(Error::LengthMismatch {
                    expected: gold.len(),
                    found: ann.len(),
                });
            }
            let mut aligned = Vec::with_capacity(gold.len());
            for (id, _) in &gold {
                aligned.push(
                    *by_id
                        .get(id.as_str())
                        .ok_or_else(|| Error::MissingLabels(format!("annotator has no label for {id}")))?,
                );
            }
            let g: Vec<_> = gold.iter().map(|(_, s)| *s).collect();
            let mode = match mode {
                TrustArg::Exact => TrustMode::Exact,
                TrustArg::Jaccard => TrustMode::Jaccard,
            };
            let t = trustworthiness(&aligned, &g, threshold, mode)?;
            ctx.emit(&json!({"items": g.len(), "score": t.score, "pass": t.pass, "threshold": threshold}))
        }
    }
}

fn cmd_import(a: ImportArgs, ctx: &Ctx) -> Result<(), Error> {
    let report = dataio::import_upstream_csv(&a.csv, ctx.load)?;
    dataio::save_corpus(&report.documents, &a.out)?;
    let labelled = report.documents.iter().filter(|d| d.noise.is_some()).count();
    ctx.emit(&json!({
        "documents": report.documents.len(),
        "skipped": report.skipped,
        "noise_labelled": labelled,
        "noise_labels": NoiseLabel::ALL.iter().map(|l| l.name()).collect::<Vec<_>>(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn document_seeds_differ() {
        let a: Vec<u64> = (0..100).map(|i| document_seed(7, i)).collect();
        let mut b = a.clone();
        b.sort_unstable();
        b.dedup();
        assert_eq!(a.len(), b.len());
        assert_ne!(document_seed(7, 0), document_seed(8, 0));
    }

    #[test]
    fn max_dist_parsing() {
        assert_eq!(parse_max_dist("adaptive").unwrap(), MaxDistance::Adaptive);
        assert_eq!(parse_max_dist("2").unwrap(), MaxDistance::Fixed(2));
        assert!(parse_max_dist("far").is_err());
    }
}
