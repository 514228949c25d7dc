//! Reading and writing the on-disk formats.
//!
//! Corpus files are UTF-8 TSV with the header `id\ttext\tsentiment\tnoise`.
//! `sentiment` is `neutral`, `positive`, `negative` or `-`; `noise` is a
//! ten-character bitstring in label order or `-`. Inside `text`, tab,
//! newline, carriage return and backslash are written as `\t`, `\n`, `\r`
//! and `\\`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::agreement::RatingMatrix;
use crate::error::{Error, Result};
use crate::metrics::EmbeddingTable;
use crate::reduce::{Dictionary, FixtureClient, FixtureEntry, PhoneticTable, RejectedWord};
use crate::text::{normalize, Document, NoiseLabel, NoiseLabelSet, SentimentLabel};

pub const CORPUS_HEADER: &str = "id\ttext\tsentiment\tnoise";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Validation,
    Test,
    Unsplit,
}

impl Split {
    /// Guessed from the file name: `train`, `valid`/`val`/`dev`, `test`.
    pub fn from_path(path: &Path) -> Split {
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().to_lowercase())
            .unwrap_or_default();
        let has = |w: &str| {
            stem.split(|c: char| !c.is_ascii_alphanumeric())
                .any(|part| part == w || part.starts_with(w))
        };
        if has("train") {
            Split::Train
        } else if has("valid") || has("val") || has("dev") {
            Split::Validation
        } else if has("test") {
            Split::Test
        } else {
            Split::Unsplit
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusFile {
    pub documents: Vec<Document>,
    pub split: Split,
}

/// Reads lines as raw bytes so an invalid sequence can be located. A final
/// line without a newline is accepted; one trailing `\r` per line is
/// dropped.
fn read_lines(path: &Path) -> Result<Vec<String>> {
    let bytes = std::fs::read(path)?;
    let mut lines = Vec::new();
    if bytes.is_empty() {
        return Ok(lines);
    }
    let body = bytes.strip_suffix(b"\n").unwrap_or(&bytes);
    for (i, raw) in body.split(|&b| b == b'\n').enumerate() {
        let raw = raw.strip_suffix(b"\r").unwrap_or(raw);
        let line = std::str::from_utf8(raw).map_err(|_| Error::BadEncoding {
            path: path.to_path_buf(),
            line: i + 1,
        })?;
        lines.push(line.to_string());
    }
    Ok(lines)
}

pub fn escape_field(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

pub fn unescape_field(field: &str) -> std::result::Result<String, String> {
    let mut out = String::with_capacity(field.len());
    let mut chars = field.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('\\') => out.push('\\'),
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            Some(other) => return Err(format!("unknown escape \\{other}")),
            None => return Err("dangling backslash".into()),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LoadOptions {
    /// Normalize text on load.
    pub normalize: bool,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions { normalize: true }
    }
}

pub fn load_corpus(path: &Path) -> Result<CorpusFile> {
    load_corpus_with(path, LoadOptions::default())
}

pub fn load_corpus_with(path: &Path, opts: LoadOptions) -> Result<CorpusFile> {
    let lines = read_lines(path)?;
    let err = |line: usize, column: usize, reason: String| Error::malformed(path, line, column, reason);
    match lines.first() {
        Some(h) if h == CORPUS_HEADER => {}
        Some(h) => return Err(err(1, 1, format!("expected header {CORPUS_HEADER:?}, found {h:?}"))),
        None => return Err(err(1, 1, "missing header".into())),
    }
    let mut documents = Vec::with_capacity(lines.len().saturating_sub(1));
    let mut ids = HashSet::new();
    for (i, line) in lines.iter().enumerate().skip(1) {
        let n = i + 1;
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 4 {
            return Err(err(n, fields.len().min(5), format!("expected 4 fields, found {}", fields.len())));
        }
        let id = fields[0];
        if id.is_empty() {
            return Err(err(n, 1, "empty id".into()));
        }
        if !ids.insert(id.to_string()) {
            return Err(err(n, 1, format!("duplicate id {id:?}")));
        }
        let raw = unescape_field(fields[1]).map_err(|r| err(n, 2, r))?;
        let text = if opts.normalize { normalize(&raw) } else { raw };
        if normalize(&text).is_empty() {
            return Err(err(n, 2, "empty text".into()));
        }
        let sentiment = match fields[2] {
            "-" => None,
            s => Some(
                s.parse::<SentimentLabel>()
                    .map_err(|_| err(n, 3, format!("unknown sentiment {s:?}")))?,
            ),
        };
        let noise = match fields[3] {
            "-" => None,
            s => Some(
                NoiseLabelSet::parse_bitstring(s)
                    .ok_or_else(|| err(n, 4, format!("noise must be 10 bits or '-', found {s:?}")))?,
            ),
        };
        documents.push(Document {
            id: id.to_string(),
            text,
            sentiment,
            noise,
        });
    }
    Ok(CorpusFile {
        documents,
        split: Split::from_path(path),
    })
}

/// The exact bytes [`save_corpus`] writes.
pub fn corpus_to_string(documents: &[Document]) -> String {
    let mut out = String::from(CORPUS_HEADER);
    out.push('\n');
    for d in documents {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}",
            d.id,
            escape_field(&d.text),
            d.sentiment.map_or("-", SentimentLabel::as_str),
            d.noise.map_or_else(|| "-".to_string(), NoiseLabelSet::to_bitstring),
        );
    }
    out
}

pub fn save_corpus(documents: &[Document], path: &Path) -> Result<()> {
    for d in documents {
        if d.id.is_empty() || d.id.contains(['\t', '\n', '\r']) {
            return Err(Error::InvalidConfig(format!("id {:?} cannot be written", d.id)));
        }
    }
    std::fs::write(path, corpus_to_string(documents))?;
    Ok(())
}

/// `word[<TAB>frequency]` per line; frequency defaults to 1. Blank lines
/// are skipped. Words are normalized before insertion.
pub fn load_dictionary(path: &Path, table: &PhoneticTable) -> Result<Dictionary> {
    let mut dict = Dictionary::new(table.clone());
    for (i, line) in read_lines(path)?.iter().enumerate() {
        let n = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split('\t');
        let word = normalize(parts.next().unwrap_or_default());
        let freq = match parts.next() {
            None => 1,
            Some(f) => f
                .trim()
                .parse::<u64>()
                .map_err(|_| Error::malformed(path, n, 2, format!("bad frequency {f:?}")))?,
        };
        if parts.next().is_some() {
            return Err(Error::malformed(path, n, 3, "too many fields"));
        }
        dict.insert(&word, freq).map_err(|r| {
            let reason = match r {
                RejectedWord::NotSingleWord => format!("{word:?} is not a single word"),
                RejectedWord::ReservedCharacter => format!("{word:?} contains a reserved character"),
            };
            Error::malformed(path, n, 1, reason)
        })?;
    }
    Ok(dict)
}

/// Text vectors: a `VOCAB DIM` header, then one word and `DIM` numbers per
/// line.
pub fn load_embeddings(path: &Path) -> Result<EmbeddingTable> {
    let lines = read_lines(path)?;
    let header = lines.first().ok_or_else(|| Error::malformed(path, 1, 1, "missing header"))?;
    let nums: Vec<usize> = header
        .split_whitespace()
        .map(str::parse)
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::malformed(path, 1, 1, format!("bad header {header:?}")))?;
    let [vocab, dim] = nums[..] else {
        return Err(Error::malformed(path, 1, 1, format!("header must be 'VOCAB DIM', found {header:?}")));
    };
    let mut table = EmbeddingTable::new(dim);
    let rows: Vec<&String> = lines[1..].iter().filter(|l| !l.trim().is_empty()).collect();
    for (i, line) in lines.iter().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let n = i + 1;
        let mut parts = line.split_whitespace();
        let word = parts.next().unwrap_or_default();
        let values: Vec<f64> = parts
            .enumerate()
            .map(|(j, v)| {
                v.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| Error::malformed(path, n, j + 2, format!("bad component {v:?}")))
            })
            .collect::<Result<_>>()?;
        if values.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: values.len(),
            });
        }
        table.insert(normalize(word), values)?;
    }
    if rows.len() != vocab {
        return Err(Error::malformed(
            path,
            1,
            1,
            format!("header declares {vocab} rows, file has {}", rows.len()),
        ));
    }
    Ok(table)
}

/// JSON-lines fixture. Later lines override earlier ones with the same key.
pub fn load_fixture(path: &Path) -> Result<FixtureClient> {
    let mut client = FixtureClient::default();
    for (i, line) in read_lines(path)?.iter().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let entry: FixtureEntry = serde_json::from_str(line)
            .map_err(|e| Error::malformed(path, i + 1, e.column(), e.to_string()))?;
        if client.insert(entry) {
            log::warn!("{}:{}: duplicate fixture key, later entry wins", path.display(), i + 1);
        }
    }
    Ok(client)
}

/// Header of category names, then one row of counts per item.
pub fn load_rating_matrix(path: &Path) -> Result<RatingMatrix> {
    let lines = read_lines(path)?;
    let header = lines.first().ok_or_else(|| Error::malformed(path, 1, 1, "missing header"))?;
    let categories: Vec<String> = header.split('\t').map(str::to_string).collect();
    let mut rows = Vec::new();
    for (i, line) in lines.iter().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let row: Vec<u32> = line
            .split('\t')
            .enumerate()
            .map(|(j, v)| {
                v.trim()
                    .parse()
                    .map_err(|_| Error::malformed(path, i + 1, j + 1, format!("bad count {v:?}")))
            })
            .collect::<Result<_>>()?;
        if row.len() != categories.len() {
            return Err(Error::malformed(
                path,
                i + 1,
                row.len().min(categories.len()) + 1,
                format!("expected {} counts, found {}", categories.len(), row.len()),
            ));
        }
        rows.push(row);
    }
    RatingMatrix::new(categories, rows)
}

fn parse_noise(path: &Path, line: usize, column: usize, s: &str) -> Result<NoiseLabelSet> {
    NoiseLabelSet::parse_bitstring(s)
        .ok_or_else(|| Error::malformed(path, line, column, format!("noise must be 10 bits, found {s:?}")))
}

/// `id<TAB>noise` rows under that header, in file order.
pub fn load_label_sets(path: &Path) -> Result<Vec<(String, NoiseLabelSet)>> {
    let lines = read_lines(path)?;
    if lines.first().map(String::as_str) != Some("id\tnoise") {
        return Err(Error::malformed(path, 1, 1, "expected header \"id\\tnoise\""));
    }
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for (i, line) in lines.iter().enumerate().skip(1) {
        let n = i + 1;
        let Some((id, bits)) = line.split_once('\t') else {
            return Err(Error::malformed(path, n, 1, "expected 2 fields"));
        };
        if !seen.insert(id.to_string()) {
            return Err(Error::malformed(path, n, 1, format!("duplicate id {id:?}")));
        }
        out.push((id.to_string(), parse_noise(path, n, 2, bits)?));
    }
    Ok(out)
}

/// `item<TAB>rater<TAB>noise` rows; returns per-item annotations ordered by
/// item then rater.
pub fn load_annotations(path: &Path) -> Result<Vec<Vec<NoiseLabelSet>>> {
    let lines = read_lines(path)?;
    if lines.first().map(String::as_str) != Some("item\trater\tnoise") {
        return Err(Error::malformed(path, 1, 1, "expected header \"item\\trater\\tnoise\""));
    }
    let mut items: BTreeMap<String, BTreeMap<String, NoiseLabelSet>> = BTreeMap::new();
    for (i, line) in lines.iter().enumerate().skip(1) {
        let n = i + 1;
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(Error::malformed(path, n, 1, format!("expected 3 fields, found {}", fields.len())));
        }
        let set = parse_noise(path, n, 3, fields[2])?;
        let prev = items
            .entry(fields[0].to_string())
            .or_default()
            .insert(fields[1].to_string(), set);
        if prev.is_some() {
            return Err(Error::malformed(path, n, 2, "rater annotated the item twice"));
        }
    }
    Ok(items.into_values().map(|r| r.into_values().collect()).collect())
}

/// `method<TAB>accurate<TAB>total` rows.
pub fn load_human_tallies(path: &Path) -> Result<BTreeMap<String, (u64, u64)>> {
    let mut out = BTreeMap::new();
    for (i, line) in read_lines(path)?.iter().enumerate() {
        let n = i + 1;
        if line.trim().is_empty() || (n == 1 && line.starts_with("method\t")) {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(Error::malformed(path, n, 1, format!("expected 3 fields, found {}", fields.len())));
        }
        let num = |j: usize| {
            fields[j]
                .trim()
                .parse::<u64>()
                .map_err(|_| Error::malformed(path, n, j + 1, format!("bad count {:?}", fields[j])))
        };
        out.insert(fields[0].to_string(), (num(1)?, num(2)?));
    }
    Ok(out)
}

/// One sentence per line, normalized.
pub fn load_lines(path: &Path) -> Result<Vec<String>> {
    Ok(read_lines(path)?.iter().map(|l| normalize(l)).collect())
}

fn header_key(name: &str) -> String {
    name.chars()
        .filter(|c| c.is_alphanumeric())
        .flat_map(char::to_lowercase)
        .collect()
}

fn noise_aliases(label: NoiseLabel) -> &'static [&'static str] {
    match label {
        NoiseLabel::LocalWord => &["localword", "localwords", "regionalword", "regionalwords"],
        NoiseLabel::WordMisuse => &["wordmisuse", "misuse", "wordmisuses"],
        NoiseLabel::ContextWordMissing => &["contextwordmissing", "wordmissing", "contextmissing", "missingcontext"],
        NoiseLabel::WrongSerial => &["wrongserial", "wrongwordorder", "wordorder"],
        NoiseLabel::MixedLanguage => &["mixedlanguage", "mixedlanguages", "codemixed"],
        NoiseLabel::PunctuationError => &["punctuationerror", "punctuationerrors", "punctuation"],
        NoiseLabel::SpacingError => &["spacingerror", "spacingerrors", "spacing"],
        NoiseLabel::SpellingError => &["spellingerror", "spellingerrors", "spelling"],
        NoiseLabel::CoinedWord => &["coinedword", "coinedwords", "coined"],
        NoiseLabel::Others => &["others", "other"],
    }
}

fn parse_flag(v: &str) -> Option<bool> {
    match v.trim().to_ascii_lowercase().as_str() {
        "" | "0" | "0.0" | "false" | "no" | "n" => Some(false),
        "1" | "1.0" | "true" | "yes" | "y" => Some(true),
        _ => None,
    }
}

fn parse_upstream_sentiment(v: &str) -> Option<SentimentLabel> {
    match v.trim() {
        "0" => Some(SentimentLabel::Neutral),
        "1" => Some(SentimentLabel::Positive),
        "2" => Some(SentimentLabel::Negative),
        other => other.to_lowercase().parse().ok(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImportReport {
    pub documents: Vec<Document>,
    /// Rows whose text was empty after normalization.
    pub skipped: usize,
}

/// Maps a published CSV to documents. Column names are matched
/// case-insensitively ignoring punctuation: text from `Data`/`text`/
/// `sentence`/`comment`, sentiment from `Label`/`sentiment`/`polarity`
/// (`0` neutral, `1` positive, `2` negative, or a label name), an optional
/// `id`, and noise flags from columns named after the ten categories.
/// Noise columns must be all present or all absent. Rows without an id are
/// numbered from 1 in file order. Text is normalized unless `opts` says
/// otherwise.
pub fn import_upstream_csv(path: &Path, opts: LoadOptions) -> Result<ImportReport> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(false)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    let headers = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    let keys: Vec<String> = headers.iter().map(header_key).collect();
    let find = |names: &[&str]| keys.iter().position(|k| names.contains(&k.as_str()));

    let text_col = find(&["data", "text", "sentence", "comment", "review"])
        .ok_or_else(|| Error::malformed(path, 1, 1, "no text column (Data/text/sentence)"))?;
    let sentiment_col = find(&["label", "sentiment", "polarity"]);
    let id_col = find(&["id"]);
    let noise_cols: Vec<Option<usize>> = NoiseLabel::ALL.iter().map(|&l| find(noise_aliases(l))).collect();
    let found = noise_cols.iter().filter(|c| c.is_some()).count();
    if found != 0 && found != NoiseLabel::COUNT {
        let missing: Vec<&str> = NoiseLabel::ALL
            .iter()
            .zip(&noise_cols)
            .filter(|(_, c)| c.is_none())
            .map(|(l, _)| l.name())
            .collect();
        return Err(Error::malformed(path, 1, 1, format!("noise columns missing: {}", missing.join(", "))));
    }

    let mut documents = Vec::new();
    let mut skipped = 0;
    let mut ids = HashSet::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record.position().map_or(i + 2, |p| p.line() as usize);
        let raw = record.get(text_col).unwrap_or_default();
        let text = if opts.normalize { normalize(raw) } else { raw.to_string() };
        if normalize(&text).is_empty() {
            skipped += 1;
            continue;
        }
        let id = match id_col {
            Some(c) => record.get(c).unwrap_or_default().trim().to_string(),
            None => (i + 1).to_string(),
        };
        if id.is_empty() || !ids.insert(id.clone()) {
            return Err(Error::malformed(path, line, id_col.map_or(1, |c| c + 1), format!("bad or duplicate id {id:?}")));
        }
        let sentiment = match sentiment_col {
            Some(c) => {
                let v = record.get(c).unwrap_or_default();
                Some(
                    parse_upstream_sentiment(v)
                        .ok_or_else(|| Error::malformed(path, line, c + 1, format!("unknown sentiment {v:?}")))?,
                )
            }
            None => None,
        };
        let noise = if found == 0 {
            None
        } else {
            let mut flags = [false; NoiseLabel::COUNT];
            for (k, col) in noise_cols.iter().enumerate() {
                let c = col.expect("all noise columns present");
                let v = record.get(c).unwrap_or_default();
                flags[k] = parse_flag(v)
                    .ok_or_else(|| Error::malformed(path, line, c + 1, format!("bad flag {v:?}")))?;
            }
            Some(NoiseLabelSet::from_flags(&flags))
        };
        documents.push(Document {
            id,
            text,
            sentiment,
            noise,
        });
    }
    if skipped > 0 {
        log::warn!("{}: skipped {skipped} rows with empty text", path.display());
    }
    Ok(ImportReport { documents, skipped })
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        csv::ErrorKind::Utf8 { .. } => Error::BadEncoding {
            path: path.to_path_buf(),
            line,
        },
        other => Error::malformed(path, line, 1, format!("{other:?}")),
    }
}

/// Maps ids to documents for alignment checks.
pub fn index_by_id(documents: &[Document]) -> HashMap<&str, &Document> {
    documents.iter().map(|d| (d.id.as_str(), d)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;
    use tempfile::NamedTempFile;

    fn file_with(contents: &[u8]) -> NamedTempFile {
        let mut f = NamedTempFile::new().unwrap();
        f.write_all(contents).unwrap();
        f
    }

    #[test]
    fn header_only_is_empty() {
        let f = file_with(b"id\ttext\tsentiment\tnoise\n");
        assert!(load_corpus(f.path()).unwrap().documents.is_empty());
    }

    #[test]
    fn row_schema_applied() {
        let f = file_with("id\ttext\tsentiment\tnoise\n7\tভালো\tpositive\t0100000000\n".as_bytes());
        let c = load_corpus(f.path()).unwrap();
        let d = &c.documents[0];
        assert_eq!(d.sentiment, Some(SentimentLabel::Positive));
        let labels: Vec<NoiseLabel> = d.noise.unwrap().iter().collect();
        assert_eq!(labels, vec![NoiseLabel::WordMisuse]);
    }

    #[test]
    fn errors_are_located() {
        let cases: [(&[u8], usize, usize); 7] = [
            (b"id\ttext\n", 1, 1),
            (b"id\ttext\tsentiment\tnoise\n1\ta\t-\n", 2, 3),
            (b"id\ttext\tsentiment\tnoise\n1\ta\t-\t-\textra\n", 2, 5),
            (b"id\ttext\tsentiment\tnoise\n1\ta\tglad\t-\n", 2, 3),
            (b"id\ttext\tsentiment\tnoise\n1\ta\t-\t01\n", 2, 4),
            (b"id\ttext\tsentiment\tnoise\n1\ta\t-\t-\n1\tb\t-\t-\n", 3, 1),
            (b"id\ttext\tsentiment\tnoise\n1\t  \t-\t-\n", 2, 2),
        ];
        for (bytes, line, column) in cases {
            let f = file_with(bytes);
            match load_corpus(f.path()) {
                Err(Error::Malformed { line: l, column: c, .. }) => {
                    assert_eq!((l, c), (line, column), "{:?}", String::from_utf8_lossy(bytes))
                }
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn bad_utf8_reports_line() {
        let f = file_with(b"id\ttext\tsentiment\tnoise\n1\ta\t-\t-\n2\t\xff\t-\t-\n");
        assert!(matches!(load_corpus(f.path()), Err(Error::BadEncoding { line: 3, .. })));
    }

    #[test]
    fn tab_is_escaped() {
        let docs = vec![Document::new("1", "a\tb\\c")];
        let s = corpus_to_string(&docs);
        assert_eq!(s, "id\ttext\tsentiment\tnoise\n1\ta\\tb\\\\c\t-\t-\n");
        let f = file_with(s.as_bytes());
        let back = load_corpus_with(f.path(), LoadOptions { normalize: false }).unwrap();
        assert_eq!(back.documents, docs);
    }

    #[test]
    fn empty_corpus_saves_header_only() {
        assert_eq!(corpus_to_string(&[]), "id\ttext\tsentiment\tnoise\n");
    }

    #[test]
    fn resave_is_byte_identical() {
        let src = "id\ttext\tsentiment\tnoise\na\tএকটি বাক্য ।\tneutral\t1000000001\nb\tx\t-\t-\n";
        let f = file_with(src.as_bytes());
        let c = load_corpus(f.path()).unwrap();
        assert_eq!(corpus_to_string(&c.documents), src);
    }

    #[test]
    fn split_from_file_name() {
        assert_eq!(Split::from_path(Path::new("data/train.tsv")), Split::Train);
        assert_eq!(Split::from_path(Path::new("nc_validation.tsv")), Split::Validation);
        assert_eq!(Split::from_path(Path::new("dev.tsv")), Split::Validation);
        assert_eq!(Split::from_path(Path::new("test.tsv")), Split::Test);
        assert_eq!(Split::from_path(Path::new("corpus.tsv")), Split::Unsplit);
    }

    #[test]
    fn dictionary_file() {
        let f = file_with(b"hello\t10\nworld\n\n");
        let d = load_dictionary(f.path(), PhoneticTable::latin_test()).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.freq("hello"), Some(10));
        assert_eq!(d.freq("world"), Some(1));
        let f = file_with(b"hello\tmany\n");
        assert!(matches!(
            load_dictionary(f.path(), PhoneticTable::latin_test()),
            Err(Error::Malformed { line: 1, column: 2, .. })
        ));
    }

    #[test]
    fn embedding_file() {
        let f = file_with(b"2 3\na 1 0 0\nb 0 1 0\n");
        let t = load_embeddings(f.path()).unwrap();
        assert_eq!((t.len(), t.dim()), (2, 3));
        let f = file_with(b"2 3\na 1 0\nb 0 1 0\n");
        assert!(matches!(load_embeddings(f.path()), Err(Error::DimensionMismatch { expected: 3, found: 2 })));
        let f = file_with(b"3 1\na 1\n");
        assert!(matches!(load_embeddings(f.path()), Err(Error::Malformed { .. })));
        let f = file_with(b"1 1\na nan\n");
        assert!(matches!(load_embeddings(f.path()), Err(Error::Malformed { line: 2, column: 2, .. })));
    }

    #[test]
    fn fixture_last_wins() {
        let f = file_with(
            br#"{"task":"translate","src":"bn","tgt":"en","text_in":"a","text_out":"1"}
{"task":"translate","src":"bn","tgt":"en","text_in":"a","text_out":"2"}
"#,
        );
        let mut c = load_fixture(f.path()).unwrap();
        assert_eq!(c.duplicates(), 1);
        use crate::reduce::{Task, TextClient};
        assert_eq!(c.request(Task::Translate, "bn", "en", "a").unwrap(), "2");
    }

    #[test]
    fn rating_matrix_file() {
        let f = file_with(b"yes\tno\n2\t2\n2\t2\n");
        let m = load_rating_matrix(f.path()).unwrap();
        assert_eq!(m.items(), 2);
        let f = file_with(b"yes\tno\n2\t2\n2\tx\n");
        assert!(matches!(load_rating_matrix(f.path()), Err(Error::Malformed { line: 3, column: 2, .. })));
    }

    #[test]
    fn annotations_group_by_item() {
        let f = file_with(b"item\trater\tnoise\n1\tA\t1000000000\n1\tB\t1000000000\n2\tA\t0000000000\n2\tB\t0100000000\n");
        let a = load_annotations(f.path()).unwrap();
        assert_eq!(a.len(), 2);
        assert_eq!(a[1][1], NoiseLabelSet::parse_bitstring("0100000000").unwrap());
    }

    #[test]
    fn upstream_csv_import() {
        let f = file_with(
            "Data,Label\n\"ভালো, খুব ভালো\",1\n\"\",0\nখারাপ,2\n".as_bytes(),
        );
        let r = import_upstream_csv(f.path(), LoadOptions::default()).unwrap();
        assert_eq!(r.skipped, 1);
        assert_eq!(r.documents.len(), 2);
        assert_eq!(r.documents[0].text, "ভালো, খুব ভালো");
        assert_eq!(r.documents[0].id, "1");
        assert_eq!(r.documents[1].sentiment, Some(SentimentLabel::Negative));
        assert_eq!(r.documents[1].noise, None);
    }

    #[test]
    fn upstream_csv_with_noise_columns() {
        let header = "text,sentiment,Local Word,Word Misuse,Context/Word Missing,Wrong Serial,Mixed Language,\
                      Punctuation Error,Spacing Error,Spelling Error,Coined Word,Others";
        let f = file_with(format!("{header}\nx,neutral,1,0,0,0,1,0,0,0,0,0\n").as_bytes());
        let r = import_upstream_csv(f.path(), LoadOptions::default()).unwrap();
        assert_eq!(r.documents[0].noise.unwrap().to_bitstring(), "1000100000");

        let f = file_with(b"text,Local Word\nx,1\n");
        assert!(import_upstream_csv(f.path(), LoadOptions::default()).is_err());
    }
}
