//! Fleiss' kappa and control-sample screening of annotators.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::{NoiseLabel, NoiseLabelSet};

/// Items by categories; each cell counts the raters who chose that
/// category for that item.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatingMatrix {
    categories: Vec<String>,
    rows: Vec<Vec<u32>>,
    raters: u32,
}

impl RatingMatrix {
    /// Validates that every row has one count per category, all rows sum to
    /// the same rater count `n ≥ 2`, and there are at least two items.
    pub fn new(categories: Vec<String>, rows: Vec<Vec<u32>>) -> Result<Self> {
        if categories.is_empty() {
            return Err(Error::MalformedMatrix("no categories".into()));
        }
        if rows.len() < 2 {
            return Err(Error::MalformedMatrix(format!("need at least 2 items, found {}", rows.len())));
        }
        let mut raters = None;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != categories.len() {
                return Err(Error::MalformedMatrix(format!(
                    "item {i} has {} counts for {} categories",
                    row.len(),
                    categories.len()
                )));
            }
            let sum: u32 = row.iter().sum();
            match raters {
                None => raters = Some(sum),
                Some(n) if n != sum => {
                    return Err(Error::MalformedMatrix(format!(
                        "item {i} has {sum} ratings, expected {n}"
                    )))
                }
                Some(_) => {}
            }
        }
        let raters = raters.unwrap_or(0);
        if raters < 2 {
            return Err(Error::MalformedMatrix(format!("need at least 2 raters per item, found {raters}")));
        }
        Ok(RatingMatrix {
            categories,
            rows,
            raters,
        })
    }

    /// Categories named by their index.
    pub fn from_rows(rows: Vec<Vec<u32>>) -> Result<Self> {
        let k = rows.first().map_or(0, Vec::len);
        RatingMatrix::new((0..k).map(|j| j.to_string()).collect(), rows)
    }

    pub fn categories(&self) -> &[String] {
        &self.categories
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn raters(&self) -> u32 {
        self.raters
    }

    pub fn items(&self) -> usize {
        self.rows.len()
    }
}

pub fn fleiss_kappa(m: &RatingMatrix) -> f64 {
    let n = m.raters as f64;
    let items = m.rows.len() as f64;
    let mut totals = vec![0.0; m.categories.len()];
    let mut p_bar = 0.0;
    for row in &m.rows {
        let sq: f64 = row.iter().map(|&c| (c as f64) * (c as f64)).sum();
        p_bar += (sq - n) / (n * (n - 1.0));
        for (t, &c) in totals.iter_mut().zip(row) {
            *t += c as f64;
        }
    }
    p_bar /= items;
    let p_e: f64 = totals.iter().map(|t| (t / (items * n)).powi(2)).sum();
    if (1.0 - p_e).abs() < 1e-15 {
        // Every rating falls in one category: agreement is perfect.
        return 1.0;
    }
    (p_bar - p_e) / (1.0 - p_e)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrustMode {
    /// Credit only when the label sets are identical.
    #[default]
    Exact,
    /// Credit equal to the Jaccard index of the label sets; two empty sets
    /// score 1.
    Jaccard,
}

pub const DEFAULT_TRUST_THRESHOLD: f64 = 90.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrustScore {
    pub score: f64,
    pub pass: bool,
}

fn jaccard(a: NoiseLabelSet, b: NoiseLabelSet) -> f64 {
    let union = a.union(b).len();
    if union == 0 {
        1.0
    } else {
        a.intersection(b).len() as f64 / union as f64
    }
}

/// Percentage of control items the annotator labelled correctly; passes
/// at or above `threshold`.
pub fn trustworthiness(
    annotator: &[NoiseLabelSet],
    gold: &[NoiseLabelSet],
    threshold: f64,
    mode: TrustMode,
) -> Result<TrustScore> {
    if annotator.len() != gold.len() {
        return Err(Error::LengthMismatch {
            expected: gold.len(),
            found: annotator.len(),
        });
    }
    if gold.is_empty() {
        return Err(Error::EmptyInput);
    }
    let credit: f64 = annotator
        .iter()
        .zip(gold)
        .map(|(&a, &g)| match mode {
            TrustMode::Exact => f64::from(u8::from(a == g)),
            TrustMode::Jaccard => jaccard(a, g),
        })
        .sum();
    let score = 100.0 * credit / gold.len() as f64;
    Ok(TrustScore {
        score,
        pass: score >= threshold,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryKappa {
    pub label: String,
    /// `None` when the label's binary matrix is invalid (fewer than two
    /// items).
    pub kappa: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelKappaReport {
    pub items: usize,
    pub raters: usize,
    pub per_category: Vec<CategoryKappa>,
    /// Kappa over all item/category binary decisions pooled into one
    /// matrix.
    pub pooled: f64,
}

/// Kappa from multi-label annotations: `annotations[item][rater]`. Each
/// noise category becomes a present/absent rating matrix; the pooled
/// matrix stacks all of them.
pub fn label_set_kappa(annotations: &[Vec<NoiseLabelSet>]) -> Result<LabelKappaReport> {
    let raters = annotations.first().map_or(0, Vec::len);
    if let Some((i, row)) = annotations.iter().enumerate().find(|(_, r)| r.len() != raters) {
        return Err(Error::MalformedMatrix(format!(
            "item {i} has {} annotations, expected {raters}",
            row.len()
        )));
    }
    let names = || ["absent".to_string(), "present".to_string()].to_vec();
    let mut pooled_rows = Vec::with_capacity(annotations.len() * NoiseLabel::COUNT);
    let mut per_category = Vec::with_capacity(NoiseLabel::COUNT);
    for label in NoiseLabel::ALL {
        let rows: Vec<Vec<u32>> = annotations
            .iter()
            .map(|item| {
                let yes = item.iter().filter(|s| s.contains(label)).count() as u32;
                vec![raters as u32 - yes, yes]
            })
            .collect();
        pooled_rows.extend(rows.iter().cloned());
        let kappa = RatingMatrix::new(names(), rows).ok().map(|m| fleiss_kappa(&m));
        per_category.push(CategoryKappa {
            label: label.name().to_string(),
            kappa,
        });
    }
    let pooled = fleiss_kappa(&RatingMatrix::new(names(), pooled_rows)?);
    Ok(LabelKappaReport {
        items: annotations.len(),
        raters,
        per_category,
        pooled,
    })
}
