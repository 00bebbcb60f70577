//! Turning table columns into items: one-hot for categorical attributes,
//! quantile cut points for numeric ones.

use serde::{Deserialize, Serialize};

use crate::data::item::{ItemVocabulary, Operator, Predicate};
use crate::data::table::{Column, RawTable};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscretizationOptions {
    pub bins: usize,
    /// Also emit `attr != value` items for categorical attributes.
    pub not_equal_items: bool,
}

impl Default for DiscretizationOptions {
    fn default() -> Self {
        DiscretizationOptions {
            bins: 4,
            not_equal_items: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum AttributeRule {
    Numeric { name: String, cuts: Vec<f64> },
    Categorical { name: String, categories: Vec<String> },
}

impl AttributeRule {
    pub fn name(&self) -> &str {
        match self {
            AttributeRule::Numeric { name, .. } | AttributeRule::Categorical { name, .. } => name,
        }
    }
}

/// Learned discretization; together with the options it fully determines
/// the item vocabulary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscretizationSpec {
    pub options: DiscretizationOptions,
    pub attributes: Vec<AttributeRule>,
}

impl DiscretizationSpec {
    /// Items in attribute order; per numeric cut `c` ascending, `attr < c`
    /// then `attr >= c`; per category (sorted), `attr = v` then optionally
    /// `attr != v`.
    pub fn vocabulary(&self) -> ItemVocabulary {
        let mut preds = Vec::new();
        for rule in &self.attributes {
            match rule {
                AttributeRule::Numeric { name, cuts } => {
                    for &c in cuts {
                        preds.push(Predicate::numeric(name, Operator::Lt, c));
                        preds.push(Predicate::numeric(name, Operator::Ge, c));
                    }
                }
                AttributeRule::Categorical { name, categories } => {
                    for v in categories {
                        preds.push(Predicate::categorical(name, Operator::Eq, v));
                        if self.options.not_equal_items {
                            preds.push(Predicate::categorical(name, Operator::Ne, v));
                        }
                    }
                }
            }
        }
        ItemVocabulary::from_predicates(preds)
    }
}

/// Empirical quantile with linear interpolation between order statistics
/// (`sorted` must be ascending and non-empty).
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    let h = (n - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    sorted[lo] + (sorted[hi] - sorted[lo]) * (h - lo as f64)
}

/// Interior cut points at probabilities `1/bins, ..., (bins-1)/bins`,
/// duplicates collapsed. Cuts not above the minimum are dropped since
/// `attr < min` can never hold.
pub fn quantile_cuts(values: &[f64], bins: usize) -> Vec<f64> {
    if values.is_empty() || bins < 2 {
        return Vec::new();
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let min = sorted[0];
    let mut cuts: Vec<f64> = (1..bins)
        .map(|j| quantile(&sorted, j as f64 / bins as f64))
        .filter(|&c| c > min)
        .collect();
    cuts.dedup();
    cuts
}

pub fn fit_discretization(
    table: &RawTable,
    options: DiscretizationOptions,
) -> Result<(DiscretizationSpec, ItemVocabulary)> {
    if table.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if options.bins < 1 {
        return Err(Error::InvalidArgument("bins must be at least 1".into()));
    }
    let attributes = table
        .attributes
        .iter()
        .map(|a| match &a.column {
            Column::Numeric(v) => {
                let cuts = quantile_cuts(v, options.bins);
                if cuts.is_empty() {
                    log::warn!("attribute '{}' is constant; it yields no items", a.name);
                }
                AttributeRule::Numeric {
                    name: a.name.clone(),
                    cuts,
                }
            }
            Column::Categorical(v) => {
                let mut categories = v.clone();
                categories.sort();
                categories.dedup();
                AttributeRule::Categorical {
                    name: a.name.clone(),
                    categories,
                }
            }
        })
        .collect();
    let spec = DiscretizationSpec {
        options,
        attributes,
    };
    let vocab = spec.vocabulary();
    Ok((spec, vocab))
}
