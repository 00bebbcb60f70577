use serde::{Deserialize, Serialize};

use crate::data::discretize::{AttributeRule, DiscretizationSpec};
use crate::data::item::{ItemVocabulary, Value};
use crate::data::table::RawTable;
use crate::error::{Error, Result};
use crate::itemset::{ItemBits, ItemId, Itemset};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    Negative,
    Positive,
}

impl Label {
    pub fn as_i8(self) -> i8 {
        match self {
            Label::Negative => -1,
            Label::Positive => 1,
        }
    }

    pub fn from_i8(v: i8) -> Option<Label> {
        match v {
            -1 | 0 => Some(Label::Negative),
            1 => Some(Label::Positive),
            _ => None,
        }
    }

    pub fn flipped(self) -> Label {
        match self {
            Label::Negative => Label::Positive,
            Label::Positive => Label::Negative,
        }
    }
}

/// `ℓ(s)`: positive iff `s > 0`, so a zero score predicts the negative class.
#[inline]
pub fn predicted_label<T: Scalar>(score: T) -> Label {
    if score > T::zero() {
        Label::Positive
    } else {
        Label::Negative
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScoreTransform {
    #[default]
    Identity,
    Tanh,
}

/// Largest magnitude a transformed score may take.
const SCORE_LIMIT: f64 = 1.0 - 1e-12;

/// Maps a raw model score into `(-1, 1)`.
pub fn transform_score(raw: f64, mode: ScoreTransform) -> Result<f64> {
    match mode {
        ScoreTransform::Identity => {
            if raw.is_nan() || raw.abs() >= 1.0 {
                Err(Error::ScoreRange(raw))
            } else {
                Ok(raw)
            }
        }
        ScoreTransform::Tanh => {
            if raw.is_nan() {
                return Err(Error::ScoreRange(raw));
            }
            Ok(raw.tanh().clamp(-SCORE_LIMIT, SCORE_LIMIT))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    TruePositive,
    FalsePositive,
    TrueNegative,
    FalseNegative,
}

impl Outcome {
    pub fn of<T: Scalar>(score: T, label: Label) -> Outcome {
        match (predicted_label(score), label) {
            (Label::Positive, Label::Positive) => Outcome::TruePositive,
            (Label::Positive, Label::Negative) => Outcome::FalsePositive,
            (Label::Negative, Label::Negative) => Outcome::TrueNegative,
            (Label::Negative, Label::Positive) => Outcome::FalseNegative,
        }
    }

    pub fn is_correct(self) -> bool {
        matches!(self, Outcome::TruePositive | Outcome::TrueNegative)
    }
}

/// One prediction: itemset `t`, score `s`, true label `c`.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance<T> {
    pub items: ItemBits,
    pub score: T,
    pub label: Label,
}

impl<T: Scalar> Instance<T> {
    pub fn new(items: ItemBits, score: T, label: Label) -> Self {
        Instance { items, score, label }
    }

    pub fn outcome(&self) -> Outcome {
        Outcome::of(self.score, self.label)
    }
}

/// Instance indices split by prediction outcome.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Partitions {
    pub true_positive: Vec<usize>,
    pub false_positive: Vec<usize>,
    pub true_negative: Vec<usize>,
    pub false_negative: Vec<usize>,
}

impl Partitions {
    pub fn get(&self, outcome: Outcome) -> &[usize] {
        match outcome {
            Outcome::TruePositive => &self.true_positive,
            Outcome::FalsePositive => &self.false_positive,
            Outcome::TrueNegative => &self.true_negative,
            Outcome::FalseNegative => &self.false_negative,
        }
    }

    pub fn total(&self) -> usize {
        self.true_positive.len()
            + self.false_positive.len()
            + self.true_negative.len()
            + self.false_negative.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset<T> {
    n_items: usize,
    instances: Vec<Instance<T>>,
    partitions: Partitions,
}

impl<T: Scalar> Dataset<T> {
    pub fn new(n_items: usize, instances: Vec<Instance<T>>) -> Self {
        let mut partitions = Partitions::default();
        for (i, inst) in instances.iter().enumerate() {
            match inst.outcome() {
                Outcome::TruePositive => partitions.true_positive.push(i),
                Outcome::FalsePositive => partitions.false_positive.push(i),
                Outcome::TrueNegative => partitions.true_negative.push(i),
                Outcome::FalseNegative => partitions.false_negative.push(i),
            }
        }
        Dataset {
            n_items,
            instances,
            partitions,
        }
    }

    /// Convenience constructor from `(items, score, label)` triples.
    pub fn from_triples(
        n_items: usize,
        rows: impl IntoIterator<Item = (Vec<ItemId>, T, Label)>,
    ) -> Self {
        let instances = rows
            .into_iter()
            .map(|(items, s, c)| Instance::new(ItemBits::from_items(n_items, items), s, c))
            .collect();
        Dataset::new(n_items, instances)
    }

    pub fn n_items(&self) -> usize {
        self.n_items
    }

    pub fn instances(&self) -> &[Instance<T>] {
        &self.instances
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn partitions(&self) -> &Partitions {
        &self.partitions
    }

    pub fn subset(&self, indices: &[usize]) -> Dataset<T> {
        Dataset::new(
            self.n_items,
            indices.iter().map(|&i| self.instances[i].clone()).collect(),
        )
    }

    /// Same instances with replaced scores (e.g. after a correction model).
    pub fn with_scores(&self, scores: &[T]) -> Dataset<T> {
        assert_eq!(scores.len(), self.len());
        Dataset::new(
            self.n_items,
            self.instances
                .iter()
                .zip(scores)
                .map(|(inst, &s)| Instance::new(inst.items.clone(), s, inst.label))
                .collect(),
        )
    }

    /// `D(X)`: indices of instances whose itemset contains `X`.
    pub fn hits(&self, itemset: &Itemset) -> Vec<usize> {
        self.instances
            .iter()
            .enumerate()
            .filter(|(_, inst)| inst.items.contains_all(itemset))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn scores(&self) -> Vec<T> {
        self.instances.iter().map(|i| i.score).collect()
    }
}

/// Encodes each row of `table` as an instance over `vocab`.
pub fn encode<T: Scalar>(
    table: &RawTable,
    spec: &DiscretizationSpec,
    vocab: &ItemVocabulary,
    transform: ScoreTransform,
) -> Result<Dataset<T>> {
    let scores = table
        .scores
        .as_ref()
        .ok_or_else(|| Error::Schema("table has no score column".into()))?;

    // Column index and known categories per item.
    struct Binding<'a> {
        item: ItemId,
        column: usize,
        known: Option<&'a [String]>,
    }
    let mut bindings = Vec::with_capacity(vocab.len());
    for item in vocab.items() {
        let attr = &item.predicate.attribute;
        let column = table
            .attributes
            .iter()
            .position(|a| &a.name == attr)
            .ok_or_else(|| Error::Schema(format!("attribute '{attr}' missing from table")))?;
        let known = spec.attributes.iter().find_map(|r| match r {
            AttributeRule::Categorical { name, categories } if name == attr => {
                Some(categories.as_slice())
            }
            _ => None,
        });
        bindings.push(Binding {
            item: item.id,
            column,
            known,
        });
    }

    let mut unseen = 0usize;
    let mut instances = Vec::with_capacity(table.len());
    for row in 0..table.len() {
        let mut bits = ItemBits::with_capacity(vocab.len());
        for b in &bindings {
            let cell = table.attributes[b.column].column.value(row);
            if let (Some(known), Value::Category(v)) = (b.known, &cell) {
                if known.binary_search(v).is_err() {
                    unseen += 1;
                    continue;
                }
            }
            if vocab.items()[b.item as usize].predicate.matches(&cell) {
                bits.insert(b.item);
            }
        }
        let s = transform_score(scores[row], transform).map_err(|e| Error::Row {
            row: table.source_rows[row],
            message: e.to_string(),
        })?;
        instances.push(Instance::new(bits, T::lit(s), table.labels[row]));
    }
    if unseen > 0 {
        log::warn!("{unseen} item evaluations skipped for categories unseen at fit time");
    }
    Ok(Dataset::new(vocab.len(), instances))
}
