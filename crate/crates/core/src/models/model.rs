use serde::{Deserialize, Serialize};

use crate::data::{Dataset, Instance};
use crate::error::{Error, Result};
use crate::itemset::ItemBits;
use crate::rules::CorrectionRule;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelKind {
    /// Correction rule list.
    #[serde(rename = "crl")]
    List,
    /// Correction rule set.
    #[serde(rename = "crs")]
    Set,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::List => "crl",
            ModelKind::Set => "crs",
        }
    }
}

impl std::str::FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "crl" | "list" => Ok(ModelKind::List),
            "crs" | "set" => Ok(ModelKind::Set),
            _ => Err(Error::InvalidArgument(format!("unknown model kind {s:?} (expected crl or crs)"))),
        }
    }
}

fn same_rule<T: Scalar>(a: &CorrectionRule<T>, b: &CorrectionRule<T>) -> bool {
    a.itemset == b.itemset && a.delta == b.delta
}

fn check_unique<T: Scalar>(rules: &[CorrectionRule<T>]) -> Result<()> {
    for (i, r) in rules.iter().enumerate() {
        if rules[..i].iter().any(|q| same_rule(q, r)) {
            return Err(Error::InvalidArgument(format!(
                "duplicate rule {} -> {}",
                r.itemset, r.delta
            )));
        }
    }
    Ok(())
}

/// Ordered rules; the first rule whose itemset is contained in the
/// instance adds its correction.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CorrectionRuleList<T> {
    rules: Vec<CorrectionRule<T>>,
}

impl<T: Scalar> CorrectionRuleList<T> {
    pub fn new(rules: Vec<CorrectionRule<T>>) -> Result<Self> {
        check_unique(&rules)?;
        Ok(CorrectionRuleList { rules })
    }

    pub fn rules(&self) -> &[CorrectionRule<T>] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Index of the first matching rule.
    pub fn first_match(&self, items: &ItemBits) -> Option<usize> {
        self.rules.iter().position(|r| r.matches(items))
    }

    pub fn apply(&self, items: &ItemBits, score: T) -> T {
        match self.first_match(items) {
            Some(i) => score + self.rules[i].delta,
            None => score,
        }
    }
}

/// Unordered rules; all matching corrections are averaged.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CorrectionRuleSet<T> {
    rules: Vec<CorrectionRule<T>>,
}

impl<T: Scalar> CorrectionRuleSet<T> {
    pub fn new(rules: Vec<CorrectionRule<T>>) -> Result<Self> {
        check_unique(&rules)?;
        Ok(CorrectionRuleSet { rules })
    }

    pub fn rules(&self) -> &[CorrectionRule<T>] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn apply(&self, items: &ItemBits, score: T) -> T {
        let mut deltas: Vec<T> = self.rules.iter().filter(|r| r.matches(items)).map(|r| r.delta).collect();
        if deltas.is_empty() {
            return score;
        }
        // summing in sorted order makes the result independent of rule order
        deltas.sort_by(|a, b| a.partial_cmp(b).expect("finite deltas"));
        let n = T::from_count(deltas.len());
        score + deltas.into_iter().fold(T::zero(), |acc, d| acc + d) / n
    }
}

pub fn crl_apply<T: Scalar>(list: &CorrectionRuleList<T>, instance: &Instance<T>) -> T {
    list.apply(&instance.items, instance.score)
}

pub fn crs_apply<T: Scalar>(set: &CorrectionRuleSet<T>, instance: &Instance<T>) -> T {
    set.apply(&instance.items, instance.score)
}

#[derive(Debug, Clone, PartialEq)]
pub enum CorrectionModel<T> {
    List(CorrectionRuleList<T>),
    Set(CorrectionRuleSet<T>),
}

impl<T: Scalar> CorrectionModel<T> {
    pub fn new(kind: ModelKind, rules: Vec<CorrectionRule<T>>) -> Result<Self> {
        Ok(match kind {
            ModelKind::List => CorrectionModel::List(CorrectionRuleList::new(rules)?),
            ModelKind::Set => CorrectionModel::Set(CorrectionRuleSet::new(rules)?),
        })
    }

    pub fn kind(&self) -> ModelKind {
        match self {
            CorrectionModel::List(_) => ModelKind::List,
            CorrectionModel::Set(_) => ModelKind::Set,
        }
    }

    pub fn rules(&self) -> &[CorrectionRule<T>] {
        match self {
            CorrectionModel::List(l) => l.rules(),
            CorrectionModel::Set(s) => s.rules(),
        }
    }

    pub fn apply(&self, instance: &Instance<T>) -> T {
        match self {
            CorrectionModel::List(l) => crl_apply(l, instance),
            CorrectionModel::Set(s) => crs_apply(s, instance),
        }
    }

    /// Corrected score of every instance.
    pub fn apply_dataset(&self, dataset: &Dataset<T>) -> Vec<T> {
        dataset.instances().iter().map(|inst| self.apply(inst)).collect()
    }
}
