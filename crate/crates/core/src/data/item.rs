use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::itemset::{ItemId, Itemset};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Operator {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "!=")]
    Ne,
}

impl Operator {
    pub fn symbol(self) -> &'static str {
        match self {
            Operator::Lt => "<",
            Operator::Ge => ">=",
            Operator::Eq => "=",
            Operator::Ne => "!=",
        }
    }

    pub fn parse(s: &str) -> Option<Operator> {
        match s {
            "<" => Some(Operator::Lt),
            ">=" | "≥" => Some(Operator::Ge),
            "=" => Some(Operator::Eq),
            "!=" | "≠" => Some(Operator::Ne),
            _ => None,
        }
    }

    pub fn is_numeric(self) -> bool {
        matches!(self, Operator::Lt | Operator::Ge)
    }
}

/// Right-hand side of a predicate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ItemValue {
    Number(f64),
    Category(String),
}

impl fmt::Display for ItemValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ItemValue::Number(v) => write!(f, "{v}"),
            ItemValue::Category(c) => write!(f, "{c}"),
        }
    }
}

/// A typed cell of the raw table.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Number(f64),
    Category(String),
}

/// `attribute op value`, e.g. `age < 30`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Predicate {
    #[serde(rename = "attr")]
    pub attribute: String,
    pub op: Operator,
    pub value: ItemValue,
}

impl Predicate {
    pub fn numeric(attribute: impl Into<String>, op: Operator, value: f64) -> Self {
        debug_assert!(op.is_numeric());
        Predicate {
            attribute: attribute.into(),
            op,
            value: ItemValue::Number(value),
        }
    }

    pub fn categorical(attribute: impl Into<String>, op: Operator, value: impl Into<String>) -> Self {
        debug_assert!(!op.is_numeric());
        Predicate {
            attribute: attribute.into(),
            op,
            value: ItemValue::Category(value.into()),
        }
    }

    /// Whether a cell of this predicate's attribute satisfies it. Type
    /// mismatches never match.
    pub fn matches(&self, cell: &Value) -> bool {
        match (self.op, &self.value, cell) {
            (Operator::Lt, ItemValue::Number(c), Value::Number(v)) => v < c,
            (Operator::Ge, ItemValue::Number(c), Value::Number(v)) => v >= c,
            (Operator::Eq, ItemValue::Category(c), Value::Category(v)) => v == c,
            (Operator::Ne, ItemValue::Category(c), Value::Category(v)) => v != c,
            _ => false,
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.attribute, self.op.symbol(), self.value)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Item {
    pub id: ItemId,
    #[serde(flatten)]
    pub predicate: Predicate,
}

/// The item universe, ids contiguous from zero.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ItemVocabulary {
    items: Vec<Item>,
}

impl ItemVocabulary {
    pub fn from_predicates(predicates: impl IntoIterator<Item = Predicate>) -> Self {
        let items = predicates
            .into_iter()
            .enumerate()
            .map(|(i, predicate)| Item {
                id: i as ItemId,
                predicate,
            })
            .collect();
        ItemVocabulary { items }
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn get(&self, id: ItemId) -> Option<&Item> {
        self.items.get(id as usize)
    }

    pub fn find(&self, predicate: &Predicate) -> Option<ItemId> {
        self.items
            .iter()
            .find(|it| &it.predicate == predicate)
            .map(|it| it.id)
    }

    /// Content digest of the item list (hex SHA-256). Two vocabularies with
    /// the same items in the same order share a fingerprint.
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        for item in &self.items {
            let line = serde_json::to_string(&item.predicate).expect("predicate serializes");
            hasher.update(line.as_bytes());
            hasher.update(b"\n");
        }
        hex::encode(hasher.finalize())
    }

    pub fn describe(&self, itemset: &Itemset) -> String {
        itemset
            .items()
            .iter()
            .map(|&id| match self.get(id) {
                Some(item) => item.predicate.to_string(),
                None => format!("#{id}"),
            })
            .collect::<Vec<_>>()
            .join(" AND ")
    }
}
