//! Ingestion, discretization and encoding of scored tabular data.

mod dataset;
pub mod discretize;
mod item;
pub mod table;

pub use dataset::{
    encode, predicted_label, transform_score, Dataset, Instance, Label, Outcome, Partitions,
    ScoreTransform,
};
pub use discretize::{fit_discretization, AttributeRule, DiscretizationOptions, DiscretizationSpec};
pub use item::{Item, ItemValue, ItemVocabulary, Operator, Predicate, Value};
pub use table::{load_table, read_table, RawTable, Schema};
