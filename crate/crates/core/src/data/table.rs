//! Delimited-text ingestion.

use std::collections::HashSet;
use std::io::{Read, Write};
use std::path::Path;

use crate::data::item::Value;
use crate::data::Label;
use crate::error::{Error, Result};

/// Tokens treated as a missing cell.
const MISSING: &[&str] = &["", "?", "NA", "N/A", "NaN", "nan", "null", "NULL"];

/// Column roles of an input table.
#[derive(Debug, Clone)]
pub struct Schema {
    /// Prediction score column. Optional only for tables that are split
    /// before any model has scored them.
    pub score_col: Option<String>,
    pub label_col: String,
    /// Columns forced to categorical even if every value parses as a number.
    pub categorical: Vec<String>,
    /// Columns forced to numeric; unparseable values become row errors.
    pub numeric: Vec<String>,
    pub ignore: Vec<String>,
    pub delimiter: u8,
}

impl Schema {
    pub fn new(score_col: impl Into<String>, label_col: impl Into<String>) -> Self {
        Schema {
            score_col: Some(score_col.into()),
            label_col: label_col.into(),
            categorical: Vec::new(),
            numeric: Vec::new(),
            ignore: Vec::new(),
            delimiter: b',',
        }
    }

    pub fn labels_only(label_col: impl Into<String>) -> Self {
        Schema {
            score_col: None,
            ..Schema::new("", label_col)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttributeKind {
    Numeric,
    Categorical,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Column {
    Numeric(Vec<f64>),
    Categorical(Vec<String>),
}

impl Column {
    pub fn kind(&self) -> AttributeKind {
        match self {
            Column::Numeric(_) => AttributeKind::Numeric,
            Column::Categorical(_) => AttributeKind::Categorical,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Column::Numeric(v) => v.len(),
            Column::Categorical(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn value(&self, row: usize) -> Value {
        match self {
            Column::Numeric(v) => Value::Number(v[row]),
            Column::Categorical(v) => Value::Category(v[row].clone()),
        }
    }

    fn select(&self, rows: &[usize]) -> Column {
        match self {
            Column::Numeric(v) => Column::Numeric(rows.iter().map(|&r| v[r]).collect()),
            Column::Categorical(v) => {
                Column::Categorical(rows.iter().map(|&r| v[r].clone()).collect())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Attribute {
    pub name: String,
    pub column: Column,
}

/// Typed rows with all missing-value rows removed.
#[derive(Debug, Clone, PartialEq)]
pub struct RawTable {
    pub attributes: Vec<Attribute>,
    pub scores: Option<Vec<f64>>,
    pub labels: Vec<Label>,
    /// Zero-based data-row index (header excluded) in the source file.
    pub source_rows: Vec<usize>,
    pub score_col: Option<String>,
    pub label_col: String,
}

impl RawTable {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn attribute(&self, name: &str) -> Option<&Attribute> {
        self.attributes.iter().find(|a| a.name == name)
    }

    pub fn select(&self, rows: &[usize]) -> RawTable {
        RawTable {
            attributes: self
                .attributes
                .iter()
                .map(|a| Attribute {
                    name: a.name.clone(),
                    column: a.column.select(rows),
                })
                .collect(),
            scores: self
                .scores
                .as_ref()
                .map(|s| rows.iter().map(|&r| s[r]).collect()),
            labels: rows.iter().map(|&r| self.labels[r]).collect(),
            source_rows: rows.iter().map(|&r| self.source_rows[r]).collect(),
            score_col: self.score_col.clone(),
            label_col: self.label_col.clone(),
        }
    }

    /// Writes the table back as delimited text: attributes, then the score
    /// column (if any), then the label column as -1/1.
    pub fn write_csv<W: Write>(&self, out: W, delimiter: u8) -> Result<()> {
        let mut w = csv::WriterBuilder::new().delimiter(delimiter).from_writer(out);
        let mut header: Vec<&str> = self.attributes.iter().map(|a| a.name.as_str()).collect();
        if let Some(s) = &self.score_col {
            if self.scores.is_some() {
                header.push(s);
            }
        }
        header.push(&self.label_col);
        w.write_record(&header)?;
        for row in 0..self.len() {
            let mut rec: Vec<String> = self
                .attributes
                .iter()
                .map(|a| match &a.column {
                    Column::Numeric(v) => format!("{}", v[row]),
                    Column::Categorical(v) => v[row].clone(),
                })
                .collect();
            if let Some(s) = &self.scores {
                rec.push(format!("{}", s[row]));
            }
            rec.push(self.labels[row].as_i8().to_string());
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn load_table(path: impl AsRef<Path>, schema: &Schema) -> Result<RawTable> {
    let file = std::fs::File::open(path)?;
    read_table(file, schema)
}

fn is_missing(s: &str) -> bool {
    MISSING.contains(&s.trim())
}

pub fn parse_label(s: &str) -> Option<Label> {
    let v: f64 = s.trim().parse().ok()?;
    if v == 1.0 {
        Some(Label::Positive)
    } else if v == -1.0 || v == 0.0 {
        Some(Label::Negative)
    } else {
        None
    }
}

pub fn read_table<R: Read>(input: R, schema: &Schema) -> Result<RawTable> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(schema.delimiter)
        .has_headers(true)
        .from_reader(input);
    let headers: Vec<String> = reader.headers()?.iter().map(|h| h.trim().to_string()).collect();

    let position = |name: &str| headers.iter().position(|h| h == name);
    let label_idx = position(&schema.label_col)
        .ok_or_else(|| Error::Schema(format!("label column '{}' not found", schema.label_col)))?;
    let score_idx = match &schema.score_col {
        Some(name) => Some(
            position(name).ok_or_else(|| Error::Schema(format!("score column '{name}' not found")))?,
        ),
        None => None,
    };
    for name in schema.categorical.iter().chain(&schema.numeric) {
        if position(name).is_none() {
            return Err(Error::Schema(format!("column '{name}' not found")));
        }
    }
    let ignored: HashSet<&str> = schema.ignore.iter().map(String::as_str).collect();
    let attr_idx: Vec<usize> = (0..headers.len())
        .filter(|&i| i != label_idx && Some(i) != score_idx && !ignored.contains(headers[i].as_str()))
        .collect();

    let mut cells: Vec<Vec<String>> = vec![Vec::new(); attr_idx.len()];
    let mut scores = Vec::new();
    let mut labels = Vec::new();
    let mut source_rows = Vec::new();
    let mut dropped = 0usize;

    for (row, record) in reader.records().enumerate() {
        let record = record?;
        let field = |i: usize| record.get(i).unwrap_or("");
        let missing = attr_idx.iter().any(|&i| is_missing(field(i)))
            || is_missing(field(label_idx))
            || score_idx.is_some_and(|i| is_missing(field(i)));
        if missing {
            dropped += 1;
            continue;
        }
        let label = parse_label(field(label_idx)).ok_or_else(|| Error::Row {
            row,
            message: format!("label '{}' is not one of -1, 0, 1", field(label_idx)),
        })?;
        if let Some(i) = score_idx {
            let s: f64 = field(i).trim().parse().map_err(|_| Error::Row {
                row,
                message: format!("score '{}' is not a number", field(i)),
            })?;
            scores.push(s);
        }
        labels.push(label);
        source_rows.push(row);
        for (c, &i) in attr_idx.iter().enumerate() {
            cells[c].push(field(i).trim().to_string());
        }
    }
    if dropped > 0 {
        log::info!("dropped {dropped} rows with missing values");
    }

    let mut attributes = Vec::with_capacity(attr_idx.len());
    for (c, &i) in attr_idx.iter().enumerate() {
        let name = headers[i].clone();
        let values = std::mem::take(&mut cells[c]);
        let forced_cat = schema.categorical.contains(&name);
        let forced_num = schema.numeric.contains(&name);
        let parsed: Option<Vec<f64>> = if forced_cat {
            None
        } else {
            values.iter().map(|v| v.parse::<f64>().ok()).collect()
        };
        let column = match parsed {
            Some(nums) => Column::Numeric(nums),
            None if forced_num => {
                let bad = values.iter().position(|v| v.parse::<f64>().is_err()).unwrap_or(0);
                return Err(Error::Row {
                    row: source_rows[bad],
                    message: format!("column '{name}': '{}' is not a number", values[bad]),
                });
            }
            None => Column::Categorical(values),
        };
        attributes.push(Attribute { name, column });
    }

    Ok(RawTable {
        attributes,
        scores: score_idx.map(|_| scores),
        labels,
        source_rows,
        score_col: schema.score_col.clone(),
        label_col: schema.label_col.clone(),
    })
}
