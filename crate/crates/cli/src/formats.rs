//! On-disk formats. Every file carries the fingerprint of the item
//! vocabulary it was written against; readers refuse a mismatch.
//!
//! * vocabulary: one JSON document (`VocabFile`)
//! * dataset: JSONL, a header line then one `{"items","score","label"}` per instance
//! * rules / model: JSONL, a header line then one rule per line

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use corrules_core::data::{
    DiscretizationSpec, Instance, ItemVocabulary, Label, Predicate, ScoreTransform,
};
use corrules_core::models::ModelKind;
use corrules_core::rules::{CorrectionRule, Direction, RuleStats};
use corrules_core::{Dataset64, ItemBits, Itemset};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

pub const DATASET_FORMAT: &str = "corrules-dataset/1";
pub const RULES_FORMAT: &str = "corrules-rules/1";
pub const MODEL_FORMAT: &str = "corrules-model/1";

/// Writes through a temporary file in the target directory, renamed into
/// place once complete.
pub fn write_atomic(path: &Path, fill: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let tmp = tempfile::NamedTempFile::new_in(&dir)
        .with_context(|| format!("cannot create a temporary file in {}", dir.display()))?;
    {
        let mut w = BufWriter::new(tmp.as_file());
        fill(&mut w)?;
        w.flush()?;
    }
    tmp.persist(path)
        .with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

pub fn write_json<V: Serialize>(path: &Path, value: &V) -> Result<()> {
    write_atomic(path, |w| {
        serde_json::to_writer_pretty(&mut *w, value)?;
        w.write_all(b"\n")?;
        Ok(())
    })
}

pub fn read_json<V: DeserializeOwned>(path: &Path) -> Result<V> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    serde_json::from_reader(BufReader::new(file)).with_context(|| format!("malformed JSON in {}", path.display()))
}

fn json_line<V: Serialize>(w: &mut dyn Write, value: &V) -> Result<()> {
    serde_json::to_writer(&mut *w, value)?;
    w.write_all(b"\n")?;
    Ok(())
}

/// Non-empty lines of a JSONL file, with 1-based line numbers.
fn jsonl_lines(path: &Path) -> Result<Vec<(usize, String)>> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.with_context(|| format!("cannot read {}", path.display()))?;
        if !line.trim().is_empty() {
            out.push((i + 1, line));
        }
    }
    Ok(out)
}

fn parse_line<V: DeserializeOwned>(path: &Path, line_no: usize, line: &str) -> Result<V> {
    serde_json::from_str(line).with_context(|| format!("{}:{line_no}: malformed record", path.display()))
}

pub fn vocabulary_mismatch(what: &Path, found: &str, expected: &str) -> anyhow::Error {
    anyhow!(
        "vocabulary mismatch: {} was written for vocabulary {} but the vocabulary in use is {}",
        what.display(),
        short(found),
        short(expected)
    )
}

fn short(fp: &str) -> &str {
    &fp[..fp.len().min(12)]
}

// ---------------------------------------------------------------- vocabulary

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VocabFile {
    pub fingerprint: String,
    #[serde(default)]
    pub transform: ScoreTransform,
    /// Absent for vocabularies that were not fitted on a table.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<DiscretizationSpec>,
    pub items: Vec<corrules_core::data::Item>,
}

/// A loaded, checked vocabulary.
#[derive(Debug, Clone)]
pub struct Vocab {
    pub vocabulary: ItemVocabulary,
    pub fingerprint: String,
    pub transform: ScoreTransform,
    pub spec: Option<DiscretizationSpec>,
}

impl Vocab {
    pub fn new(vocabulary: ItemVocabulary, spec: Option<DiscretizationSpec>, transform: ScoreTransform) -> Vocab {
        Vocab {
            fingerprint: vocabulary.fingerprint(),
            vocabulary,
            transform,
            spec,
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let file = VocabFile {
            fingerprint: self.fingerprint.clone(),
            transform: self.transform,
            spec: self.spec.clone(),
            items: self.vocabulary.items().to_vec(),
        };
        write_json(path, &file)
    }

    pub fn read(path: &Path) -> Result<Vocab> {
        let file: VocabFile = read_json(path)?;
        for (i, item) in file.items.iter().enumerate() {
            if item.id as usize != i {
                bail!("{}: item ids must be 0..n in order (found {} at position {i})", path.display(), item.id);
            }
        }
        let vocabulary = ItemVocabulary::from_predicates(file.items.into_iter().map(|it| it.predicate));
        let fingerprint = vocabulary.fingerprint();
        if fingerprint != file.fingerprint {
            bail!("{}: stored fingerprint does not match its items", path.display());
        }
        if let Some(spec) = &file.spec {
            if spec.vocabulary() != vocabulary {
                bail!("{}: items do not match the stored discretization", path.display());
            }
        }
        Ok(Vocab {
            vocabulary,
            fingerprint,
            transform: file.transform,
            spec: file.spec,
        })
    }

    fn check(&self, path: &Path, found: &str) -> Result<()> {
        if found != self.fingerprint {
            return Err(vocabulary_mismatch(path, found, &self.fingerprint));
        }
        Ok(())
    }

    fn predicate(&self, id: u32) -> Predicate {
        self.vocabulary.get(id).expect("item id within vocabulary").predicate.clone()
    }
}

// ------------------------------------------------------------------- dataset

#[derive(Debug, Serialize, Deserialize)]
struct DatasetHeader {
    format: String,
    vocabulary: String,
    n_items: usize,
    n_instances: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct InstanceRecord {
    items: Vec<u32>,
    score: f64,
    label: i8,
}

pub fn write_dataset(path: &Path, dataset: &Dataset64, vocab: &Vocab) -> Result<()> {
    write_atomic(path, |w| {
        json_line(
            w,
            &DatasetHeader {
                format: DATASET_FORMAT.into(),
                vocabulary: vocab.fingerprint.clone(),
                n_items: dataset.n_items(),
                n_instances: dataset.len(),
            },
        )?;
        for inst in dataset.instances() {
            json_line(
                w,
                &InstanceRecord {
                    items: inst.items.iter().collect(),
                    score: inst.score,
                    label: inst.label.as_i8(),
                },
            )?;
        }
        Ok(())
    })
}

pub fn read_dataset(path: &Path, vocab: &Vocab) -> Result<Dataset64> {
    let lines = jsonl_lines(path)?;
    let Some(((_, head), body)) = lines.split_first() else {
        bail!("{}: empty file", path.display());
    };
    let header: DatasetHeader = parse_line(path, 1, head)?;
    if header.format != DATASET_FORMAT {
        bail!("{}: not a dataset file (format {:?})", path.display(), header.format);
    }
    vocab.check(path, &header.vocabulary)?;
    let n_items = vocab.vocabulary.len();
    if header.n_items != n_items {
        bail!("{}: header declares {} items, vocabulary has {n_items}", path.display(), header.n_items);
    }
    if header.n_instances != body.len() {
        bail!("{}: header declares {} instances, file has {}", path.display(), header.n_instances, body.len());
    }
    let mut instances = Vec::with_capacity(body.len());
    for (line_no, line) in body {
        let rec: InstanceRecord = parse_line(path, *line_no, line)?;
        if let Some(&bad) = rec.items.iter().find(|&&x| x as usize >= n_items) {
            bail!("{}:{line_no}: item id {bad} outside the vocabulary", path.display());
        }
        if !(rec.score > -1.0 && rec.score < 1.0) {
            bail!("{}:{line_no}: score {} outside (-1, 1)", path.display(), rec.score);
        }
        let label = match rec.label {
            1 => Label::Positive,
            -1 => Label::Negative,
            other => bail!("{}:{line_no}: label {other} is not -1 or 1", path.display()),
        };
        instances.push(Instance::new(ItemBits::from_items(n_items, rec.items), rec.score, label));
    }
    Ok(Dataset64::new(n_items, instances))
}

// --------------------------------------------------------------------- rules

#[derive(Debug, Serialize, Deserialize)]
struct RulesHeader {
    format: String,
    vocabulary: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    kind: Option<ModelKind>,
}

#[derive(Debug, Serialize, Deserialize)]
struct RuleRecord {
    items: Vec<Predicate>,
    delta: f64,
    direction: Direction,
    support: f64,
    confidence: f64,
    n_true_changed: usize,
    n_false_changed: usize,
}

/// Rules read from a rules or model file.
#[derive(Debug, Clone)]
pub struct RuleFile {
    pub rules: Vec<CorrectionRule<f64>>,
    /// Set for model files.
    pub kind: Option<ModelKind>,
}

fn write_rule_lines(path: &Path, rules: &[CorrectionRule<f64>], vocab: &Vocab, header: RulesHeader) -> Result<()> {
    write_atomic(path, |w| {
        json_line(w, &header)?;
        for r in rules {
            json_line(
                w,
                &RuleRecord {
                    items: r.itemset.items().iter().map(|&x| vocab.predicate(x)).collect(),
                    delta: r.delta,
                    direction: r.direction,
                    support: r.stats.support,
                    confidence: r.stats.confidence,
                    n_true_changed: r.stats.n_true_changed,
                    n_false_changed: r.stats.n_false_changed,
                },
            )?;
        }
        Ok(())
    })
}

pub fn write_rules(path: &Path, rules: &[CorrectionRule<f64>], vocab: &Vocab) -> Result<()> {
    let header = RulesHeader {
        format: RULES_FORMAT.into(),
        vocabulary: vocab.fingerprint.clone(),
        kind: None,
    };
    write_rule_lines(path, rules, vocab, header)
}

pub fn write_model(path: &Path, kind: ModelKind, rules: &[CorrectionRule<f64>], vocab: &Vocab) -> Result<()> {
    let header = RulesHeader {
        format: MODEL_FORMAT.into(),
        vocabulary: vocab.fingerprint.clone(),
        kind: Some(kind),
    };
    write_rule_lines(path, rules, vocab, header)
}

/// Reads a rules file or a model file.
pub fn read_rules(path: &Path, vocab: &Vocab) -> Result<RuleFile> {
    let lines = jsonl_lines(path)?;
    let Some(((_, head), body)) = lines.split_first() else {
        bail!("{}: empty file", path.display());
    };
    let header: RulesHeader = parse_line(path, 1, head)?;
    match header.format.as_str() {
        RULES_FORMAT => {}
        MODEL_FORMAT if header.kind.is_some() => {}
        MODEL_FORMAT => bail!("{}: model file without a model kind", path.display()),
        other => bail!("{}: not a rules or model file (format {other:?})", path.display()),
    }
    vocab.check(path, &header.vocabulary)?;
    let mut rules = Vec::with_capacity(body.len());
    for (line_no, line) in body {
        let rec: RuleRecord = parse_line(path, *line_no, line)?;
        let mut ids = Vec::with_capacity(rec.items.len());
        for p in &rec.items {
            let id = vocab
                .vocabulary
                .find(p)
                .ok_or_else(|| anyhow!("{}:{line_no}: item `{p}` is not in the vocabulary", path.display()))?;
            ids.push(id);
        }
        if !(-1.0..=1.0).contains(&rec.delta) {
            bail!("{}:{line_no}: delta {} outside [-1, 1]", path.display(), rec.delta);
        }
        if rec.delta != 0.0 && Direction::of(rec.delta) != Some(rec.direction) {
            bail!("{}:{line_no}: delta {} disagrees with direction {}", path.display(), rec.delta, rec.direction);
        }
        rules.push(CorrectionRule {
            itemset: Itemset::new(ids),
            delta: rec.delta,
            direction: rec.direction,
            stats: RuleStats {
                support: rec.support,
                confidence: rec.confidence,
                n_true_changed: rec.n_true_changed,
                n_false_changed: rec.n_false_changed,
            },
        });
    }
    Ok(RuleFile {
        rules,
        kind: header.kind,
    })
}
