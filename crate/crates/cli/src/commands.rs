use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use corrules_core::data::{
    encode, fit_discretization, load_table, AttributeRule, DiscretizationOptions, DiscretizationSpec,
    ItemVocabulary, Label, RawTable, Schema, ScoreTransform,
};
use corrules_core::harness::{gen_drift_scenario, gen_lack_splits, plant_rule_dataset, DriftConfig, LackSplitSpec};
use corrules_core::miner::{mine, MinerConfig, MinerCounters};
use corrules_core::models::{evaluate, greedy_build, CorrectionModel, ModelKind, Objective};
use corrules_core::postprocess::{denoise, drift_filter, kmodes_summarize, ClusterConfig};
use corrules_core::rules::Direction;
use corrules_core::{Dataset64, Itemset};
use serde::Serialize;
use serde_json::json;

use crate::formats::{read_dataset, read_rules, write_atomic, write_dataset, write_json, write_model, write_rules, Vocab};
use crate::{
    ApplyArgs, BuildArgs, Command, DataArgs, DirectionsArg, DriftFilterArgs, EvaluateArgs, GenScenarioArgs, KindArg,
    MineArgs, ObjectiveArg, PrepareArgs, ScenarioKind, SummarizeArgs, TransformArg, ValidateArgs,
};

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Prepare(a) => prepare(a),
        Command::Mine(a) => mine_cmd(a),
        Command::Validate(a) => validate(a),
        Command::DriftFilter(a) => drift_filter_cmd(a),
        Command::Build(a) => build(a),
        Command::Apply(a) => apply(a),
        Command::Evaluate(a) => evaluate_cmd(a),
        Command::Summarize(a) => summarize(a),
        Command::GenScenario(a) => gen_scenario(a),
    }
}

fn load(input: &DataArgs) -> Result<(Vocab, Dataset64)> {
    let vocab = Vocab::read(&input.vocab)?;
    let dataset = read_dataset(&input.data, &vocab)?;
    Ok((vocab, dataset))
}

fn model_kind(k: KindArg) -> ModelKind {
    match k {
        KindArg::Crl => ModelKind::List,
        KindArg::Crs => ModelKind::Set,
    }
}

/// A model file carries its kind; a plain rules file needs `--kind`
/// (rule set by default).
fn load_model(path: &Path, kind: Option<KindArg>, vocab: &Vocab) -> Result<CorrectionModel<f64>> {
    let file = read_rules(path, vocab)?;
    let kind = match (file.kind, kind.map(model_kind)) {
        (Some(stored), Some(asked)) if stored != asked => {
            bail!("{} holds a {} model but --kind {} was given", path.display(), stored.name(), asked.name())
        }
        (Some(k), _) | (None, Some(k)) => k,
        (None, None) => ModelKind::Set,
    };
    Ok(CorrectionModel::new(kind, file.rules)?)
}

fn prepare(a: PrepareArgs) -> Result<()> {
    let t = &a.table;
    let schema = Schema {
        score_col: Some(a.score_col.clone()),
        label_col: t.label_col.clone(),
        categorical: t.categorical.clone(),
        numeric: t.numeric.clone(),
        ignore: t.ignore.clone(),
        delimiter: t.delimiter,
    };
    let table = load_table(&t.input, &schema).with_context(|| format!("reading {}", t.input.display()))?;
    let vocab = match (&a.vocab, &a.write_vocab) {
        (Some(path), _) => Vocab::read(path)?,
        (None, Some(path)) => {
            let options = DiscretizationOptions {
                bins: a.bins,
                not_equal_items: a.not_equal,
            };
            let (spec, vocabulary) = fit_discretization(&table, options)?;
            let transform = match a.transform {
                TransformArg::Identity => ScoreTransform::Identity,
                TransformArg::Tanh => ScoreTransform::Tanh,
            };
            let vocab = Vocab::new(vocabulary, Some(spec), transform);
            vocab.write(path)?;
            vocab
        }
        (None, None) => unreachable!("clap requires one vocabulary source"),
    };
    let Some(spec) = &vocab.spec else {
        bail!("the vocabulary has no discretization and cannot encode a table");
    };
    let dataset: Dataset64 = encode(&table, spec, &vocab.vocabulary, vocab.transform)?;
    write_dataset(&a.out, &dataset, &vocab)?;
    log::info!("{} instances over {} items", dataset.len(), dataset.n_items());
    Ok(())
}

#[derive(Serialize)]
struct DirectionStats {
    direction: Direction,
    lattices_enumerated: u64,
    lattices_pruned: u64,
    itemsets_scanned: u64,
}

#[derive(Serialize)]
struct MineStats {
    rules: usize,
    lattices_enumerated: u64,
    lattices_pruned: u64,
    itemsets_scanned: u64,
    per_direction: Vec<DirectionStats>,
    diagnostics: Vec<String>,
    max_len: usize,
    min_support: f64,
    min_confidence: f64,
    minimal: bool,
    pruning: bool,
    wall_time_s: f64,
}

fn stats_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".stats.json");
    out.with_file_name(name)
}

fn mine_cmd(a: MineArgs) -> Result<()> {
    let (vocab, dataset) = load(&a.input)?;
    let directions = match a.directions {
        DirectionsArg::Both => Direction::BOTH.to_vec(),
        DirectionsArg::Positive => vec![Direction::Positive],
        DirectionsArg::Negative => vec![Direction::Negative],
    };
    let config = MinerConfig {
        max_len: a.max_len,
        min_support: a.min_support,
        min_confidence: a.min_confidence,
        minimal: a.minimal,
        directions,
        pruning: !a.no_prune,
        workers: 0,
    };
    let started = Instant::now();
    let mined = mine(&dataset, &config)?;
    let wall = started.elapsed().as_secs_f64();
    let counters: MinerCounters = mined.counters;
    let stats = MineStats {
        rules: mined.len(),
        lattices_enumerated: counters.lattices_enumerated,
        lattices_pruned: counters.lattices_pruned,
        itemsets_scanned: counters.itemsets_scanned,
        per_direction: mined
            .per_direction
            .iter()
            .map(|(d, c)| DirectionStats {
                direction: *d,
                lattices_enumerated: c.lattices_enumerated,
                lattices_pruned: c.lattices_pruned,
                itemsets_scanned: c.itemsets_scanned,
            })
            .collect(),
        diagnostics: mined.diagnostics.clone(),
        max_len: config.max_len,
        min_support: config.min_support,
        min_confidence: config.min_confidence,
        minimal: config.minimal,
        pruning: config.pruning,
        wall_time_s: wall,
    };
    for d in &mined.diagnostics {
        log::warn!("{d}");
    }
    let rules = mined.into_rules();
    write_rules(&a.out, &rules, &vocab)?;
    write_json(&a.stats.unwrap_or_else(|| stats_path(&a.out)), &stats)?;
    log::info!("{} rules in {wall:.3}s", rules.len());
    Ok(())
}

fn validate(a: ValidateArgs) -> Result<()> {
    let (vocab, dataset) = load(&a.input)?;
    let rules = read_rules(&a.rules, &vocab)?.rules;
    let outcome = denoise(&rules, &dataset, a.lambda_valid);
    write_rules(&a.out, &outcome.rules, &vocab)?;
    log::info!("kept {} of {} rules", outcome.rules.len(), rules.len());
    Ok(())
}

fn drift_filter_cmd(a: DriftFilterArgs) -> Result<()> {
    let (vocab, dataset) = load(&a.input)?;
    let rules = read_rules(&a.rules, &vocab)?.rules;
    let outcome = drift_filter(&rules, &dataset, a.lambda_drift);
    write_rules(&a.out, &outcome.rules, &vocab)?;
    log::info!("kept {} of {} rules", outcome.rules.len(), rules.len());
    Ok(())
}

fn build(a: BuildArgs) -> Result<()> {
    let (vocab, dataset) = load(&a.input)?;
    let candidates = read_rules(&a.rules, &vocab)?.rules;
    let objective = match a.objective {
        ObjectiveArg::Accuracy => Objective::Accuracy,
        ObjectiveArg::F1 => Objective::F1,
        ObjectiveArg::LogLoss => Objective::LogLoss,
    };
    let kind = model_kind(a.kind);
    let result = greedy_build(&candidates, &dataset, objective, a.max_rules, kind)?;
    write_model(&a.out, kind, result.model.rules(), &vocab)?;
    log::info!(
        "{} rules chosen; objective {:?}",
        result.chosen.len(),
        result.history
    );
    Ok(())
}

fn apply(a: ApplyArgs) -> Result<()> {
    let (vocab, dataset) = load(&a.input)?;
    let model = load_model(&a.model, a.kind, &vocab)?;
    let corrected = model.apply_dataset(&dataset);
    write_atomic(&a.out, |w| {
        writeln!(w, "row,score,corrected,label")?;
        for (i, (inst, c)) in dataset.instances().iter().zip(&corrected).enumerate() {
            writeln!(w, "{i},{},{c},{}", inst.score, inst.label.as_i8())?;
        }
        Ok(())
    })
}

fn evaluate_cmd(a: EvaluateArgs) -> Result<()> {
    let (vocab, dataset) = load(&a.input)?;
    let model = match &a.model {
        Some(path) => Some(load_model(path, a.kind, &vocab)?),
        None => None,
    };
    let base = evaluate(&dataset, None)?;
    let report = match &model {
        Some(m) => json!({
            "base": base,
            "corrected": evaluate(&dataset, Some(m))?,
            "model": { "kind": m.kind(), "rules": m.rules().len() },
        }),
        None => json!({ "base": base }),
    };
    match &a.out {
        Some(path) => write_json(path, &report),
        None => {
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(())
        }
    }
}

fn summarize(a: SummarizeArgs) -> Result<()> {
    let (vocab, dataset) = load(&a.input)?;
    let rules = read_rules(&a.rules, &vocab)?.rules;
    let config = ClusterConfig {
        k: a.clusters,
        max_iter: a.max_iter,
        seed: a.seed,
    };
    let summary = kmodes_summarize(&rules, &dataset, &config)?;
    for d in &summary.directions {
        if !d.converged {
            log::warn!("{} direction did not converge in {} iterations", d.direction, a.max_iter);
        }
    }
    write_rules(&a.out, &summary.select(&rules), &vocab)
}

// -------------------------------------------------------------- gen-scenario

fn scenario_table(a: &GenScenarioArgs) -> Result<RawTable> {
    let (Some(input), Some(label_col)) = (&a.input, &a.label_col) else {
        bail!("--input and --label-col are required for this scenario kind");
    };
    let schema = Schema {
        score_col: a.score_col.clone(),
        label_col: label_col.clone(),
        categorical: a.categorical.clone(),
        numeric: a.numeric.clone(),
        ignore: a.ignore.clone(),
        delimiter: a.delimiter,
    };
    load_table(input, &schema).with_context(|| format!("reading {}", input.display()))
}

fn write_split(dir: &Path, name: &str, table: &RawTable, rows: &[usize], delimiter: u8) -> Result<String> {
    let file = format!("{name}.csv");
    let part = table.select(rows);
    write_atomic(&dir.join(&file), |w| Ok(part.write_csv(w, delimiter)?))?;
    Ok(file)
}

/// Table row indices mapped back to data rows of the source file.
fn source_rows(table: &RawTable, rows: &[usize]) -> Vec<usize> {
    rows.iter().map(|&r| table.source_rows[r]).collect()
}

fn gen_scenario(a: GenScenarioArgs) -> Result<()> {
    std::fs::create_dir_all(&a.out_dir).with_context(|| format!("creating {}", a.out_dir.display()))?;
    let manifest = match a.kind {
        ScenarioKind::Lack => {
            let table = scenario_table(&a)?;
            let spec = LackSplitSpec {
                trn: a.trn,
                mng: a.mng,
                aug_frac: a.aug_frac,
            };
            let s = gen_lack_splits(&table.labels, &spec, a.seed)?;
            let mut files = serde_json::Map::new();
            for (name, rows) in [("trn", &s.trn), ("mng", &s.mng), ("aug", &s.aug), ("tst", &s.tst)] {
                files.insert(name.into(), write_split(&a.out_dir, name, &table, rows, a.delimiter)?.into());
            }
            json!({
                "kind": "lack",
                "seed": a.seed,
                "input": a.input,
                "spec": spec,
                "files": files,
                "splits": {
                    "trn": source_rows(&table, &s.trn),
                    "mng": source_rows(&table, &s.mng),
                    "aug": source_rows(&table, &s.aug),
                    "tst": source_rows(&table, &s.tst),
                },
            })
        }
        ScenarioKind::Drift => {
            let table = scenario_table(&a)?;
            let config = DriftConfig {
                n_regions: a.regions,
                depth: a.depth,
                rho: a.rho,
                ..DriftConfig::default()
            };
            let s = gen_drift_scenario(&table, &config, a.seed)?;
            s.check(&table.labels)?;
            let mut files = serde_json::Map::new();
            for (name, rows) in [("trn", &s.trn), ("mng", &s.mng), ("tst", &s.tst)] {
                files.insert(name.into(), write_split(&a.out_dir, name, &table, rows, a.delimiter)?.into());
            }
            let regions: Vec<_> = s
                .regions
                .iter()
                .map(|r| {
                    json!({
                        "conditions": r.conditions,
                        "shifted_label": r.shifted_label.as_i8(),
                        "rows": source_rows(&table, &r.rows),
                    })
                })
                .collect();
            json!({
                "kind": "drift",
                "seed": a.seed,
                "input": a.input,
                "config": s.config,
                "attempts": s.attempts,
                "files": files,
                "regions": regions,
                "splits": {
                    "trn": source_rows(&table, &s.trn),
                    "mng": source_rows(&table, &s.mng),
                    "tst": source_rows(&table, &s.tst),
                },
            })
        }
        ScenarioKind::Planted => planted(&a)?,
    };
    write_json(&a.out_dir.join("manifest.json"), &manifest)
}

/// Items `x<j> = 1`; the vocabulary can also encode a CSV of 0/1 columns.
fn planted_vocab(n_items: usize) -> Vocab {
    let spec = DiscretizationSpec {
        options: DiscretizationOptions {
            bins: 1,
            not_equal_items: false,
        },
        attributes: (0..n_items)
            .map(|j| AttributeRule::Categorical {
                name: format!("x{j}"),
                categories: vec!["1".into()],
            })
            .collect(),
    };
    let vocabulary: ItemVocabulary = spec.vocabulary();
    Vocab::new(vocabulary, Some(spec), ScoreTransform::Identity)
}

fn planted(a: &GenScenarioArgs) -> Result<serde_json::Value> {
    let itemset = Itemset::new(a.planted.clone());
    let p = plant_rule_dataset::<f64>(a.n_items, a.n_instances, &itemset, a.flip_rate, a.noise, a.seed)?;
    let vocab = planted_vocab(a.n_items);
    let n_tst = (p.dataset.len() as f64 * a.holdout_frac).round() as usize;
    let n_mng = p.dataset.len() - n_tst;
    // instances are i.i.d., so a prefix split is a random split
    let mng: Vec<usize> = (0..n_mng).collect();
    let tst: Vec<usize> = (n_mng..p.dataset.len()).collect();
    vocab.write(&a.out_dir.join("vocab.json"))?;
    write_dataset(&a.out_dir.join("data.jsonl"), &p.dataset, &vocab)?;
    write_dataset(&a.out_dir.join("mng.jsonl"), &p.dataset.subset(&mng), &vocab)?;
    write_dataset(&a.out_dir.join("tst.jsonl"), &p.dataset.subset(&tst), &vocab)?;
    let planted_items: Vec<_> = itemset
        .items()
        .iter()
        .map(|&x| vocab.vocabulary.get(x).expect("planted item in range").predicate.clone())
        .collect();
    let positives = p.dataset.instances().iter().filter(|i| i.label == Label::Positive).count();
    Ok(json!({
        "kind": "planted",
        "seed": a.seed,
        "n_items": a.n_items,
        "n_instances": a.n_instances,
        "flip_rate": a.flip_rate,
        "noise": a.noise,
        "planted": planted_items,
        "hits": p.hits,
        "positives": positives,
        "files": { "vocab": "vocab.json", "data": "data.jsonl", "mng": "mng.jsonl", "tst": "tst.jsonl" },
        "splits": { "mng": [0, n_mng], "tst": [n_mng, p.dataset.len()] },
    }))
}
