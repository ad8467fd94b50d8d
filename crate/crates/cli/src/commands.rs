use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use seismotext_core::corpus::Corpus;
use seismotext_core::eval::{
    self, featurize, round_to, run_cv, run_test, ClassifierKind, Direction, Evaluation, SavedModel, TableRow,
    REPORT_DECIMALS,
};
use seismotext_core::models::NbModel;
use seismotext_core::{ClassId, Scheme};
use serde::Serialize;

use crate::config::RunConfig;
use crate::CliError;

fn load(cfg: &RunConfig) -> Result<Corpus, CliError> {
    Ok(cfg.corpus_paths().load()?)
}

fn write(cfg: &RunConfig, name: &str, contents: &str) -> Result<(), CliError> {
    std::fs::create_dir_all(&cfg.out).map_err(|e| CliError::Run(format!("{}: {e}", cfg.out.display())))?;
    let path = cfg.out.join(name);
    std::fs::write(&path, contents).map_err(|e| CliError::Run(format!("{}: {e}", path.display())))
}

fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| CliError::Run(e.to_string()))
}

fn shares(counts: &BTreeMap<ClassId, usize>, scheme: Scheme) -> BTreeMap<ClassId, f64> {
    let total: usize = counts.values().sum();
    scheme
        .classes()
        .into_iter()
        .map(|c| {
            let n = counts.get(&c).copied().unwrap_or(0);
            let share = if total == 0 { 0.0 } else { n as f64 / total as f64 };
            (c, round_to(share, REPORT_DECIMALS))
        })
        .collect()
}

fn count_line(counts: &BTreeMap<ClassId, usize>, scheme: Scheme) -> String {
    let s = shares(counts, scheme);
    scheme
        .classes()
        .iter()
        .map(|c| format!("{c}={} ({:.1}%)", counts.get(c).copied().unwrap_or(0), 100.0 * s[c]))
        .collect::<Vec<_>>()
        .join("  ")
}

fn vocab_size(corpus: &Corpus, cfg: &RunConfig) -> Result<usize, CliError> {
    let spec = &cfg.experiment;
    Ok(featurize(corpus, spec, cfg.cutoff)?.space.vocabulary.len())
}

pub fn validate(cfg: &RunConfig) -> Result<(), CliError> {
    let corpus = load(cfg)?;
    let (train, test) = corpus.split_by_year(cfg.cutoff);
    println!(
        "{} documents, {} train / {} test",
        corpus.len(),
        train.len(),
        test.len()
    );
    for scheme in [Scheme::Binary, Scheme::Multiclass] {
        println!("{scheme} labels: {}", count_line(&corpus.class_counts(scheme), scheme));
        println!("  train: {}", count_line(&train.class_counts(scheme), scheme));
        println!("  test:  {}", count_line(&test.class_counts(scheme), scheme));
    }
    println!("vocabulary: {} terms", vocab_size(&corpus, cfg)?);
    Ok(())
}

fn print_row(row: &TableRow) {
    println!("{}", row.console_header());
    println!("{}", row.console_line());
}

pub fn cv(cfg: &RunConfig) -> Result<(), CliError> {
    let spec = cfg.spec()?;
    let corpus = load(cfg)?;
    let report = run_cv(&corpus, &spec, cfg.cutoff)?;
    let stem = cfg.stem(&spec);
    let row = report.table_row();
    write(cfg, &format!("cv_{stem}.json"), &report.to_json()?)?;
    write(
        cfg,
        &format!("cv_{stem}.csv"),
        &TableRow::to_csv(std::slice::from_ref(&row))?,
    )?;
    print_row(&row);
    Ok(())
}

pub fn predict(cfg: &RunConfig, save_model: Option<&Path>, model: Option<&Path>) -> Result<(), CliError> {
    if let Some(path) = model {
        return predict_saved(cfg, path);
    }
    let spec = cfg.spec()?;
    if save_model.is_some() && spec.classifier == ClassifierKind::Keyword {
        return Err(CliError::Usage("the keyword baseline has no model to save".into()));
    }
    let corpus = load(cfg)?;
    let (report, saved) = run_test(&corpus, &spec, cfg.cutoff)?;
    let stem = cfg.stem(&spec);
    let row = report.table_row();
    write(cfg, &format!("predict_{stem}.json"), &report.to_json()?)?;
    write(
        cfg,
        &format!("predict_{stem}.csv"),
        &TableRow::to_csv(std::slice::from_ref(&row))?,
    )?;
    write(cfg, &format!("predictions_{stem}.csv"), &report.predictions_csv()?)?;
    if let (Some(path), Some(saved)) = (save_model, saved) {
        std::fs::write(path, saved.to_json()?).map_err(|e| CliError::Run(format!("{}: {e}", path.display())))?;
    }
    print_row(&row);
    Ok(())
}

fn predict_saved(cfg: &RunConfig, path: &Path) -> Result<(), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Run(format!("{}: {e}", path.display())))?;
    let saved = SavedModel::from_json(&text)?;
    let corpus = load(cfg)?;
    let (_, test) = corpus.split_by_year(cfg.cutoff);
    let view = &cfg.experiment.corpus_view;
    let texts = test
        .documents()
        .iter()
        .map(|d| view.text(d))
        .collect::<seismotext_core::Result<Vec<_>>>()?;
    let labels = test.labels(saved.scheme);
    let predicted = saved.predict_texts(&texts);
    let positive = saved.scheme.n_classes() - 1;
    let eval = Evaluation::new(&saved.classes, positive, &labels, predicted.clone())?;

    let mut csv = String::from("refID,year,label,predicted\n");
    for ((d, label), p) in test.documents().iter().zip(&labels).zip(&predicted) {
        writeln!(csv, "{},{},{label},{p}", d.ref_id, d.year).expect("write to string");
    }
    write(cfg, &format!("predictions_{}_model.csv", saved.scheme), &csv)?;
    println!(
        "{} documents, accuracy {:.2}",
        eval.confusion.total(),
        eval.metrics.accuracy
    );
    Ok(())
}

pub fn rank_terms(cfg: &RunConfig, class: ClassId, top_n: usize, direction: Direction) -> Result<(), CliError> {
    let mut spec = cfg.experiment.clone();
    if spec.classifier != ClassifierKind::NaiveBayes {
        return Err(CliError::Usage("term rankings need the naive Bayes classifier".into()));
    }
    if class >= spec.scheme.n_classes() {
        return Err(CliError::Usage(format!(
            "class {class} is not in the {} scheme",
            spec.scheme
        )));
    }
    if let Some(seed) = cfg.seed {
        spec.seed = seed;
    }
    let corpus = load(cfg)?;
    let data = featurize(&corpus, &spec, cfg.cutoff)?;
    let model = NbModel::train(&data.train.dtm, &data.train.labels, &spec.classes(), &spec.nb)?;
    let ranked = eval::rank_terms(&model, class, top_n, direction)?;
    let dir = match direction {
        Direction::Top => "top",
        Direction::Bottom => "bottom",
    };
    let mut csv = String::from("term,probability\n");
    for t in &ranked {
        writeln!(csv, "{},{:.*}", t.term, REPORT_DECIMALS as usize, t.probability).expect("write to string");
        println!("{:<24} {:.2}", t.term, t.probability);
    }
    write(cfg, &format!("terms_{}_class{class}_{dir}.csv", spec.scheme), &csv)
}

#[derive(Serialize)]
struct SchemeSummary {
    counts: BTreeMap<ClassId, usize>,
    shares: BTreeMap<ClassId, f64>,
    train_shares: BTreeMap<ClassId, f64>,
    test_shares: BTreeMap<ClassId, f64>,
}

#[derive(Serialize)]
struct Summary {
    documents: usize,
    cutoff: i32,
    n_train: usize,
    n_test: usize,
    /// Absent when the corpus has no terms.
    vocab_size: Option<usize>,
    binary: SchemeSummary,
    multiclass: SchemeSummary,
}

fn year_table(corpus: &Corpus, scheme: Scheme) -> String {
    let classes = scheme.classes();
    let mut csv = String::from("year");
    for c in &classes {
        write!(csv, ",class_{c}").expect("write to string");
    }
    csv.push_str(",total\n");
    for (year, counts) in corpus.class_histogram(scheme) {
        write!(csv, "{year}").expect("write to string");
        for c in &classes {
            write!(csv, ",{}", counts.get(c).copied().unwrap_or(0)).expect("write to string");
        }
        writeln!(csv, ",{}", counts.values().sum::<usize>()).expect("write to string");
    }
    csv
}

pub fn report(cfg: &RunConfig) -> Result<(), CliError> {
    let corpus = load(cfg)?;
    let (train, test) = corpus.split_by_year(cfg.cutoff);
    let scheme_summary = |scheme| SchemeSummary {
        counts: corpus.class_counts(scheme),
        shares: shares(&corpus.class_counts(scheme), scheme),
        train_shares: shares(&train.class_counts(scheme), scheme),
        test_shares: shares(&test.class_counts(scheme), scheme),
    };
    let vocab = if corpus.is_empty() {
        None
    } else {
        Some(vocab_size(&corpus, cfg)?)
    };
    let summary = Summary {
        documents: corpus.len(),
        cutoff: cfg.cutoff,
        n_train: train.len(),
        n_test: test.len(),
        vocab_size: vocab,
        binary: scheme_summary(Scheme::Binary),
        multiclass: scheme_summary(Scheme::Multiclass),
    };
    for scheme in [Scheme::Binary, Scheme::Multiclass] {
        write(cfg, &format!("years_{scheme}.csv"), &year_table(&corpus, scheme))?;
    }
    write(cfg, "summary.json", &json(&summary)?)?;
    println!(
        "{} documents, {} train / {} test",
        summary.documents, summary.n_train, summary.n_test
    );
    if let Some(v) = vocab {
        println!("vocabulary: {v} terms");
    }
    Ok(())
}
