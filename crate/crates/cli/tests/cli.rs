use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn run(data: &Path, out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_seismotext"))
        .env("CORPUS_DIR", data)
        .arg("--out")
        .arg(out)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn copy_data(to: &Path) {
    for f in [
        "metadata.json",
        "labels_binary.json",
        "labels_multiclass.json",
        "aliases.json",
    ] {
        std::fs::copy(data_dir().join(f), to.join(f)).unwrap();
    }
}

#[test]
fn validate_shipped_corpus() {
    let out = tempfile::tempdir().unwrap();
    let o = run(&data_dir(), out.path(), &["validate"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("101 documents, 86 train / 15 test\n"), "{text}");
    assert!(text.contains("vocabulary: 1989 terms"));
}

#[test]
fn validate_missing_label_file() {
    let data = tempfile::tempdir().unwrap();
    copy_data(data.path());
    std::fs::remove_file(data.path().join("labels_multiclass.json")).unwrap();
    let o = run(data.path(), data.path(), &["validate"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("labels_multiclass.json"), "{}", stderr(&o));
}

#[test]
fn validate_duplicate_ref_id() {
    let data = tempfile::tempdir().unwrap();
    copy_data(data.path());
    let path = data.path().join("metadata.json");
    let mut docs: Vec<serde_json::Value> = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    docs.push(docs[3].clone());
    std::fs::write(&path, serde_json::to_string(&docs).unwrap()).unwrap();
    let o = run(data.path(), data.path(), &["validate"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("duplicate refID"), "{}", stderr(&o));
}

#[test]
fn cv_is_reproducible_and_parses_back() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let o = run(&data_dir(), dir.path(), &["cv", "--scheme", "multiclass"]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        assert!(stdout(&o).contains("Naive Bayes"));
    }
    for name in ["cv_multiclass_nb_metadata.json", "cv_multiclass_nb_metadata.csv"] {
        assert_eq!(
            std::fs::read(a.path().join(name)).unwrap(),
            std::fs::read(b.path().join(name)).unwrap(),
            "{name}"
        );
    }
    let csv = std::fs::read_to_string(a.path().join("cv_multiclass_nb_metadata.csv")).unwrap();
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(a.path().join("cv_multiclass_nb_metadata.json")).unwrap())
            .unwrap();
    let accuracy = report["metrics"]["accuracy"].as_f64().unwrap();
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[2].parse::<f64>().unwrap(), accuracy);
    assert!(!csv.contains('\r'));
}

#[test]
fn config_file_with_flag_override() {
    let out = tempfile::tempdir().unwrap();
    let cfg = out.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"seed": 3, "experiment": {"classifier": "rf", "rf": {"n_tree": 15}}}"#,
    )
    .unwrap();
    let cfg = cfg.to_str().unwrap();
    let o = run(&data_dir(), out.path(), &["--config", cfg, "cv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let first = std::fs::read(out.path().join("cv_binary_rf_metadata.json")).unwrap();
    let o = run(&data_dir(), out.path(), &["--config", cfg, "cv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        std::fs::read(out.path().join("cv_binary_rf_metadata.json")).unwrap(),
        first
    );

    let o = run(&data_dir(), out.path(), &["--config", cfg, "--classifier", "knn", "cv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(out.path().join("cv_binary_knn_metadata.json").exists());
}

#[test]
fn bad_config_is_a_usage_error() {
    let out = tempfile::tempdir().unwrap();
    let cfg = out.path().join("run.json");
    std::fs::write(&cfg, r#"{"cutof": 2000}"#).unwrap();
    let o = run(
        &data_dir(),
        out.path(),
        &["--config", cfg.to_str().unwrap(), "validate"],
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn forest_without_seed_is_rejected() {
    let out = tempfile::tempdir().unwrap();
    let o = run(&data_dir(), out.path(), &["cv", "--classifier", "rf"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--seed"));
}

#[test]
fn predict_writes_timeline_and_model() {
    let out = tempfile::tempdir().unwrap();
    let model = out.path().join("nb.json");
    let o = run(
        &data_dir(),
        out.path(),
        &["predict", "--save-model", model.to_str().unwrap()],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let timeline = std::fs::read_to_string(out.path().join("predictions_binary_nb_metadata.csv")).unwrap();
    assert_eq!(timeline.lines().count(), 16);
    assert_eq!(timeline.lines().next(), Some("refID,year,label,predicted"));

    let o = run(
        &data_dir(),
        out.path(),
        &["predict", "--model", model.to_str().unwrap()],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let reloaded = std::fs::read_to_string(out.path().join("predictions_binary_model.csv")).unwrap();
    assert_eq!(reloaded, timeline);
}

#[test]
fn predict_with_empty_test_period_fails() {
    let out = tempfile::tempdir().unwrap();
    let o = run(&data_dir(), out.path(), &["predict", "--cutoff", "2018"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("empty"));
}

fn ranking(out: &Path, class: &str, direction: &str) -> Vec<(String, f64)> {
    let o = run(
        &data_dir(),
        out,
        &[
            "rank-terms",
            "--class",
            class,
            "--top",
            "3000",
            "--direction",
            direction,
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(out.join(format!("terms_binary_class{class}_{direction}.csv"))).unwrap();
    text.lines()
        .skip(1)
        .map(|l| {
            let (t, p) = l.rsplit_once(',').unwrap();
            (t.to_string(), p.parse().unwrap())
        })
        .collect()
}

#[test]
fn rank_terms_tables() {
    let out = tempfile::tempdir().unwrap();
    let o = run(&data_dir(), out.path(), &["rank-terms", "--class", "1", "--top", "10"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let top = std::fs::read_to_string(out.path().join("terms_binary_class1_top.csv")).unwrap();
    let probs: Vec<f64> = top
        .lines()
        .skip(1)
        .map(|l| l.rsplit_once(',').unwrap().1.parse().unwrap())
        .collect();
    assert_eq!(probs.len(), 10);
    assert!(probs.windows(2).all(|w| w[0] >= w[1]));

    let one = ranking(out.path(), "1", "top");
    let zero: std::collections::HashMap<_, _> = ranking(out.path(), "0", "bottom").into_iter().collect();
    assert_eq!(one.len(), zero.len());
    for (term, p) in &one {
        assert!((p + zero[term] - 1.0).abs() <= 2e-6, "{term}");
    }
}

#[test]
fn rank_terms_usage_errors() {
    let out = tempfile::tempdir().unwrap();
    for args in [
        &["rank-terms", "--class", "1", "--top", "0"][..],
        &["rank-terms", "--class", "4"],
        &["rank-terms", "--class", "1", "--classifier", "svm"],
    ] {
        assert_eq!(run(&data_dir(), out.path(), args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn report_counts_are_conserved() {
    let out = tempfile::tempdir().unwrap();
    let o = run(&data_dir(), out.path(), &["report"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("86 train / 15 test"));
    for (scheme, cols) in [("binary", 2), ("multiclass", 4)] {
        let csv = std::fs::read_to_string(out.path().join(format!("years_{scheme}.csv"))).unwrap();
        let mut total = 0;
        for line in csv.lines().skip(1) {
            let cells: Vec<usize> = line.split(',').map(|c| c.parse().unwrap()).collect();
            assert_eq!(cells.len(), cols + 2);
            assert_eq!(cells[1..=cols].iter().sum::<usize>(), cells[cols + 1]);
            total += cells[cols + 1];
        }
        assert_eq!(total, 101);
    }
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["vocab_size"], 1989);
}

#[test]
fn report_on_empty_corpus() {
    let data = tempfile::tempdir().unwrap();
    for f in ["metadata.json", "labels_binary.json", "labels_multiclass.json"] {
        std::fs::write(data.path().join(f), "[]").unwrap();
    }
    let o = run(data.path(), data.path(), &["report"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(data.path().join("years_binary.csv")).unwrap();
    assert_eq!(csv, "year,class_0,class_1,total\n");
}
