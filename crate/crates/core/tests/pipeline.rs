mod common;

use seismotext_core::corpus::{CorpusPaths, DEFAULT_CUTOFF};
use seismotext_core::eval::{
    loocv, rank_terms, run_cv, run_test, ClassifierKind, Direction, EvalReport, ExperimentSpec, SavedModel, TableRow,
    VocabScope,
};
use seismotext_core::models::ModelConfig;
use seismotext_core::{Error, Scheme, TrainedModel};

use common::{data_dir, dense_dtm, shipped_corpus};

#[test]
fn shipped_corpus_facts() {
    let corpus = shipped_corpus();
    assert_eq!(corpus.len(), 101);
    let counts = corpus.class_counts(Scheme::Binary);
    assert_eq!((counts[&0], counts[&1]), (48, 53));
    let multi = corpus.class_counts(Scheme::Multiclass);
    assert_eq!(multi.values().sum::<usize>(), 101);
    let hist = corpus.class_histogram(Scheme::Binary);
    assert_eq!(hist.values().flat_map(|m| m.values()).sum::<usize>(), 101);
    assert!(hist.keys().all(|&y| (1988..=2018).contains(&y)));
}

#[test]
fn missing_file_names_the_path() {
    let dir = tempfile::tempdir().unwrap();
    for f in ["metadata.json", "labels_binary.json"] {
        std::fs::copy(data_dir().join(f), dir.path().join(f)).unwrap();
    }
    let err = CorpusPaths::in_dir(dir.path()).load().unwrap_err();
    assert!(matches!(err, Error::Io { .. }));
    assert!(err.to_string().contains("labels_multiclass.json"), "{err}");
}

#[test]
fn aliases_are_required_for_the_shipped_labels() {
    let mut paths = CorpusPaths::in_dir(data_dir());
    paths.aliases = None;
    assert!(matches!(paths.load(), Err(Error::UnresolvedRefId { .. })));
}

#[test]
fn report_json_and_csv_round_trip() {
    let corpus = shipped_corpus();
    let spec = ExperimentSpec::new(ClassifierKind::NaiveBayes, Scheme::Binary);
    let report = run_cv(&corpus, &spec, DEFAULT_CUTOFF).unwrap();
    assert_eq!(report.confusion.total(), 86);
    assert_eq!(report.predictions.len(), 86);
    assert_eq!(report.random_baseline, 0.5);

    let json = report.to_json().unwrap();
    assert_eq!(EvalReport::from_json(&json).unwrap(), report);

    let row = report.table_row();
    let csv = TableRow::to_csv(std::slice::from_ref(&row)).unwrap();
    assert!(csv.starts_with("algorithm,corpus,accuracy,f1,precision,recall\n"));
    let back = TableRow::from_csv(&csv).unwrap();
    assert_eq!(back, vec![row]);
    assert_eq!(back[0].get("accuracy"), Some(Some(report.metrics.accuracy)));
}

#[test]
fn multiclass_table_shape() {
    let corpus = shipped_corpus();
    let spec = ExperimentSpec::new(ClassifierKind::NaiveBayes, Scheme::Multiclass);
    let report = run_cv(&corpus, &spec, DEFAULT_CUTOFF).unwrap();
    assert_eq!(
        report.table_row().header(),
        ["algorithm", "corpus", "accuracy", "f1_0", "f1_1", "f1_2", "f1_3"]
    );
    assert_eq!(report.random_baseline, 0.25);
}

#[test]
fn keyword_test_set_has_undefined_scores() {
    let corpus = shipped_corpus();
    let spec = ExperimentSpec::new(ClassifierKind::Keyword, Scheme::Binary);
    let (report, saved) = run_test(&corpus, &spec, DEFAULT_CUTOFF).unwrap();
    assert!(saved.is_none());
    let row = report.table_row();
    assert!((report.metrics.accuracy - 8.0 / 15.0).abs() < 1e-6);
    assert_eq!(row.get("f1"), Some(None));
    assert!(TableRow::to_csv(std::slice::from_ref(&row)).unwrap().contains(",NA"));
    assert!(row.console_line().contains('-'));
}

#[test]
fn empty_test_period() {
    let corpus = shipped_corpus();
    let spec = ExperimentSpec::default();
    assert!(matches!(run_test(&corpus, &spec, 2018), Err(Error::EmptyEvaluation)));
}

#[test]
fn saved_model_reproduces_predictions() {
    let corpus = shipped_corpus();
    for classifier in [ClassifierKind::NaiveBayes, ClassifierKind::Knn, ClassifierKind::Svm] {
        let spec = ExperimentSpec::new(classifier, Scheme::Binary);
        let (report, saved) = run_test(&corpus, &spec, DEFAULT_CUTOFF).unwrap();
        let saved = SavedModel::from_json(&saved.unwrap().to_json().unwrap()).unwrap();
        let (_, test) = corpus.split_by_year(DEFAULT_CUTOFF);
        let texts: Vec<String> = test.documents().iter().map(|d| d.metadata_text()).collect();
        let predicted = saved.predict_texts(&texts);
        let expected: Vec<usize> = report.predictions.iter().map(|p| p.predicted).collect();
        assert_eq!(predicted, expected, "{classifier}");
    }
}

#[test]
fn saved_model_version_is_checked() {
    let corpus = shipped_corpus();
    let (_, saved) = run_test(&corpus, &ExperimentSpec::default(), DEFAULT_CUTOFF).unwrap();
    let json = saved
        .unwrap()
        .to_json()
        .unwrap()
        .replace("\"version\": 1", "\"version\": 99");
    assert!(SavedModel::from_json(&json).is_err());
}

#[test]
fn train_only_vocabulary_is_smaller() {
    let corpus = shipped_corpus();
    let mut spec = ExperimentSpec::default();
    let (full, _) = run_test(&corpus, &spec, DEFAULT_CUTOFF).unwrap();
    spec.features.vocab_scope = VocabScope::Train;
    let (train_only, _) = run_test(&corpus, &spec, DEFAULT_CUTOFF).unwrap();
    assert!(train_only.vocab_size < full.vocab_size);
}

#[test]
fn two_document_loocv_aborts_with_fold_index() {
    let dtm = dense_dtm(&[vec![1.0, 0.0], vec![0.0, 1.0]], 2);
    let err = loocv(&dtm, &[0, 1], &ExperimentSpec::default()).unwrap_err();
    match err {
        Error::Fold { index, source } => {
            assert_eq!(index, 0);
            assert!(matches!(*source, Error::EmptyClass(_)));
        }
        other => panic!("unexpected {other}"),
    }
}

#[test]
fn ranking_is_sorted_and_complementary() {
    let corpus = shipped_corpus();
    let (_, saved) = run_test(&corpus, &ExperimentSpec::default(), DEFAULT_CUTOFF).unwrap();
    let TrainedModel::NaiveBayes(model) = saved.unwrap().model else {
        panic!("expected naive Bayes")
    };
    let top = rank_terms(&model, 1, 10, Direction::Top).unwrap();
    assert_eq!(top.len(), 10);
    assert!(top.windows(2).all(|w| w[0].probability >= w[1].probability));
    let zero = rank_terms(&model, 0, model.vocab_size(), Direction::Bottom).unwrap();
    for t in &top {
        let other = zero.iter().find(|z| z.term == t.term).unwrap();
        assert!((t.probability + other.probability - 1.0).abs() < 1e-12);
    }
}

#[test]
fn multiclass_svm_is_not_implemented() {
    let corpus = shipped_corpus();
    let spec = ExperimentSpec::new(ClassifierKind::Svm, Scheme::Multiclass);
    assert!(matches!(
        run_cv(&corpus, &spec, DEFAULT_CUTOFF),
        Err(Error::NotImplemented(_))
    ));
    assert!(matches!(spec.model_config(), Some(ModelConfig::Svm(_))));
}
