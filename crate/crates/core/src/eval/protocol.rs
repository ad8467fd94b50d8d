use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::features::{CorpusView, FeatureConfig};
use super::metrics::{ConfusionMatrix, Metrics};
use crate::corpus::{ClassId, Scheme};
use crate::error::{Error, Result};
use crate::models::{Classifier, ForestConfig, KnnConfig, ModelConfig, NbConfig, SvmConfig, TrainedModel};
use crate::textpipe::{tokenize, Dtm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassifierKind {
    #[serde(rename = "nb")]
    NaiveBayes,
    #[serde(rename = "knn")]
    Knn,
    #[serde(rename = "svm")]
    Svm,
    #[serde(rename = "rf")]
    RandomForest,
    /// Predicts 1 when a token starts with `critic`.
    #[serde(rename = "keyword")]
    Keyword,
}

impl ClassifierKind {
    pub const ALL: [ClassifierKind; 5] = [
        ClassifierKind::NaiveBayes,
        ClassifierKind::Knn,
        ClassifierKind::Svm,
        ClassifierKind::RandomForest,
        ClassifierKind::Keyword,
    ];

    /// Short identifier, as accepted by `from_str`.
    pub fn id(self) -> &'static str {
        match self {
            ClassifierKind::NaiveBayes => "nb",
            ClassifierKind::Knn => "knn",
            ClassifierKind::Svm => "svm",
            ClassifierKind::RandomForest => "rf",
            ClassifierKind::Keyword => "keyword",
        }
    }

    /// Display name used in result tables.
    pub fn label(self) -> &'static str {
        match self {
            ClassifierKind::NaiveBayes => "Naive Bayes",
            ClassifierKind::Knn => "kNN",
            ClassifierKind::Svm => "SVM",
            ClassifierKind::RandomForest => "Random Forest",
            ClassifierKind::Keyword => "'critic*' keyword search",
        }
    }
}

impl fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for ClassifierKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ClassifierKind::ALL
            .into_iter()
            .find(|k| k.id() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown classifier `{s}`")))
    }
}

/// Everything that determines an experiment's outcome.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentSpec {
    pub classifier: ClassifierKind,
    pub scheme: Scheme,
    pub corpus_view: CorpusView,
    pub features: FeatureConfig,
    /// Seed for the random forest (overrides `rf.seed`).
    pub seed: u64,
    pub nb: NbConfig,
    pub knn: KnnConfig,
    pub svm: SvmConfig,
    pub rf: ForestConfig,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        ExperimentSpec::new(ClassifierKind::NaiveBayes, Scheme::Binary)
    }
}

impl ExperimentSpec {
    pub fn new(classifier: ClassifierKind, scheme: Scheme) -> Self {
        ExperimentSpec {
            classifier,
            scheme,
            corpus_view: CorpusView::Metadata,
            features: FeatureConfig::default(),
            seed: 42,
            nb: NbConfig::default(),
            knn: KnnConfig::default(),
            svm: SvmConfig::default(),
            rf: ForestConfig::default(),
        }
    }

    pub fn classes(&self) -> Vec<ClassId> {
        self.scheme.classes()
    }

    /// The class reported as "positive" in headline scores: the highest id.
    pub fn positive_class(&self) -> ClassId {
        self.scheme.n_classes() - 1
    }

    /// Row normalisation actually applied.
    pub fn normalize(&self) -> bool {
        self.features
            .normalize
            .unwrap_or(self.classifier == ClassifierKind::Knn)
    }

    pub fn validate(&self) -> Result<()> {
        match (self.classifier, self.scheme) {
            (ClassifierKind::Keyword, Scheme::Multiclass) => Err(Error::InvalidParameter(
                "the keyword baseline is a binary classifier".into(),
            )),
            (ClassifierKind::Svm, Scheme::Multiclass) => Err(Error::NotImplemented("multi-class SVM".into())),
            _ if self.features.min_len == 0 => Err(Error::InvalidParameter("min_len must be >= 1".into())),
            _ => Ok(()),
        }
    }

    /// Model hyperparameters; `None` for the keyword baseline.
    pub fn model_config(&self) -> Option<ModelConfig> {
        Some(match self.classifier {
            ClassifierKind::NaiveBayes => ModelConfig::NaiveBayes(self.nb.clone()),
            ClassifierKind::Knn => ModelConfig::Knn(self.knn.clone()),
            ClassifierKind::Svm => ModelConfig::Svm(self.svm.clone()),
            ClassifierKind::RandomForest => ModelConfig::RandomForest(ForestConfig {
                seed: self.seed,
                ..self.rf.clone()
            }),
            ClassifierKind::Keyword => return None,
        })
    }

    fn require_model(&self) -> Result<ModelConfig> {
        self.model_config()
            .ok_or_else(|| Error::InvalidParameter("the keyword baseline works on text, not on a matrix".into()))
    }
}

/// Predictions for a set of documents with their scores.
#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation {
    pub predictions: Vec<ClassId>,
    pub metrics: Metrics,
    pub confusion: ConfusionMatrix,
}

impl Evaluation {
    pub fn new(
        classes: &[ClassId],
        positive_class: ClassId,
        truth: &[ClassId],
        predictions: Vec<ClassId>,
    ) -> Result<Self> {
        let confusion = ConfusionMatrix::from_pairs(classes, truth, &predictions)?;
        let metrics = confusion.metrics(positive_class)?;
        Ok(Evaluation {
            predictions,
            metrics,
            confusion,
        })
    }
}

/// Leave-one-out cross-validation with a caller-supplied fold. `fold`
/// receives the training row ids and the held-out row id and returns the
/// prediction. Folds run in parallel; metrics are pooled over all
/// predictions.
pub fn loocv_by<F>(labels: &[ClassId], classes: &[ClassId], positive_class: ClassId, fold: F) -> Result<Evaluation>
where
    F: Fn(&[usize], usize) -> Result<ClassId> + Sync,
{
    let n = labels.len();
    if n == 0 {
        return Err(Error::EmptyEvaluation);
    }
    let outcomes: Vec<Result<ClassId>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let train: Vec<usize> = (0..n).filter(|&j| j != i).collect();
            fold(&train, i)
        })
        .collect();
    let mut predictions = Vec::with_capacity(n);
    for (index, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok(p) => predictions.push(p),
            Err(e) => {
                return Err(Error::Fold {
                    index,
                    source: Box::new(e),
                })
            }
        }
    }
    Evaluation::new(classes, positive_class, labels, predictions)
}

/// Leave-one-out cross-validation of the spec's classifier on `dtm`.
pub fn loocv(dtm: &Dtm, labels: &[ClassId], spec: &ExperimentSpec) -> Result<Evaluation> {
    spec.validate()?;
    let config = spec.require_model()?;
    let classes = spec.classes();
    loocv_by(labels, &classes, spec.positive_class(), |train, held_out| {
        let fold_labels: Vec<ClassId> = train.iter().map(|&j| labels[j]).collect();
        let model = config.fit(&dtm.select(train), &fold_labels, &classes)?;
        Ok(model.predict(dtm.row(held_out)))
    })
}

/// Trains once on the training rows and scores the test rows.
pub fn predict_test(
    train_dtm: &Dtm,
    train_labels: &[ClassId],
    test_dtm: &Dtm,
    test_labels: &[ClassId],
    spec: &ExperimentSpec,
) -> Result<(TrainedModel, Evaluation)> {
    spec.validate()?;
    if test_dtm.n_docs() == 0 {
        return Err(Error::EmptyEvaluation);
    }
    let classes = spec.classes();
    let model = spec.require_model()?.fit(train_dtm, train_labels, &classes)?;
    let predictions = model.predict_all(test_dtm.rows());
    let eval = Evaluation::new(&classes, spec.positive_class(), test_labels, predictions)?;
    Ok((model, eval))
}

pub const KEYWORD_PREFIX: &str = "critic";

/// 1 if any token of `text` starts with `critic` (any case), else 0.
pub fn keyword_baseline(text: &str) -> ClassId {
    tokenize(text, 1).iter().any(|t| t.starts_with(KEYWORD_PREFIX)).into()
}

/// Scores the keyword baseline on labelled binary texts.
pub fn keyword_evaluate<S: AsRef<str>>(texts: &[S], labels: &[ClassId]) -> Result<Evaluation> {
    if texts.is_empty() {
        return Err(Error::EmptyEvaluation);
    }
    let predictions = texts.iter().map(|t| keyword_baseline(t.as_ref())).collect();
    Evaluation::new(&[0, 1], 1, labels, predictions)
}
