//! Supervised classifiers behind one train/predict contract, plus k-means.

pub mod forest;
pub mod kmeans;
pub mod knn;
pub mod nb;
pub mod svm;

use serde::{Deserialize, Serialize};

pub use forest::{ForestConfig, RfModel, Tree};
pub use kmeans::{kmeans, KMeansConfig, KMeansResult};
pub use knn::{Kernel, KnnConfig, KnnModel};
pub use nb::{NbConfig, NbModel, PriorMode};
pub use svm::{SvmConfig, SvmKernel, SvmModel};

use crate::corpus::ClassId;
use crate::error::{Error, Result};
use crate::textpipe::{Dtm, SparseRow};

pub trait Classifier {
    fn predict(&self, x: &SparseRow) -> ClassId;

    /// Class ids the model can emit, ascending.
    fn classes(&self) -> &[ClassId];

    fn predict_all(&self, rows: &[SparseRow]) -> Vec<ClassId> {
        rows.iter().map(|r| self.predict(r)).collect()
    }
}

/// Hyperparameters of one of the supervised models.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelConfig {
    NaiveBayes(NbConfig),
    Knn(KnnConfig),
    Svm(SvmConfig),
    RandomForest(ForestConfig),
}

impl ModelConfig {
    pub fn name(&self) -> &'static str {
        match self {
            ModelConfig::NaiveBayes(_) => "naive_bayes",
            ModelConfig::Knn(_) => "knn",
            ModelConfig::Svm(_) => "svm",
            ModelConfig::RandomForest(_) => "random_forest",
        }
    }

    pub fn fit(&self, dtm: &Dtm, labels: &[ClassId], classes: &[ClassId]) -> Result<TrainedModel> {
        Ok(match self {
            ModelConfig::NaiveBayes(c) => TrainedModel::NaiveBayes(NbModel::train(dtm, labels, classes, c)?),
            ModelConfig::Knn(c) => TrainedModel::Knn(KnnModel::train(dtm, labels, classes, c)?),
            ModelConfig::Svm(c) => TrainedModel::Svm(SvmModel::train(dtm, labels, classes, c)?),
            ModelConfig::RandomForest(c) => TrainedModel::RandomForest(RfModel::train(dtm, labels, classes, c)?),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "model", rename_all = "snake_case")]
pub enum TrainedModel {
    NaiveBayes(NbModel),
    Knn(KnnModel),
    Svm(SvmModel),
    RandomForest(RfModel),
}

impl Classifier for TrainedModel {
    fn predict(&self, x: &SparseRow) -> ClassId {
        match self {
            TrainedModel::NaiveBayes(m) => m.predict(x),
            TrainedModel::Knn(m) => m.predict(x),
            TrainedModel::Svm(m) => m.predict(x),
            TrainedModel::RandomForest(m) => m.predict(x),
        }
    }

    fn classes(&self) -> &[ClassId] {
        match self {
            TrainedModel::NaiveBayes(m) => m.classes(),
            TrainedModel::Knn(m) => Classifier::classes(m),
            TrainedModel::Svm(m) => Classifier::classes(m),
            TrainedModel::RandomForest(m) => Classifier::classes(m),
        }
    }
}

/// Index of the first maximum.
pub(crate) fn argmax_first(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Class with the most votes; ties go to the earliest (smallest) class.
pub(crate) fn majority(counts: &[usize]) -> usize {
    let mut best = 0;
    for (i, &c) in counts.iter().enumerate().skip(1) {
        if c > counts[best] {
            best = i;
        }
    }
    best
}

pub(crate) fn check_labels(dtm: &Dtm, labels: &[ClassId], classes: &[ClassId]) -> Result<()> {
    if dtm.n_docs() == 0 {
        return Err(Error::EmptyTrainingSet);
    }
    if labels.len() != dtm.n_docs() {
        return Err(Error::InvalidParameter(format!(
            "{} labels for {} rows",
            labels.len(),
            dtm.n_docs()
        )));
    }
    if classes.is_empty() || classes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(
            "class list must be non-empty and strictly ascending".into(),
        ));
    }
    if let Some(&bad) = labels.iter().find(|l| !classes.contains(l)) {
        return Err(Error::InvalidParameter(format!("label {bad} not in class list")));
    }
    Ok(())
}
