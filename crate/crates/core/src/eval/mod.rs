//! Experiment protocols: leave-one-out cross-validation, held-out temporal
//! prediction, the keyword baseline, confusion matrices and metrics.

mod features;
mod metrics;
mod protocol;
mod rank;
mod report;
mod saved;

pub use features::{prepare, CorpusView, Dataset, FeatureConfig, FeatureSpace, SplitData, VocabScope};
pub use metrics::{round_to, ClassMetrics, ConfusionMatrix, Metrics};
pub use protocol::{
    keyword_baseline, keyword_evaluate, loocv, loocv_by, predict_test, ClassifierKind, Evaluation, ExperimentSpec,
    KEYWORD_PREFIX,
};
pub use rank::{rank_terms, Direction, RankedTerm};
pub use report::{
    featurize, run_cv, run_test, EvalReport, PredictionRecord, Protocol, TableRow, REPORT_DECIMALS, UNDEFINED,
};
pub use saved::{SavedModel, MODEL_FORMAT, MODEL_VERSION};
