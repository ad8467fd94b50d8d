use std::path::PathBuf;

use crate::corpus::{ClassId, Scheme};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("malformed JSON in {source_name} at byte {offset}: {message}")]
    MalformedJson {
        source_name: String,
        offset: usize,
        message: String,
    },

    #[error("label refID `{ref_id}` in {source_name} does not match any document")]
    UnresolvedRefId { ref_id: String, source_name: String },

    #[error("duplicate refID `{0}`")]
    DuplicateRefId(String),

    #[error("document `{ref_id}` has no {scheme} label")]
    MissingLabel { ref_id: String, scheme: Scheme },

    #[error("invalid {scheme} label `{value}` for `{ref_id}`")]
    InvalidLabel {
        ref_id: String,
        scheme: Scheme,
        value: String,
    },

    #[error("binary label {binary} is inconsistent with multiclass label {multiclass} for `{ref_id}`")]
    InconsistentLabels {
        ref_id: String,
        binary: ClassId,
        multiclass: ClassId,
    },

    #[error("invalid document `{ref_id}`: {reason}")]
    InvalidDocument { ref_id: String, reason: String },

    #[error("vocabulary is empty")]
    EmptyVocabulary,

    #[error("class {0} has no training documents")]
    EmptyClass(ClassId),

    #[error("term id {0} is not in the vocabulary")]
    UnknownTerm(usize),

    #[error("labels must be binary (0/1), found {0}")]
    NonBinaryLabels(ClassId),

    #[error("solver did not converge after {iterations} updates")]
    NonConvergence { iterations: usize },

    #[error("training set is empty")]
    EmptyTrainingSet,

    #[error("nothing to evaluate: the evaluation set is empty")]
    EmptyEvaluation,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("not implemented: {0}")]
    NotImplemented(String),

    #[error("fold {index} failed: {source}")]
    Fold {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
