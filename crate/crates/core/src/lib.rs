//! Supervised bag-of-words text classification for small, labelled
//! scientific corpora.
//!
//! The crate is organised as a pipeline:
//!
//! * [`corpus`] loads article metadata and class labels from JSON, checks
//!   cross references and splits the corpus by publication year.
//! * [`textpipe`] turns text into a sparse document-term matrix
//!   (tokenizer, stopword list, Snowball English stemmer, tf / tf-idf).
//! * [`models`] holds the classifiers: multinomial naive Bayes, weighted
//!   k-nearest neighbours, a linear SVM, a random forest, plus k-means.
//! * [`eval`] runs leave-one-out cross-validation and held-out prediction
//!   and computes confusion matrices and per-class metrics.

pub mod corpus;
pub mod error;
pub mod eval;
pub mod models;
pub mod textpipe;

pub use corpus::{ClassId, Corpus, Document, LabelSet, Scheme};
pub use error::{Error, Result};
pub use eval::{ConfusionMatrix, EvalReport, ExperimentSpec, Metrics};
pub use models::{Classifier, ModelConfig, TrainedModel};
pub use textpipe::{Dtm, SparseRow, Vocabulary, Weighting};
