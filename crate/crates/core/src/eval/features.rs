use std::path::PathBuf;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::corpus::{ClassId, Corpus, Document, Scheme};
use crate::error::{Error, Result};
use crate::textpipe::{Dtm, Preprocessor, Vocabulary, Weighting};

/// Which text of a document is classified.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CorpusView {
    /// Title, authors, abstract and keywords.
    #[default]
    Metadata,
    /// Plain-text article bodies read from `<dir>/<refID>.txt`.
    Fulltext { dir: PathBuf },
}

impl CorpusView {
    pub fn name(&self) -> &'static str {
        match self {
            CorpusView::Metadata => "metadata",
            CorpusView::Fulltext { .. } => "fulltext",
        }
    }

    pub fn text(&self, doc: &Document) -> Result<String> {
        match self {
            CorpusView::Metadata => Ok(doc.metadata_text()),
            CorpusView::Fulltext { dir } => {
                let path = dir.join(format!("{}.txt", doc.ref_id));
                std::fs::read_to_string(&path).map_err(|e| Error::io(path, e))
            }
        }
    }
}

/// Documents the vocabulary is built from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VocabScope {
    /// Every document of the corpus, training and test alike (labels are
    /// never looked at).
    #[default]
    Corpus,
    /// Training documents only; test terms outside it are dropped.
    Train,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct FeatureConfig {
    /// Shortest surface token kept.
    pub min_len: usize,
    /// Minimum corpus-wide occurrence count of a term.
    pub min_term_freq: usize,
    pub weighting: Weighting,
    /// Unit-normalise rows. `None` picks the classifier's default (on for
    /// kNN only).
    pub normalize: Option<bool>,
    pub vocab_scope: VocabScope,
    pub stemming: bool,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        FeatureConfig {
            min_len: 1,
            min_term_freq: 1,
            weighting: Weighting::RawTf,
            normalize: None,
            vocab_scope: VocabScope::Corpus,
            stemming: true,
        }
    }
}

impl FeatureConfig {
    /// Defaults for article bodies: tokens of 3+ characters, terms seen 5+
    /// times.
    pub fn fulltext() -> Self {
        FeatureConfig {
            min_len: 3,
            min_term_freq: 5,
            ..Default::default()
        }
    }

    pub fn preprocessor(&self) -> Preprocessor {
        Preprocessor {
            stemming: self.stemming,
            ..Preprocessor::with_min_len(self.min_len)
        }
    }
}

/// A fitted feature mapping: vocabulary plus weighting and normalisation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureSpace {
    pub min_len: usize,
    pub stemming: bool,
    pub weighting: Weighting,
    pub normalize: bool,
    pub vocabulary: Arc<Vocabulary>,
}

impl FeatureSpace {
    pub fn new(cfg: &FeatureConfig, normalize: bool, vocabulary: Arc<Vocabulary>) -> Self {
        FeatureSpace {
            min_len: cfg.min_len,
            stemming: cfg.stemming,
            weighting: cfg.weighting,
            normalize,
            vocabulary,
        }
    }

    pub fn preprocessor(&self) -> Preprocessor {
        Preprocessor {
            stemming: self.stemming,
            ..Preprocessor::with_min_len(self.min_len)
        }
    }

    pub fn transform_tokens(&self, tokens: &[Vec<String>]) -> Dtm {
        let mut dtm = Dtm::build(tokens, Arc::clone(&self.vocabulary));
        if self.weighting == Weighting::TfIdf {
            dtm = dtm.tfidf();
        }
        if self.normalize {
            dtm = dtm.normalize_rows();
        }
        dtm
    }

    pub fn transform<S: AsRef<str> + Sync>(&self, texts: &[S]) -> Dtm {
        self.transform_tokens(&self.preprocessor().tokens_all(texts))
    }
}

/// Featurized documents with their labels.
#[derive(Clone, Debug)]
pub struct Dataset {
    pub ref_ids: Vec<String>,
    pub years: Vec<i32>,
    pub texts: Vec<String>,
    pub labels: Vec<ClassId>,
    pub dtm: Dtm,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// Train and test sets sharing one feature space.
#[derive(Clone, Debug)]
pub struct SplitData {
    pub space: FeatureSpace,
    pub train: Dataset,
    pub test: Dataset,
}

/// Featurizes a corpus and splits it at `cutoff` (training years are
/// `<= cutoff`).
pub fn prepare(
    corpus: &Corpus,
    scheme: Scheme,
    view: &CorpusView,
    cfg: &FeatureConfig,
    normalize: bool,
    cutoff: i32,
) -> Result<SplitData> {
    let docs = corpus.documents();
    let texts = docs.iter().map(|d| view.text(d)).collect::<Result<Vec<_>>>()?;
    let tokens = cfg.preprocessor().tokens_all(&texts);
    let is_train: Vec<bool> = docs.iter().map(|d| d.year <= cutoff).collect();

    let vocabulary = match cfg.vocab_scope {
        VocabScope::Corpus => Vocabulary::build(&tokens, cfg.min_term_freq)?,
        VocabScope::Train => {
            let train_tokens: Vec<Vec<String>> = tokens
                .iter()
                .zip(&is_train)
                .filter(|(_, &t)| t)
                .map(|(tok, _)| tok.clone())
                .collect();
            Vocabulary::build(&train_tokens, cfg.min_term_freq)?
        }
    };
    let space = FeatureSpace::new(cfg, normalize, Arc::new(vocabulary));
    let dtm = space.transform_tokens(&tokens);
    let labels = corpus.labels(scheme);

    let part = |want: bool| {
        let idx: Vec<usize> = (0..docs.len()).filter(|&i| is_train[i] == want).collect();
        Dataset {
            ref_ids: idx.iter().map(|&i| docs[i].ref_id.clone()).collect(),
            years: idx.iter().map(|&i| docs[i].year).collect(),
            texts: idx.iter().map(|&i| texts[i].clone()).collect(),
            labels: idx.iter().map(|&i| labels[i]).collect(),
            dtm: dtm.select(&idx),
        }
    };
    Ok(SplitData {
        train: part(true),
        test: part(false),
        space,
    })
}
