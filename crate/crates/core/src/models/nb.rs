//! Multinomial naive Bayes with Laplace smoothing.
//!
//! Class score for a document with term weights `x_i`:
//!
//! ```text
//! score(c) = log P(c) + sum_i x_i * log P(i|c)
//! P(i|c)   = (n_ic + alpha) / (n_c + alpha * d)
//! ```
//!
//! where `n_ic` is the pooled weight of term `i` over class-`c` documents
//! and `n_c` the pooled weight of all terms. Posteriors are the softmax of
//! the scores.

use serde::{Deserialize, Serialize};

use super::{argmax_first, check_labels, Classifier};
use crate::corpus::ClassId;
use crate::error::{Error, Result};
use crate::textpipe::{Dtm, SparseRow};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PriorMode {
    Uniform,
    /// Share of training documents in each class.
    #[default]
    DocFrequency,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NbConfig {
    pub prior: PriorMode,
    /// Laplace smoothing constant.
    pub alpha: f64,
    /// Divide each document by its total weight before pooling and before
    /// scoring.
    pub length_normalize: bool,
}

impl Default for NbConfig {
    fn default() -> Self {
        NbConfig {
            prior: PriorMode::DocFrequency,
            alpha: 1.0,
            length_normalize: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NbModel {
    classes: Vec<ClassId>,
    log_prior: Vec<f64>,
    /// `log_likelihood[c][i] = log P(i | classes[c])`
    log_likelihood: Vec<Vec<f64>>,
    alpha: f64,
    prior_mode: PriorMode,
    length_normalize: bool,
    terms: Vec<String>,
}

impl NbModel {
    /// Fits the model. Every class in `classes` needs at least one document.
    pub fn train(dtm: &Dtm, labels: &[ClassId], classes: &[ClassId], cfg: &NbConfig) -> Result<Self> {
        if cfg.alpha.is_nan() || cfg.alpha <= 0.0 {
            return Err(Error::InvalidParameter("alpha must be > 0".into()));
        }
        let d = dtm.n_terms();
        if d == 0 {
            return Err(Error::EmptyVocabulary);
        }
        check_labels(dtm, labels, classes)?;

        let k = classes.len();
        let mut term_mass = vec![vec![0.0; d]; k];
        let mut doc_count = vec![0usize; k];
        for (row, &label) in dtm.rows().iter().zip(labels) {
            let c = classes.iter().position(|&x| x == label).unwrap();
            doc_count[c] += 1;
            let scale = if cfg.length_normalize && row.sum() > 0.0 {
                1.0 / row.sum()
            } else {
                1.0
            };
            for (j, v) in row.iter() {
                term_mass[c][j] += v * scale;
            }
        }
        if let Some(c) = doc_count.iter().position(|&n| n == 0) {
            return Err(Error::EmptyClass(classes[c]));
        }

        let n_docs = labels.len() as f64;
        let log_prior = doc_count
            .iter()
            .map(|&n| match cfg.prior {
                PriorMode::Uniform => (1.0 / k as f64).ln(),
                PriorMode::DocFrequency => (n as f64 / n_docs).ln(),
            })
            .collect();
        let log_likelihood = term_mass
            .iter()
            .map(|mass| {
                let total: f64 = mass.iter().sum::<f64>() + cfg.alpha * d as f64;
                mass.iter().map(|m| ((m + cfg.alpha) / total).ln()).collect()
            })
            .collect();

        Ok(NbModel {
            classes: classes.to_vec(),
            log_prior,
            log_likelihood,
            alpha: cfg.alpha,
            prior_mode: cfg.prior,
            length_normalize: cfg.length_normalize,
            terms: dtm.vocab().terms().to_vec(),
        })
    }

    pub fn classes(&self) -> &[ClassId] {
        &self.classes
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn vocab_size(&self) -> usize {
        self.terms.len()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn prior_mode(&self) -> PriorMode {
        self.prior_mode
    }

    /// `P(c)` in class order.
    pub fn prior(&self) -> Vec<f64> {
        self.log_prior.iter().map(|l| l.exp()).collect()
    }

    /// `P(term | classes[class_idx])`.
    pub fn likelihood(&self, class_idx: usize, term: usize) -> f64 {
        self.log_likelihood[class_idx][term].exp()
    }

    /// Unnormalised log posterior per class.
    pub fn scores(&self, x: &SparseRow) -> Vec<f64> {
        let scale = if self.length_normalize && x.sum() > 0.0 {
            1.0 / x.sum()
        } else {
            1.0
        };
        self.log_prior
            .iter()
            .zip(&self.log_likelihood)
            .map(|(lp, ll)| {
                lp + x
                    .iter()
                    .filter(|&(j, _)| j < ll.len())
                    .map(|(j, v)| v * scale * ll[j])
                    .sum::<f64>()
            })
            .collect()
    }

    /// Predicted class and posterior distribution (class order).
    pub fn predict_with_posterior(&self, x: &SparseRow) -> (ClassId, Vec<f64>) {
        let scores = self.scores(x);
        let best = argmax_first(&scores);
        (self.classes[best], softmax(&scores))
    }

    /// `P(c | term)` for each class, from the likelihoods and priors.
    pub fn term_posterior(&self, term: usize) -> Result<Vec<f64>> {
        if term >= self.terms.len() {
            return Err(Error::UnknownTerm(term));
        }
        let joint: Vec<f64> = self
            .log_prior
            .iter()
            .zip(&self.log_likelihood)
            .map(|(lp, ll)| lp + ll[term])
            .collect();
        Ok(softmax(&joint))
    }
}

impl Classifier for NbModel {
    fn predict(&self, x: &SparseRow) -> ClassId {
        self.classes[argmax_first(&self.scores(x))]
    }

    fn classes(&self) -> &[ClassId] {
        &self.classes
    }
}

fn softmax(scores: &[f64]) -> Vec<f64> {
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exp: Vec<f64> = scores.iter().map(|s| (s - max).exp()).collect();
    let total: f64 = exp.iter().sum();
    exp.into_iter().map(|e| e / total).collect()
}
