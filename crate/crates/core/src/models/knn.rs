//! Weighted k-nearest neighbours.
//!
//! Neighbour distances are divided by the distance to the (k+1)-th nearest
//! row and passed through a kernel; the class with the largest summed weight
//! wins.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use serde::{Deserialize, Serialize};

use super::{argmax_first, check_labels, Classifier};
use crate::corpus::ClassId;
use crate::error::{Error, Result};
use crate::textpipe::{Dtm, SparseRow};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kernel {
    Rectangular,
    #[default]
    Cosine,
}

impl Kernel {
    /// Weight for a normalised distance `u`.
    pub fn weight(self, u: f64) -> f64 {
        match self {
            Kernel::Rectangular => 1.0,
            Kernel::Cosine if (0.0..=1.0).contains(&u) => FRAC_PI_4 * (FRAC_PI_2 * u).cos(),
            Kernel::Cosine => 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct KnnConfig {
    pub k: usize,
    pub kernel: Kernel,
}

impl Default for KnnConfig {
    fn default() -> Self {
        KnnConfig {
            k: 3,
            kernel: Kernel::Cosine,
        }
    }
}

/// A lazy learner: the training rows and labels themselves.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KnnModel {
    config: KnnConfig,
    classes: Vec<ClassId>,
    rows: Vec<SparseRow>,
    labels: Vec<ClassId>,
}

impl KnnModel {
    pub fn train(dtm: &Dtm, labels: &[ClassId], classes: &[ClassId], cfg: &KnnConfig) -> Result<Self> {
        check_labels(dtm, labels, classes)?;
        if cfg.k == 0 || cfg.k >= dtm.n_docs() {
            return Err(Error::InvalidParameter(format!(
                "k = {} needs 1 <= k < {} training rows",
                cfg.k,
                dtm.n_docs()
            )));
        }
        Ok(KnnModel {
            config: cfg.clone(),
            classes: classes.to_vec(),
            rows: dtm.rows().to_vec(),
            labels: labels.to_vec(),
        })
    }

    pub fn config(&self) -> &KnnConfig {
        &self.config
    }

    /// Summed kernel weight per class, in class order.
    pub fn class_weights(&self, x: &SparseRow) -> Vec<f64> {
        let k = self.config.k;
        let mut dist: Vec<(f64, usize)> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| (r.squared_distance(x).max(0.0).sqrt(), i))
            .collect();
        dist.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let scale = dist[k].0;

        let mut weights = vec![0.0; self.classes.len()];
        for &(d, i) in &dist[..k] {
            let u = if scale > 0.0 { d / scale } else { 0.0 };
            let c = self.classes.iter().position(|&c| c == self.labels[i]).unwrap();
            weights[c] += self.config.kernel.weight(u);
        }
        weights
    }
}

impl Classifier for KnnModel {
    fn predict(&self, x: &SparseRow) -> ClassId {
        self.classes[argmax_first(&self.class_weights(x))]
    }

    fn classes(&self) -> &[ClassId] {
        &self.classes
    }
}
