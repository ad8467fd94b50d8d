use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::ClassId;
use crate::error::{Error, Result};

/// Tallies of (true, predicted) pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    classes: Vec<ClassId>,
    /// `counts[t][p]`: documents of class `classes[t]` predicted as `classes[p]`.
    counts: Vec<Vec<usize>>,
}

impl ConfusionMatrix {
    pub fn new(classes: &[ClassId]) -> Self {
        ConfusionMatrix {
            classes: classes.to_vec(),
            counts: vec![vec![0; classes.len()]; classes.len()],
        }
    }

    /// Tallies paired truth/prediction slices.
    pub fn from_pairs(classes: &[ClassId], truth: &[ClassId], predicted: &[ClassId]) -> Result<Self> {
        if truth.len() != predicted.len() {
            return Err(Error::InvalidParameter(format!(
                "{} labels for {} predictions",
                truth.len(),
                predicted.len()
            )));
        }
        let mut cm = Self::new(classes);
        for (&t, &p) in truth.iter().zip(predicted) {
            cm.add(t, p)?;
        }
        Ok(cm)
    }

    /// Builds a matrix from a square table of counts.
    pub fn from_counts(classes: &[ClassId], counts: Vec<Vec<usize>>) -> Result<Self> {
        if counts.len() != classes.len() || counts.iter().any(|r| r.len() != classes.len()) {
            return Err(Error::InvalidParameter("confusion table must be square".into()));
        }
        Ok(ConfusionMatrix {
            classes: classes.to_vec(),
            counts,
        })
    }

    pub fn add(&mut self, truth: ClassId, predicted: ClassId) -> Result<()> {
        let t = self.position(truth)?;
        let p = self.position(predicted)?;
        self.counts[t][p] += 1;
        Ok(())
    }

    fn position(&self, class: ClassId) -> Result<usize> {
        self.classes
            .iter()
            .position(|&c| c == class)
            .ok_or_else(|| Error::InvalidParameter(format!("class {class} not in confusion matrix")))
    }

    pub fn classes(&self) -> &[ClassId] {
        &self.classes
    }

    pub fn counts(&self) -> &[Vec<usize>] {
        &self.counts
    }

    pub fn get(&self, truth: ClassId, predicted: ClassId) -> usize {
        match (self.position(truth), self.position(predicted)) {
            (Ok(t), Ok(p)) => self.counts[t][p],
            _ => 0,
        }
    }

    pub fn total(&self) -> usize {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> usize {
        (0..self.classes.len()).map(|i| self.counts[i][i]).sum()
    }

    /// Accuracy plus per-class precision, recall and F1.
    pub fn metrics(&self, positive_class: ClassId) -> Result<Metrics> {
        let total = self.total();
        if total == 0 {
            return Err(Error::EmptyEvaluation);
        }
        let k = self.classes.len();
        let mut per_class = BTreeMap::new();
        for (c, &class) in self.classes.iter().enumerate() {
            let tp = self.counts[c][c];
            let predicted: usize = (0..k).map(|t| self.counts[t][c]).sum();
            let actual: usize = self.counts[c].iter().sum();
            let precision = ratio(tp, predicted);
            let recall = ratio(tp, actual);
            let f1 = match (precision, recall) {
                (Some(p), Some(r)) if p + r > 0.0 => Some(2.0 * p * r / (p + r)),
                _ => None,
            };
            per_class.insert(
                class,
                ClassMetrics {
                    precision: precision.unwrap_or(0.0),
                    recall: recall.unwrap_or(0.0),
                    f1: f1.unwrap_or(0.0),
                    support: actual,
                    precision_defined: precision.is_some(),
                    recall_defined: recall.is_some(),
                    f1_defined: f1.is_some(),
                },
            );
        }
        Ok(Metrics {
            accuracy: self.trace() as f64 / total as f64,
            per_class,
            positive_class,
            n: total,
        })
    }
}

fn ratio(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

/// Precision, recall and F1 of one class. Undefined quantities (zero
/// denominators) are stored as 0 with the matching flag cleared.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// True members of the class.
    pub support: usize,
    pub precision_defined: bool,
    pub recall_defined: bool,
    pub f1_defined: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub accuracy: f64,
    pub per_class: BTreeMap<ClassId, ClassMetrics>,
    /// Class whose scores are the headline binary precision/recall/F1.
    pub positive_class: ClassId,
    /// Number of evaluated documents.
    pub n: usize,
}

impl Metrics {
    pub fn class(&self, class: ClassId) -> Option<&ClassMetrics> {
        self.per_class.get(&class)
    }

    /// Metrics of the positive class.
    pub fn headline(&self) -> Option<&ClassMetrics> {
        self.class(self.positive_class)
    }

    pub fn f1(&self) -> f64 {
        self.headline().map_or(0.0, |m| m.f1)
    }

    pub fn precision(&self) -> f64 {
        self.headline().map_or(0.0, |m| m.precision)
    }

    pub fn recall(&self) -> f64 {
        self.headline().map_or(0.0, |m| m.recall)
    }

    /// Copy with every score rounded to `decimals` places.
    pub fn rounded(&self, decimals: i32) -> Metrics {
        let r = |v: f64| round_to(v, decimals);
        Metrics {
            accuracy: r(self.accuracy),
            per_class: self
                .per_class
                .iter()
                .map(|(&c, m)| {
                    (
                        c,
                        ClassMetrics {
                            precision: r(m.precision),
                            recall: r(m.recall),
                            f1: r(m.f1),
                            ..m.clone()
                        },
                    )
                })
                .collect(),
            ..self.clone()
        }
    }
}

pub fn round_to(v: f64, decimals: i32) -> f64 {
    let scale = 10f64.powi(decimals);
    (v * scale).round() / scale
}
