//! Linear soft-margin SVM trained with sequential minimal optimisation.
//!
//! The dual
//!
//! ```text
//! min 1/2 a'Qa - e'a   s.t.  0 <= a_i <= C,  y'a = 0,   Q_ij = y_i y_j <x_i, x_j>
//! ```
//!
//! is solved by pairwise updates with second-order working-set selection.
//! The primal weights are recovered as `w = sum_i a_i y_i x_i`.

use serde::{Deserialize, Serialize};

use super::{check_labels, Classifier};
use crate::corpus::ClassId;
use crate::error::{Error, Result};
use crate::textpipe::{Dtm, SparseRow};

const TAU: f64 = 1e-12;
const CLASSES: [ClassId; 2] = [0, 1];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SvmKernel {
    #[default]
    Linear,
    Polynomial,
    Rbf,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SvmConfig {
    /// Slack penalty.
    pub c: f64,
    /// Stopping threshold on the maximal KKT violation.
    pub tol: f64,
    /// Cap on pairwise updates.
    pub max_iter: usize,
    pub kernel: SvmKernel,
}

impl Default for SvmConfig {
    fn default() -> Self {
        SvmConfig {
            c: 1.0,
            tol: 1e-4,
            max_iter: 1_000_000,
            kernel: SvmKernel::Linear,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    weights: Vec<f64>,
    bias: f64,
    slack_penalty: f64,
    solver_tolerance: f64,
    iterations: usize,
    n_support: usize,
    dual_objective: f64,
}

impl SvmModel {
    /// Labels must be 0 or 1; class 1 maps to +1.
    pub fn train(dtm: &Dtm, labels: &[ClassId], classes: &[ClassId], cfg: &SvmConfig) -> Result<Self> {
        if cfg.kernel != SvmKernel::Linear {
            return Err(Error::NotImplemented(format!("{:?} SVM kernel", cfg.kernel)));
        }
        if classes.len() > 2 {
            return Err(Error::NotImplemented("multi-class SVM".into()));
        }
        if let Some(&bad) = labels.iter().chain(classes).find(|&&l| l > 1) {
            return Err(Error::NonBinaryLabels(bad));
        }
        check_labels(dtm, labels, &CLASSES)?;
        if cfg.c.is_nan() || cfg.c <= 0.0 || cfg.tol.is_nan() || cfg.tol <= 0.0 {
            return Err(Error::InvalidParameter("C and tol must be > 0".into()));
        }
        let y: Vec<f64> = labels.iter().map(|&l| if l == 1 { 1.0 } else { -1.0 }).collect();
        let sol = smo(dtm.rows(), &y, cfg)?;

        let mut weights = vec![0.0; dtm.n_terms()];
        for (i, row) in dtm.rows().iter().enumerate() {
            if sol.alpha[i] > 0.0 {
                for (j, v) in row.iter() {
                    weights[j] += sol.alpha[i] * y[i] * v;
                }
            }
        }
        let norm_sq: f64 = weights.iter().map(|w| w * w).sum();
        Ok(SvmModel {
            weights,
            bias: sol.bias,
            slack_penalty: cfg.c,
            solver_tolerance: cfg.tol,
            iterations: sol.iterations,
            n_support: sol.alpha.iter().filter(|&&a| a > 0.0).count(),
            dual_objective: sol.alpha.iter().sum::<f64>() - 0.5 * norm_sq,
        })
    }

    pub fn from_parts(weights: Vec<f64>, bias: f64) -> Self {
        SvmModel {
            weights,
            bias,
            slack_penalty: 1.0,
            solver_tolerance: 0.0,
            iterations: 0,
            n_support: 0,
            dual_objective: f64::NAN,
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }

    pub fn slack_penalty(&self) -> f64 {
        self.slack_penalty
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn n_support(&self) -> usize {
        self.n_support
    }

    /// Dual objective at the returned solution; a lower bound on the
    /// primal optimum.
    pub fn dual_objective(&self) -> f64 {
        self.dual_objective
    }

    /// `w.x + b`
    pub fn decision_value(&self, x: &SparseRow) -> f64 {
        x.iter()
            .filter(|&(j, _)| j < self.weights.len())
            .map(|(j, v)| v * self.weights[j])
            .sum::<f64>()
            + self.bias
    }

    /// Sum of hinge losses over a labelled set (labels 0/1).
    pub fn hinge_loss(&self, rows: &[SparseRow], labels: &[ClassId]) -> f64 {
        rows.iter()
            .zip(labels)
            .map(|(r, &l)| {
                let y = if l == 1 { 1.0 } else { -1.0 };
                (1.0 - y * self.decision_value(r)).max(0.0)
            })
            .sum()
    }

    /// `1/2 |w|^2 + C * total hinge loss`
    pub fn primal_objective(&self, rows: &[SparseRow], labels: &[ClassId]) -> f64 {
        let norm_sq: f64 = self.weights.iter().map(|w| w * w).sum();
        0.5 * norm_sq + self.slack_penalty * self.hinge_loss(rows, labels)
    }
}

impl Classifier for SvmModel {
    fn predict(&self, x: &SparseRow) -> ClassId {
        if self.decision_value(x) >= 0.0 {
            1
        } else {
            0
        }
    }

    fn classes(&self) -> &[ClassId] {
        &CLASSES
    }
}

struct Solution {
    alpha: Vec<f64>,
    bias: f64,
    iterations: usize,
}

fn smo(rows: &[SparseRow], y: &[f64], cfg: &SvmConfig) -> Result<Solution> {
    let n = rows.len();
    let c = cfg.c;
    let mut gram = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let k = rows[i].dot(&rows[j]);
            gram[i * n + j] = k;
            gram[j * n + i] = k;
        }
    }
    let kd = |i: usize| gram[i * n + i];

    let mut alpha = vec![0.0; n];
    // gradient of the dual objective: Q a - e
    let mut grad = vec![-1.0; n];
    let upper = |a: f64| a >= c;
    let lower = |a: f64| a <= 0.0;

    let mut iterations = 0;
    loop {
        // i: maximal violator in I_up
        let mut g_max = f64::NEG_INFINITY;
        let mut i_sel = None;
        for t in 0..n {
            let in_up = if y[t] > 0.0 { !upper(alpha[t]) } else { !lower(alpha[t]) };
            if in_up && -y[t] * grad[t] >= g_max {
                g_max = -y[t] * grad[t];
                i_sel = Some(t);
            }
        }
        let Some(i) = i_sel else { break };

        // j: second-order choice over I_low
        let mut g_max2 = f64::NEG_INFINITY;
        let mut j_sel = None;
        let mut best_obj = f64::INFINITY;
        for t in 0..n {
            let in_low = if y[t] > 0.0 { !lower(alpha[t]) } else { !upper(alpha[t]) };
            if !in_low {
                continue;
            }
            let yg = y[t] * grad[t];
            g_max2 = g_max2.max(yg);
            let diff = g_max + yg;
            if diff > 0.0 {
                let mut quad = kd(i) + kd(t) - 2.0 * gram[i * n + t];
                if quad <= 0.0 {
                    quad = TAU;
                }
                let obj = -(diff * diff) / quad;
                if obj <= best_obj {
                    best_obj = obj;
                    j_sel = Some(t);
                }
            }
        }
        let Some(j) = j_sel else { break };
        if g_max + g_max2 < cfg.tol {
            break;
        }
        if iterations >= cfg.max_iter {
            return Err(Error::NonConvergence { iterations });
        }
        iterations += 1;

        let (old_i, old_j) = (alpha[i], alpha[j]);
        let kij = gram[i * n + j];
        if y[i] != y[j] {
            let mut quad = kd(i) + kd(j) - 2.0 * kij;
            if quad <= 0.0 {
                quad = TAU;
            }
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if diff > 0.0 {
                if alpha[j] < 0.0 {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if diff > 0.0 {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if alpha[j] > c {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            let mut quad = kd(i) + kd(j) - 2.0 * kij;
            if quad <= 0.0 {
                quad = TAU;
            }
            let delta = (grad[i] - grad[j]) / quad;
            let sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if sum > c {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if alpha[j] < 0.0 {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if sum > c {
                if alpha[j] > c {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }

        let (di, dj) = (alpha[i] - old_i, alpha[j] - old_j);
        for t in 0..n {
            grad[t] += y[t] * (y[i] * gram[i * n + t] * di + y[j] * gram[j * n + t] * dj);
        }
    }

    // bias from free vectors, else midpoint of the feasible interval
    let (mut ub, mut lb) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut n_free, mut sum_free) = (0usize, 0.0);
    for t in 0..n {
        let yg = y[t] * grad[t];
        if upper(alpha[t]) {
            if y[t] < 0.0 {
                ub = ub.min(yg)
            } else {
                lb = lb.max(yg)
            }
        } else if lower(alpha[t]) {
            if y[t] > 0.0 {
                ub = ub.min(yg)
            } else {
                lb = lb.max(yg)
            }
        } else {
            n_free += 1;
            sum_free += yg;
        }
    }
    let rho = if n_free > 0 {
        sum_free / n_free as f64
    } else if ub.is_finite() && lb.is_finite() {
        (ub + lb) / 2.0
    } else {
        0.0
    };

    Ok(Solution {
        alpha,
        bias: -rho,
        iterations,
    })
}
