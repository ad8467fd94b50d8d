#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use seismotext_core::corpus::CorpusPaths;
use seismotext_core::models::forest::Node;
use seismotext_core::{ClassId, Corpus, Dtm, SparseRow, Vocabulary, Weighting};

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn shipped_corpus() -> Corpus {
    CorpusPaths::in_dir(data_dir()).load().expect("shipped corpus loads")
}

pub fn dense_dtm(rows: &[Vec<f64>], d: usize) -> Dtm {
    let vocab = Arc::new(Vocabulary::from_parts(
        (0..d).map(|j| format!("t{j}")).collect(),
        vec![1; d],
        rows.len().max(1),
    ));
    Dtm::from_rows(
        vocab,
        rows.iter().map(|r| SparseRow::from_dense(r)).collect(),
        Weighting::RawTf,
        false,
    )
}

/// Posterior by direct products: every token occurrence of every training
/// document is counted one at a time, likelihoods are multiplied once per
/// query occurrence and the result is divided by the marginal.
pub fn nb_posterior_oracle(
    docs: &[Vec<u32>],
    labels: &[ClassId],
    classes: &[ClassId],
    query: &[u32],
    uniform_prior: bool,
) -> Vec<f64> {
    let d = query.len();
    let mut joint = Vec::new();
    for &c in classes {
        let members: Vec<usize> = (0..docs.len()).filter(|&i| labels[i] == c).collect();
        let prior = if uniform_prior {
            1.0 / classes.len() as f64
        } else {
            members.len() as f64 / docs.len() as f64
        };
        let mut per_term = vec![0u32; d];
        let mut total = 0u32;
        for &i in &members {
            for (j, &count) in docs[i].iter().enumerate() {
                for _ in 0..count {
                    per_term[j] += 1;
                    total += 1;
                }
            }
        }
        let mut p = prior;
        for (j, &count) in query.iter().enumerate() {
            let lik = (per_term[j] as f64 + 1.0) / (total as f64 + d as f64);
            for _ in 0..count {
                p *= lik;
            }
        }
        joint.push(p);
    }
    let marginal: f64 = joint.iter().sum();
    joint.iter().map(|p| p / marginal).collect()
}

/// Reference CART tree in the model's node layout (pre-order), grown by
/// enumerating every column and every midpoint threshold at every node.
pub fn cart_oracle(rows: &[Vec<f64>], labels: &[ClassId], classes: &[ClassId]) -> Vec<Node> {
    let mut nodes = Vec::new();
    let idx: Vec<usize> = (0..rows.len()).collect();
    grow(rows, labels, classes, &idx, &mut nodes);
    nodes
}

fn gini(labels: &[ClassId], classes: &[ClassId], idx: &[usize]) -> f64 {
    let n = idx.len() as f64;
    1.0 - classes
        .iter()
        .map(|&c| {
            let p = idx.iter().filter(|&&i| labels[i] == c).count() as f64 / n;
            p * p
        })
        .sum::<f64>()
}

fn grow(rows: &[Vec<f64>], labels: &[ClassId], classes: &[ClassId], idx: &[usize], nodes: &mut Vec<Node>) -> u32 {
    let at = nodes.len();
    let counts: Vec<usize> = classes
        .iter()
        .map(|&c| idx.iter().filter(|&&i| labels[i] == c).count())
        .collect();
    let mut major = 0;
    for c in 1..classes.len() {
        if counts[c] > counts[major] {
            major = c;
        }
    }
    nodes.push(Node::Leaf { class: classes[major] });

    let parent = gini(labels, classes, idx);
    let n = idx.len() as f64;
    let mut best: Option<(f64, usize, f64)> = None;
    #[allow(clippy::needless_range_loop)]
    for f in 0..rows[0].len() {
        let mut values: Vec<f64> = idx.iter().map(|&i| rows[i][f]).collect();
        values.sort_by(f64::total_cmp);
        values.dedup();
        for w in values.windows(2) {
            let t = (w[0] + w[1]) / 2.0;
            let (l, r): (Vec<usize>, Vec<usize>) = idx.iter().partition(|&&i| rows[i][f] <= t);
            let child = l.len() as f64 / n * gini(labels, classes, &l) + r.len() as f64 / n * gini(labels, classes, &r);
            let gain = parent - child;
            if gain <= 1e-12 {
                continue;
            }
            let better = match best {
                None => true,
                Some((g, bf, bt)) => gain > g + 1e-12 || ((gain - g).abs() <= 1e-12 && (f, t) < (bf, bt)),
            };
            if better {
                best = Some((gain, f, t));
            }
        }
    }
    if let Some((_, f, t)) = best {
        let (l, r): (Vec<usize>, Vec<usize>) = idx.iter().partition(|&&i| rows[i][f] <= t);
        let left = grow(rows, labels, classes, &l, nodes);
        let right = grow(rows, labels, classes, &r, nodes);
        nodes[at] = Node::Split {
            feature: f as u32,
            threshold: t,
            left,
            right,
        };
    }
    at as u32
}
