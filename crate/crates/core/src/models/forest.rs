//! Random forest of fully grown Gini trees on count features.
//!
//! Splits have the form `x[term] <= t` with `t` a midpoint between two
//! consecutive distinct values observed at the node. At each node features
//! are drawn without replacement until `n_try` of them vary across the
//! node's samples and the best split among them lowers the impurity; if it
//! does not, drawing continues until one does or the features run out.
//! A node becomes a leaf only when it is pure or no feature lowers its
//! impurity. Ties between splits go to the lowest column, then the lowest
//! threshold.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_labels, majority, Classifier};
use crate::corpus::ClassId;
use crate::error::{Error, Result};
use crate::textpipe::{Dtm, SparseRow};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ForestConfig {
    pub n_tree: usize,
    /// Features tried per node; `None` means `floor(sqrt(d))`.
    pub n_try: Option<usize>,
    pub seed: u64,
    /// Train each tree on a bootstrap sample. Disabling it gives every tree
    /// the full training set.
    pub bootstrap: bool,
}

impl Default for ForestConfig {
    fn default() -> Self {
        ForestConfig {
            n_tree: 500,
            n_try: None,
            seed: 42,
            bootstrap: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Node {
    Split {
        feature: u32,
        threshold: f64,
        left: u32,
        right: u32,
    },
    Leaf {
        class: ClassId,
    },
}

/// Node array in depth-first pre-order; node 0 is the root.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    nodes: Vec<Node>,
}

impl Tree {
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// Index of the leaf node reached by `x`.
    pub fn leaf_index(&self, x: &SparseRow) -> usize {
        let mut at = 0;
        while let Node::Split {
            feature,
            threshold,
            left,
            right,
        } = self.nodes[at]
        {
            at = if x.get(feature as usize) <= threshold {
                left as usize
            } else {
                right as usize
            };
        }
        at
    }

    pub fn predict(&self, x: &SparseRow) -> ClassId {
        match self.nodes[self.leaf_index(x)] {
            Node::Leaf { class } => class,
            Node::Split { .. } => unreachable!(),
        }
    }

    pub fn depth(&self) -> usize {
        fn go(nodes: &[Node], at: usize) -> usize {
            match nodes[at] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + go(nodes, left as usize).max(go(nodes, right as usize)),
            }
        }
        go(&self.nodes, 0)
    }

    pub fn n_leaves(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, Node::Leaf { .. })).count()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RfModel {
    classes: Vec<ClassId>,
    trees: Vec<Tree>,
    n_try: usize,
    seed: u64,
    oob_accuracy: Option<f64>,
}

impl RfModel {
    pub fn train(dtm: &Dtm, labels: &[ClassId], classes: &[ClassId], cfg: &ForestConfig) -> Result<Self> {
        check_labels(dtm, labels, classes)?;
        let d = dtm.n_terms();
        if d == 0 {
            return Err(Error::EmptyVocabulary);
        }
        let n_try = cfg.n_try.unwrap_or(((d as f64).sqrt().floor() as usize).max(1));
        if cfg.n_tree == 0 || n_try == 0 || n_try > d {
            return Err(Error::InvalidParameter(format!(
                "need n_tree >= 1 and 1 <= n_try <= {d}"
            )));
        }

        let n = dtm.n_docs();
        // column-major dense copy: a feature's values are contiguous
        let mut columns = vec![0.0; n * d];
        for (i, row) in dtm.rows().iter().enumerate() {
            for (j, v) in row.iter() {
                columns[j * n + i] = v;
            }
        }
        let y: Vec<usize> = labels
            .iter()
            .map(|l| classes.iter().position(|c| c == l).unwrap())
            .collect();
        let data = TrainData {
            columns: &columns,
            n,
            d,
            y: &y,
            n_classes: classes.len(),
        };

        let grown: Vec<(Tree, Vec<usize>)> = (0..cfg.n_tree)
            .into_par_iter()
            .map(|t| {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                rng.set_stream(t as u64);
                let sample: Vec<usize> = if cfg.bootstrap {
                    (0..n).map(|_| rng.random_range(0..n)).collect()
                } else {
                    (0..n).collect()
                };
                let mut builder = Builder {
                    data: &data,
                    n_try,
                    rng,
                    nodes: Vec::new(),
                    features: (0..d as u32).collect(),
                };
                let mut idx = sample.clone();
                builder.grow(&mut idx);
                let mut tree = Tree { nodes: builder.nodes };
                for node in &mut tree.nodes {
                    if let Node::Leaf { class } = node {
                        *class = classes[*class];
                    }
                }
                let mut in_bag = vec![false; n];
                for &i in &sample {
                    in_bag[i] = true;
                }
                let oob = (0..n).filter(|&i| !in_bag[i]).collect();
                (tree, oob)
            })
            .collect();

        let mut votes = vec![vec![0usize; classes.len()]; n];
        for (tree, oob) in &grown {
            for &i in oob {
                let c = tree.predict(dtm.row(i));
                votes[i][classes.iter().position(|&x| x == c).unwrap()] += 1;
            }
        }
        let voted: Vec<usize> = (0..n).filter(|&i| votes[i].iter().any(|&v| v > 0)).collect();
        let oob_accuracy = (!voted.is_empty()).then(|| {
            let correct = voted.iter().filter(|&&i| majority(&votes[i]) == y[i]).count();
            correct as f64 / voted.len() as f64
        });

        Ok(RfModel {
            classes: classes.to_vec(),
            trees: grown.into_iter().map(|(t, _)| t).collect(),
            n_try,
            seed: cfg.seed,
            oob_accuracy,
        })
    }

    /// Forest assembled from existing trees.
    pub fn from_trees(classes: Vec<ClassId>, trees: Vec<Tree>) -> Self {
        RfModel {
            classes,
            trees,
            n_try: 0,
            seed: 0,
            oob_accuracy: None,
        }
    }

    pub fn trees(&self) -> &[Tree] {
        &self.trees
    }

    pub fn n_try(&self) -> usize {
        self.n_try
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Accuracy of out-of-bag majority votes over the rows that were left
    /// out of at least one bootstrap sample.
    pub fn oob_accuracy(&self) -> Option<f64> {
        self.oob_accuracy
    }

    /// Tree votes per class, in class order.
    pub fn votes(&self, x: &SparseRow) -> Vec<usize> {
        let mut votes = vec![0; self.classes.len()];
        for tree in &self.trees {
            let c = tree.predict(x);
            votes[self.classes.iter().position(|&k| k == c).unwrap()] += 1;
        }
        votes
    }
}

impl Classifier for RfModel {
    fn predict(&self, x: &SparseRow) -> ClassId {
        self.classes[majority(&self.votes(x))]
    }

    fn classes(&self) -> &[ClassId] {
        &self.classes
    }
}

struct TrainData<'a> {
    columns: &'a [f64],
    n: usize,
    d: usize,
    y: &'a [usize],
    n_classes: usize,
}

impl TrainData<'_> {
    fn value(&self, feature: usize, row: usize) -> f64 {
        self.columns[feature * self.n + row]
    }
}

/// Candidate split. `left_sq / left_n + right_sq / right_n` (sums of squared
/// class counts) is what the Gini criterion maximises.
#[derive(Clone, Copy)]
struct Candidate {
    feature: usize,
    threshold: f64,
    left_sq: u64,
    left_n: u64,
    right_sq: u64,
    right_n: u64,
}

impl Candidate {
    /// Compares purity scores exactly in integers.
    fn cmp_score(&self, other: &Candidate) -> Ordering {
        let num = |c: &Candidate| c.left_sq as u128 * c.right_n as u128 + c.right_sq as u128 * c.left_n as u128;
        let den = |c: &Candidate| c.left_n as u128 * c.right_n as u128;
        (num(self) * den(other)).cmp(&(num(other) * den(self)))
    }

    fn better_than(&self, other: &Candidate) -> bool {
        match self.cmp_score(other) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => (self.feature, self.threshold) < (other.feature, other.threshold),
        }
    }
}

struct Builder<'a> {
    data: &'a TrainData<'a>,
    n_try: usize,
    rng: ChaCha8Rng,
    nodes: Vec<Node>,
    features: Vec<u32>,
}

impl Builder<'_> {
    fn grow(&mut self, idx: &mut [usize]) -> u32 {
        let at = self.nodes.len() as u32;
        let mut counts = vec![0usize; self.data.n_classes];
        for &i in idx.iter() {
            counts[self.data.y[i]] += 1;
        }
        let leaf = Node::Leaf {
            class: majority(&counts),
        };
        self.nodes.push(leaf);
        if counts.iter().filter(|&&c| c > 0).count() < 2 {
            return at;
        }
        let Some(split) = self.best_split(idx, &counts) else {
            return at;
        };

        let (f, t) = (split.feature, split.threshold);
        let mut cut = 0;
        for k in 0..idx.len() {
            if self.data.value(f, idx[k]) <= t {
                idx.swap(k, cut);
                cut += 1;
            }
        }
        let (l, r) = idx.split_at_mut(cut);
        let left = self.grow(l);
        let right = self.grow(r);
        self.nodes[at as usize] = Node::Split {
            feature: f as u32,
            threshold: t,
            left,
            right,
        };
        at
    }

    fn best_split(&mut self, idx: &[usize], counts: &[usize]) -> Option<Candidate> {
        let m = idx.len() as u64;
        let parent_sq: u64 = counts.iter().map(|&c| (c * c) as u64).sum();
        let parent = Candidate {
            feature: usize::MAX,
            threshold: f64::INFINITY,
            left_sq: parent_sq,
            left_n: m,
            right_sq: 0,
            right_n: 1,
        };

        let d = self.data.d;
        let mut best: Option<Candidate> = None;
        let mut tried = 0;
        let mut vals: Vec<(f64, usize)> = Vec::with_capacity(idx.len());
        for drawn in 0..d {
            if tried >= self.n_try && best.is_some() {
                break;
            }
            let pick = self.rng.random_range(drawn..d);
            self.features.swap(drawn, pick);
            let f = self.features[drawn] as usize;

            let first = self.data.value(f, idx[0]);
            if idx.iter().all(|&i| self.data.value(f, i) == first) {
                continue;
            }
            tried += 1;

            vals.clear();
            vals.extend(idx.iter().map(|&i| (self.data.value(f, i), self.data.y[i])));
            vals.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut left = vec![0u64; counts.len()];
            for k in 0..vals.len() - 1 {
                left[vals[k].1] += 1;
                if vals[k].0 == vals[k + 1].0 {
                    continue;
                }
                let left_n = k as u64 + 1;
                let (mut left_sq, mut right_sq) = (0, 0);
                for (c, &total) in counts.iter().enumerate() {
                    let r = total as u64 - left[c];
                    left_sq += left[c] * left[c];
                    right_sq += r * r;
                }
                let cand = Candidate {
                    feature: f,
                    threshold: (vals[k].0 + vals[k + 1].0) / 2.0,
                    left_sq,
                    left_n,
                    right_sq,
                    right_n: m - left_n,
                };
                if cand.cmp_score(&parent) == Ordering::Greater && best.as_ref().is_none_or(|b| cand.better_than(b)) {
                    best = Some(cand);
                }
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textpipe::{Vocabulary, Weighting};
    use std::sync::Arc;

    fn dtm(rows: &[&[f64]]) -> Dtm {
        let d = rows[0].len();
        let vocab = Arc::new(Vocabulary::from_parts(
            (0..d).map(|j| format!("t{j}")).collect(),
            vec![1; d],
            rows.len(),
        ));
        Dtm::from_rows(
            vocab,
            rows.iter().map(|r| SparseRow::from_dense(r)).collect(),
            Weighting::RawTf,
            false,
        )
    }

    fn leaf(class: ClassId) -> Tree {
        Tree {
            nodes: vec![Node::Leaf { class }],
        }
    }

    #[test]
    fn vote_ties() {
        let f = RfModel::from_trees(vec![0, 1], vec![leaf(1), leaf(1), leaf(0)]);
        assert_eq!(f.predict(&SparseRow::default()), 1);
        let f = RfModel::from_trees(vec![0, 1], vec![leaf(0), leaf(1)]);
        assert_eq!(f.predict(&SparseRow::default()), 0);
        let f = RfModel::from_trees(vec![0, 1], vec![leaf(1)]);
        assert_eq!(f.predict(&SparseRow::default()), 1);
    }

    #[test]
    fn hand_tree() {
        // column 1 separates perfectly at 1.5; column 0 only partially
        let m = dtm(&[&[0.0, 1.0], &[1.0, 1.0], &[1.0, 2.0], &[2.0, 3.0]]);
        let cfg = ForestConfig {
            n_tree: 1,
            n_try: Some(2),
            bootstrap: false,
            ..Default::default()
        };
        let f = RfModel::train(&m, &[0, 0, 1, 1], &[0, 1], &cfg).unwrap();
        assert_eq!(
            f.trees()[0].nodes(),
            [
                Node::Split {
                    feature: 1,
                    threshold: 1.5,
                    left: 1,
                    right: 2
                },
                Node::Leaf { class: 0 },
                Node::Leaf { class: 1 },
            ]
        );
    }

    #[test]
    fn equal_scores_prefer_lower_column() {
        let m = dtm(&[&[0.0, 0.0], &[1.0, 1.0]]);
        let cfg = ForestConfig {
            n_tree: 1,
            n_try: Some(2),
            bootstrap: false,
            ..Default::default()
        };
        let f = RfModel::train(&m, &[0, 1], &[0, 1], &cfg).unwrap();
        assert!(matches!(
            f.trees()[0].nodes()[0],
            Node::Split {
                feature: 0,
                threshold: 0.5,
                ..
            }
        ));
    }

    #[test]
    fn separable_term_gives_perfect_fit() {
        let m = dtm(&[
            &[3.0, 1.0, 0.0],
            &[2.0, 0.0, 1.0],
            &[4.0, 1.0, 1.0],
            &[0.0, 1.0, 0.0],
            &[0.0, 0.0, 1.0],
            &[0.0, 1.0, 1.0],
        ]);
        let labels = [1, 1, 1, 0, 0, 0];
        let cfg = ForestConfig {
            n_tree: 25,
            n_try: Some(3),
            ..Default::default()
        };
        let f = RfModel::train(&m, &labels, &[0, 1], &cfg).unwrap();
        assert_eq!(f.predict_all(m.rows()), labels);
        assert_eq!(f.oob_accuracy(), Some(1.0));
    }

    #[test]
    fn seeded_determinism() {
        let m = dtm(&[&[0.0, 1.0, 2.0], &[1.0, 0.0, 0.0], &[2.0, 2.0, 1.0], &[0.0, 3.0, 1.0]]);
        let cfg = ForestConfig {
            n_tree: 20,
            n_try: Some(1),
            ..Default::default()
        };
        let a = RfModel::train(&m, &[0, 1, 1, 0], &[0, 1], &cfg).unwrap();
        let b = RfModel::train(&m, &[0, 1, 1, 0], &[0, 1], &cfg).unwrap();
        assert_eq!(a, b);
    }
}
