use std::collections::BTreeMap;
use std::io::Write;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::Vocabulary;
use crate::error::Result;

/// Sparse vector with strictly increasing column ids and no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SparseRow {
    indices: Vec<u32>,
    values: Vec<f64>,
}

impl SparseRow {
    /// Builds a row from `(column, value)` pairs in any order. Duplicate
    /// columns are summed and zeros dropped.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, f64)>) -> Self {
        let mut acc: BTreeMap<usize, f64> = BTreeMap::new();
        for (j, v) in pairs {
            *acc.entry(j).or_insert(0.0) += v;
        }
        let (indices, values) = acc
            .into_iter()
            .filter(|(_, v)| *v != 0.0)
            .map(|(j, v)| (j as u32, v))
            .unzip();
        SparseRow { indices, values }
    }

    /// Dense to sparse.
    pub fn from_dense(dense: &[f64]) -> Self {
        Self::from_pairs(dense.iter().copied().enumerate())
    }

    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.indices.iter().zip(&self.values).map(|(&j, &v)| (j as usize, v))
    }

    pub fn get(&self, col: usize) -> f64 {
        match self.indices.binary_search(&(col as u32)) {
            Ok(pos) => self.values[pos],
            Err(_) => 0.0,
        }
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.indices.last().map(|&j| j as usize)
    }

    pub fn dot(&self, other: &SparseRow) -> f64 {
        let (mut i, mut j, mut acc) = (0, 0, 0.0);
        while i < self.indices.len() && j < other.indices.len() {
            match self.indices[i].cmp(&other.indices[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc += self.values[i] * other.values[j];
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }

    pub fn dot_dense(&self, dense: &[f64]) -> f64 {
        self.iter().map(|(j, v)| v * dense[j]).sum()
    }

    /// Squared Euclidean distance, computed by merging both supports so that
    /// identical rows give exactly zero.
    pub fn squared_distance(&self, other: &SparseRow) -> f64 {
        let (mut i, mut j, mut acc) = (0, 0, 0.0);
        let (a, b) = (&self.indices, &other.indices);
        while i < a.len() || j < b.len() {
            let d = if j == b.len() || (i < a.len() && a[i] < b[j]) {
                i += 1;
                self.values[i - 1]
            } else if i == a.len() || b[j] < a[i] {
                j += 1;
                other.values[j - 1]
            } else {
                i += 1;
                j += 1;
                self.values[i - 1] - other.values[j - 1]
            };
            acc += d * d;
        }
        acc
    }

    pub fn squared_distance_dense(&self, dense: &[f64], dense_sq_norm: f64) -> f64 {
        let mut acc = dense_sq_norm;
        for (j, v) in self.iter() {
            acc += v * v - 2.0 * v * dense[j];
        }
        acc.max(0.0)
    }

    pub fn scaled(&self, factor: f64) -> SparseRow {
        SparseRow::from_pairs(self.iter().map(|(j, v)| (j, v * factor)))
    }

    pub fn map_values(&self, f: impl Fn(usize, f64) -> f64) -> SparseRow {
        SparseRow::from_pairs(self.iter().map(|(j, v)| (j, f(j, v))))
    }

    pub fn to_dense(&self, dim: usize) -> Vec<f64> {
        let mut out = vec![0.0; dim];
        for (j, v) in self.iter() {
            out[j] = v;
        }
        out
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Weighting {
    /// Raw term counts.
    #[default]
    #[serde(rename = "tf")]
    RawTf,
    /// Term count times `log10(n / n_i)`.
    #[serde(rename = "tfidf")]
    TfIdf,
}

impl std::str::FromStr for Weighting {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tf" => Ok(Weighting::RawTf),
            "tfidf" | "tf-idf" => Ok(Weighting::TfIdf),
            other => Err(crate::Error::InvalidParameter(format!("unknown weighting `{other}`"))),
        }
    }
}

/// Sparse, non-negative document-term matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Dtm {
    vocab: Arc<Vocabulary>,
    rows: Vec<SparseRow>,
    weighting: Weighting,
    normalized: bool,
}

impl Dtm {
    /// Raw term counts of `token_lists` over `vocab`. Terms outside the
    /// vocabulary are dropped.
    pub fn build(token_lists: &[Vec<String>], vocab: Arc<Vocabulary>) -> Self {
        let rows = token_lists
            .iter()
            .map(|tokens| SparseRow::from_pairs(tokens.iter().filter_map(|t| vocab.id(t)).map(|j| (j, 1.0))))
            .collect();
        Dtm {
            vocab,
            rows,
            weighting: Weighting::RawTf,
            normalized: false,
        }
    }

    pub fn from_rows(vocab: Arc<Vocabulary>, rows: Vec<SparseRow>, weighting: Weighting, normalized: bool) -> Self {
        debug_assert!(rows.iter().all(|r| r.max_index().is_none_or(|j| j < vocab.len())));
        Dtm {
            vocab,
            rows,
            weighting,
            normalized,
        }
    }

    pub fn n_docs(&self) -> usize {
        self.rows.len()
    }

    pub fn n_terms(&self) -> usize {
        self.vocab.len()
    }

    pub fn vocab(&self) -> &Arc<Vocabulary> {
        &self.vocab
    }

    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &SparseRow {
        &self.rows[i]
    }

    pub fn weighting(&self) -> Weighting {
        self.weighting
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Multiplies counts by `log10(n / n_j)` where `n` and `n_j` come from the
    /// vocabulary. Terms present in every document vanish.
    pub fn tfidf(&self) -> Dtm {
        let n = self.vocab.n_docs() as f64;
        let df = self.vocab.doc_freq();
        let idf: Vec<f64> = df
            .iter()
            .map(|&d| if d == 0 { 0.0 } else { (n / d as f64).log10() })
            .collect();
        let rows = self.rows.iter().map(|r| r.map_values(|j, v| v * idf[j])).collect();
        Dtm {
            rows,
            weighting: Weighting::TfIdf,
            ..self.clone()
        }
    }

    /// Scales every non-empty row to unit Euclidean norm.
    pub fn normalize_rows(&self) -> Dtm {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let norm = r.norm();
                if norm > 0.0 {
                    r.scaled(1.0 / norm)
                } else {
                    r.clone()
                }
            })
            .collect();
        Dtm {
            rows,
            normalized: true,
            ..self.clone()
        }
    }

    /// Rows in the given order, sharing the vocabulary.
    pub fn select(&self, rows: &[usize]) -> Dtm {
        Dtm {
            rows: rows.iter().map(|&i| self.rows[i].clone()).collect(),
            ..self.clone_empty()
        }
    }

    fn clone_empty(&self) -> Dtm {
        Dtm {
            vocab: Arc::clone(&self.vocab),
            rows: Vec::new(),
            weighting: self.weighting,
            normalized: self.normalized,
        }
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(SparseRow::nnz).sum()
    }

    /// Matrix Market coordinate format, 1-based indices.
    pub fn write_matrix_market<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
        writeln!(w, "{} {} {}", self.n_docs(), self.n_terms(), self.nnz())?;
        for (i, row) in self.rows.iter().enumerate() {
            for (j, v) in row.iter() {
                writeln!(w, "{} {} {}", i + 1, j + 1, v)?;
            }
        }
        Ok(())
    }

    /// One term per line, in column order.
    pub fn write_vocabulary<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for t in self.vocab.terms() {
            writeln!(w, "{t}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vocab(terms: &[&str], df: &[usize], n: usize) -> Arc<Vocabulary> {
        Arc::new(Vocabulary::from_parts(
            terms.iter().map(|s| s.to_string()).collect(),
            df.to_vec(),
            n,
        ))
    }

    fn toks(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn counts_and_oov() {
        let v = vocab(&["x", "y"], &[1, 1], 1);
        let dtm = Dtm::build(&[toks(&["x", "x", "y"]), toks(&["zz", "qq"])], v);
        assert_eq!(dtm.row(0).to_dense(2), vec![2.0, 1.0]);
        assert!(dtm.row(1).is_empty());
        assert_eq!(dtm.weighting(), Weighting::RawTf);
        assert!(!dtm.is_normalized());
    }

    #[test]
    fn tfidf_values() {
        // n = 4, term 0 in 2 docs, term 1 in all 4
        let v = vocab(&["a", "b"], &[2, 4], 4);
        let dtm = Dtm::from_rows(
            v,
            vec![
                SparseRow::from_pairs([(0, 3.0), (1, 1.0)]),
                SparseRow::from_pairs([(0, 1.0), (1, 2.0)]),
                SparseRow::from_pairs([(1, 1.0)]),
                SparseRow::from_pairs([(1, 5.0)]),
            ],
            Weighting::RawTf,
            false,
        );
        let w = dtm.tfidf();
        assert!((w.row(0).get(0) - 3.0 * 2f64.log10()).abs() < 1e-12);
        assert!((w.row(0).get(0) - 0.9031).abs() < 1e-4);
        assert!(w.rows().iter().all(|r| r.get(1) == 0.0));
        assert!(w.row(2).is_empty());
        assert_eq!(w.weighting(), Weighting::TfIdf);

        let single = Dtm::from_rows(
            vocab(&["c"], &[1], 10),
            vec![SparseRow::from_pairs([(0, 1.0)])],
            Weighting::RawTf,
            false,
        );
        assert!((single.tfidf().row(0).get(0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn normalization() {
        let v = vocab(&["a", "b"], &[1, 1], 2);
        let dtm = Dtm::from_rows(
            v,
            vec![SparseRow::from_pairs([(0, 3.0), (1, 4.0)]), SparseRow::default()],
            Weighting::RawTf,
            false,
        );
        let n = dtm.normalize_rows();
        assert!((n.row(0).get(0) - 0.6).abs() < 1e-12);
        assert!((n.row(0).get(1) - 0.8).abs() < 1e-12);
        assert!(n.row(1).is_empty());
        assert!(n.is_normalized());
        assert_eq!(n.normalize_rows().row(0), n.row(0));
    }

    #[test]
    fn sparse_ops() {
        let a = SparseRow::from_pairs([(0, 1.0), (3, 2.0)]);
        let b = SparseRow::from_pairs([(3, 1.0), (5, 2.0), (0, 0.0)]);
        assert_eq!(b.nnz(), 2);
        assert_eq!(a.dot(&b), 2.0);
        assert_eq!(a.squared_distance(&b), 1.0 + 1.0 + 4.0);
        assert_eq!(a.squared_distance(&a), 0.0);
        let dense = b.to_dense(6);
        assert!((a.squared_distance_dense(&dense, 5.0) - 6.0).abs() < 1e-12);
    }

    #[test]
    fn matrix_market_export() {
        let v = vocab(&["a", "b"], &[1, 1], 1);
        let dtm = Dtm::build(&[toks(&["b", "a", "b"])], v);
        let mut out = Vec::new();
        dtm.write_matrix_market(&mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "%%MatrixMarket matrix coordinate real general\n1 2 2\n1 1 1\n1 2 2\n"
        );
        let mut voc = Vec::new();
        dtm.write_vocabulary(&mut voc).unwrap();
        assert_eq!(voc, b"a\nb\n");
    }
}
