use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordered set of distinct stems with their document frequencies.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "VocabularyParts", into = "VocabularyParts")]
pub struct Vocabulary {
    terms: Vec<String>,
    index: HashMap<String, usize>,
    doc_freq: Vec<usize>,
    n_docs: usize,
}

#[derive(Serialize, Deserialize)]
struct VocabularyParts {
    terms: Vec<String>,
    doc_freq: Vec<usize>,
    n_docs: usize,
}

impl From<VocabularyParts> for Vocabulary {
    fn from(p: VocabularyParts) -> Self {
        Vocabulary::from_parts(p.terms, p.doc_freq, p.n_docs)
    }
}

impl From<Vocabulary> for VocabularyParts {
    fn from(v: Vocabulary) -> Self {
        VocabularyParts {
            terms: v.terms,
            doc_freq: v.doc_freq,
            n_docs: v.n_docs,
        }
    }
}

impl Vocabulary {
    /// Builds a vocabulary from per-document token lists, keeping terms whose
    /// corpus-wide occurrence count is at least `min_term_freq`. Terms are
    /// ordered by first occurrence.
    pub fn build(token_lists: &[Vec<String>], min_term_freq: usize) -> Result<Self> {
        if min_term_freq == 0 {
            return Err(Error::InvalidParameter("min_term_freq must be >= 1".into()));
        }
        let mut order: Vec<&str> = Vec::new();
        let mut stats: HashMap<&str, (usize, usize, usize)> = HashMap::new();
        for (doc, tokens) in token_lists.iter().enumerate() {
            for t in tokens {
                let entry = stats.entry(t.as_str()).or_insert_with(|| {
                    order.push(t.as_str());
                    (0, 0, usize::MAX)
                });
                entry.0 += 1;
                if entry.2 != doc {
                    entry.1 += 1;
                    entry.2 = doc;
                }
            }
        }
        let (terms, doc_freq): (Vec<String>, Vec<usize>) = order
            .into_iter()
            .filter_map(|t| {
                let (total, df, _) = stats[t];
                (total >= min_term_freq).then(|| (t.to_string(), df))
            })
            .unzip();
        if terms.is_empty() {
            return Err(Error::EmptyVocabulary);
        }
        Ok(Self::from_parts(terms, doc_freq, token_lists.len()))
    }

    pub fn from_parts(terms: Vec<String>, doc_freq: Vec<usize>, n_docs: usize) -> Self {
        let index = terms.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        Vocabulary {
            terms,
            index,
            doc_freq,
            n_docs,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn term(&self, id: usize) -> Option<&str> {
        self.terms.get(id).map(String::as_str)
    }

    pub fn id(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    /// Number of source documents containing each term.
    pub fn doc_freq(&self) -> &[usize] {
        &self.doc_freq
    }

    /// Number of documents the vocabulary was built from.
    pub fn n_docs(&self) -> usize {
        self.n_docs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn docs(v: &[&[&str]]) -> Vec<Vec<String>> {
        v.iter().map(|d| d.iter().map(|s| s.to_string()).collect()).collect()
    }

    #[test]
    fn first_occurrence_order_and_doc_freq() {
        let d = docs(&[&["a-term", "a-term"], &["b-term"]]);
        let v = Vocabulary::build(&d, 1).unwrap();
        assert_eq!(v.terms(), ["a-term", "b-term"]);
        assert_eq!(v.doc_freq(), [1, 1]);
        assert_eq!(v.id("b-term"), Some(1));
    }

    #[test]
    fn min_frequency_threshold() {
        let d = docs(&[&["a-term", "a-term"], &["b-term"]]);
        let v = Vocabulary::build(&d, 2).unwrap();
        assert_eq!(v.terms(), ["a-term"]);
        assert!(matches!(Vocabulary::build(&d, 3), Err(Error::EmptyVocabulary)));
    }

    #[test]
    fn serde_rebuilds_index() {
        let d = docs(&[&["x", "y"], &["y"]]);
        let v = Vocabulary::build(&d, 1).unwrap();
        let json = serde_json::to_string(&v).unwrap();
        let back: Vocabulary = serde_json::from_str(&json).unwrap();
        assert_eq!(back, v);
        assert_eq!(back.id("y"), Some(1));
        assert_eq!(back.doc_freq(), [1, 2]);
    }
}
