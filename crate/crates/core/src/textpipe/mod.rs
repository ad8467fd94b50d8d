//! Text to document-term matrix: tokenize, drop stopwords, stem, count,
//! prune and weight.

mod dtm;
mod stem;
mod tokenize;
mod vocab;

pub use dtm::{Dtm, SparseRow, Weighting};
pub use stem::{stem, stem_word};
pub use tokenize::{remove_stopwords, tokenize, StopList};
pub use vocab::Vocabulary;

/// Tokenize, remove stopwords, then stem.
///
/// The length filter applies to surface forms before stemming, and
/// stopwords are matched before stemming as well.
#[derive(Clone, Debug)]
pub struct Preprocessor {
    pub min_len: usize,
    pub stoplist: StopList,
    pub stemming: bool,
}

impl Default for Preprocessor {
    fn default() -> Self {
        Preprocessor {
            min_len: 1,
            stoplist: StopList::snowball_english(),
            stemming: true,
        }
    }
}

impl Preprocessor {
    pub fn with_min_len(min_len: usize) -> Self {
        Preprocessor {
            min_len,
            ..Default::default()
        }
    }

    pub fn tokens(&self, text: &str) -> Vec<String> {
        let tokens = remove_stopwords(tokenize(text, self.min_len.max(1)), &self.stoplist);
        if self.stemming {
            tokens.iter().map(|t| stem(t)).collect()
        } else {
            tokens
        }
    }

    /// Processes every text; documents are independent so this runs in
    /// parallel while keeping input order.
    pub fn tokens_all<S: AsRef<str> + Sync>(&self, texts: &[S]) -> Vec<Vec<String>> {
        use rayon::prelude::*;
        texts.par_iter().map(|t| self.tokens(t.as_ref())).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pipeline_order() {
        let p = Preprocessor::default();
        assert_eq!(
            p.tokens("The Accelerating seismicity, not critical!"),
            ["acceler", "seismic", "critic"]
        );
    }
}
