use std::collections::HashSet;
use std::path::Path;

use crate::error::{Error, Result};

/// Splits text into lowercase tokens.
///
/// A token is a maximal run of Unicode letters, digits and hyphens with
/// leading and trailing hyphens stripped. Every other character separates
/// tokens. Tokens with fewer than `min_len` characters are dropped.
pub fn tokenize(text: &str, min_len: usize) -> Vec<String> {
    text.split(|c: char| !(c.is_alphanumeric() || c == '-'))
        .map(|run| run.trim_matches('-'))
        .filter(|run| !run.is_empty() && run.chars().count() >= min_len)
        .map(str::to_lowercase)
        .collect()
}

/// A set of lowercase stopwords.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StopList(HashSet<String>);

const SNOWBALL_ENGLISH: &str = include_str!("../../data/stopwords_en.txt");

impl StopList {
    /// The Snowball English stopword list (175 entries).
    pub fn snowball_english() -> Self {
        Self::from_text(SNOWBALL_ENGLISH)
    }

    /// Parses a one-term-per-line list; blank lines and `#` comments are
    /// ignored and entries are lowercased.
    pub fn from_text(text: &str) -> Self {
        StopList(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(str::to_lowercase)
                .collect(),
        )
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::from_text(&text))
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.contains(word)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Order-preserving removal of stopwords (exact match on surface forms).
pub fn remove_stopwords(tokens: Vec<String>, stoplist: &StopList) -> Vec<String> {
    tokens.into_iter().filter(|t| !stoplist.contains(t)).collect()
}
