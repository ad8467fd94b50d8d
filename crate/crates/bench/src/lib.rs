//! Fixtures shared by the benchmarks.

use std::path::PathBuf;

use seismotext_core::corpus::{CorpusPaths, DEFAULT_CUTOFF};
use seismotext_core::eval::{featurize, ExperimentSpec, SplitData};
use seismotext_core::Corpus;

/// The corpus under `data/`, or `CORPUS_DIR` when set.
pub fn corpus() -> Corpus {
    let dir = std::env::var_os("CORPUS_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data"));
    CorpusPaths::in_dir(dir).load().expect("corpus loads")
}

pub fn features(corpus: &Corpus, spec: &ExperimentSpec) -> SplitData {
    featurize(corpus, spec, DEFAULT_CUTOFF).expect("features")
}
