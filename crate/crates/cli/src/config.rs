use std::path::{Path, PathBuf};

use seismotext_core::corpus::{CorpusPaths, DEFAULT_CUTOFF};
use seismotext_core::eval::{ClassifierKind, ExperimentSpec};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Everything one run needs. Read from `--config`, then patched by flags.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Directory holding the standard corpus files.
    pub data_dir: Option<PathBuf>,
    pub metadata: Option<PathBuf>,
    pub binary_labels: Option<PathBuf>,
    pub multiclass_labels: Option<PathBuf>,
    pub aliases: Option<PathBuf>,
    pub cutoff: i32,
    pub out: PathBuf,
    /// Required when the classifier is a random forest.
    pub seed: Option<u64>,
    pub experiment: ExperimentSpec,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            data_dir: None,
            metadata: None,
            binary_labels: None,
            multiclass_labels: None,
            aliases: None,
            cutoff: DEFAULT_CUTOFF,
            out: PathBuf::from("out"),
            seed: None,
            experiment: ExperimentSpec::default(),
        }
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Run(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }

    pub fn corpus_paths(&self) -> CorpusPaths {
        let dir = self.data_dir.clone().unwrap_or_else(|| PathBuf::from("data"));
        let mut paths = CorpusPaths::in_dir(&dir);
        if let Some(p) = &self.metadata {
            paths.metadata = p.clone();
        }
        if let Some(p) = &self.binary_labels {
            paths.binary_labels = p.clone();
        }
        if let Some(p) = &self.multiclass_labels {
            paths.multiclass_labels = p.clone();
        }
        if self.aliases.is_some() {
            paths.aliases = self.aliases.clone();
        }
        paths
    }

    /// The experiment with the run seed applied.
    pub fn spec(&self) -> Result<ExperimentSpec, CliError> {
        let mut spec = self.experiment.clone();
        match (self.seed, spec.classifier) {
            (Some(seed), _) => spec.seed = seed,
            (None, ClassifierKind::RandomForest) => {
                return Err(CliError::Usage("random forest runs need --seed".into()))
            }
            _ => {}
        }
        spec.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(spec)
    }

    /// File stem shared by the outputs of one experiment.
    pub fn stem(&self, spec: &ExperimentSpec) -> String {
        format!("{}_{}_{}", spec.scheme, spec.classifier.id(), spec.corpus_view.name())
    }
}
