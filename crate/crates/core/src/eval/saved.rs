use serde::{Deserialize, Serialize};

use super::features::FeatureSpace;
use crate::corpus::{ClassId, Scheme};
use crate::error::{Error, Result};
use crate::models::{Classifier, TrainedModel};

pub const MODEL_FORMAT: &str = "seismotext-model";
pub const MODEL_VERSION: u32 = 1;

/// A trained model with the feature mapping needed to apply it to raw text.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SavedModel {
    pub format: String,
    pub version: u32,
    pub scheme: Scheme,
    pub classes: Vec<ClassId>,
    pub features: FeatureSpace,
    pub model: TrainedModel,
}

impl SavedModel {
    pub fn new(scheme: Scheme, features: FeatureSpace, model: TrainedModel) -> Self {
        SavedModel {
            format: MODEL_FORMAT.into(),
            version: MODEL_VERSION,
            scheme,
            classes: model.classes().to_vec(),
            features,
            model,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let saved: SavedModel = serde_json::from_str(text)?;
        if saved.format != MODEL_FORMAT || saved.version != MODEL_VERSION {
            return Err(Error::InvalidParameter(format!(
                "unsupported model document {} v{}",
                saved.format, saved.version
            )));
        }
        Ok(saved)
    }

    /// Featurizes and classifies raw texts.
    pub fn predict_texts<S: AsRef<str> + Sync>(&self, texts: &[S]) -> Vec<ClassId> {
        self.model.predict_all(self.features.transform(texts).rows())
    }
}
