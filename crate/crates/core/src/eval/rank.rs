use std::cmp::Ordering;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::ClassId;
use crate::error::{Error, Result};
use crate::models::NbModel;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Highest `P(class | term)` first.
    #[default]
    Top,
    /// Lowest first.
    Bottom,
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "top" => Ok(Direction::Top),
            "bottom" => Ok(Direction::Bottom),
            other => Err(Error::InvalidParameter(format!("unknown direction `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankedTerm {
    pub term: String,
    pub probability: f64,
}

/// Vocabulary terms ordered by `P(class | term)`; equal probabilities are
/// ordered by term. `top_n` is clamped to the vocabulary size.
pub fn rank_terms(model: &NbModel, class: ClassId, top_n: usize, direction: Direction) -> Result<Vec<RankedTerm>> {
    if top_n == 0 {
        return Err(Error::InvalidParameter("top_n must be >= 1".into()));
    }
    let c = model
        .classes()
        .iter()
        .position(|&k| k == class)
        .ok_or_else(|| Error::InvalidParameter(format!("class {class} not in model")))?;
    let mut ranked = model
        .terms()
        .iter()
        .enumerate()
        .map(|(i, term)| {
            Ok(RankedTerm {
                term: term.clone(),
                probability: model.term_posterior(i)?[c],
            })
        })
        .collect::<Result<Vec<_>>>()?;
    ranked.sort_by(|a, b| {
        let by_p = a.probability.total_cmp(&b.probability);
        let by_p = if direction == Direction::Top {
            by_p.reverse()
        } else {
            by_p
        };
        match by_p {
            Ordering::Equal => a.term.cmp(&b.term),
            o => o,
        }
    });
    ranked.truncate(top_n);
    Ok(ranked)
}
