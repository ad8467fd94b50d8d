use serde::{Deserialize, Serialize};

use super::features::{prepare, SplitData};
use super::metrics::{round_to, ConfusionMatrix, Metrics};
use super::protocol::{keyword_evaluate, loocv, predict_test, ClassifierKind, Evaluation, ExperimentSpec};
use super::saved::SavedModel;
use crate::corpus::{ClassId, Corpus};
use crate::error::{Error, Result};

pub const REPORT_VERSION: u32 = 1;
/// Decimal places kept in JSON and CSV reports.
pub const REPORT_DECIMALS: i32 = 6;
/// Marker written for undefined scores.
pub const UNDEFINED: &str = "NA";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Protocol {
    /// Leave-one-out cross-validation on the training period.
    Loocv,
    /// Train on the training period, predict the test period.
    TestSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub ref_id: String,
    pub year: i32,
    pub label: ClassId,
    pub predicted: ClassId,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub format_version: u32,
    pub protocol: Protocol,
    pub spec: ExperimentSpec,
    pub cutoff: i32,
    pub n_train: usize,
    pub n_test: usize,
    pub vocab_size: usize,
    /// Accuracy of guessing uniformly at random, `1 / |classes|`.
    pub random_baseline: f64,
    pub confusion: ConfusionMatrix,
    pub metrics: Metrics,
    pub predictions: Vec<PredictionRecord>,
}

impl EvalReport {
    fn assemble(protocol: Protocol, spec: &ExperimentSpec, cutoff: i32, data: &SplitData, eval: Evaluation) -> Self {
        let evaluated = match protocol {
            Protocol::Loocv => &data.train,
            Protocol::TestSet => &data.test,
        };
        let predictions = (0..evaluated.len())
            .map(|i| PredictionRecord {
                ref_id: evaluated.ref_ids[i].clone(),
                year: evaluated.years[i],
                label: evaluated.labels[i],
                predicted: eval.predictions[i],
            })
            .collect();
        EvalReport {
            format_version: REPORT_VERSION,
            protocol,
            spec: spec.clone(),
            cutoff,
            n_train: data.train.len(),
            n_test: data.test.len(),
            vocab_size: data.space.vocabulary.len(),
            random_baseline: round_to(1.0 / spec.scheme.n_classes() as f64, REPORT_DECIMALS),
            confusion: eval.confusion,
            metrics: eval.metrics.rounded(REPORT_DECIMALS),
            predictions,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn table_row(&self) -> TableRow {
        TableRow::from_report(self)
    }

    /// Per-document predictions as CSV (`refID,year,label,predicted`).
    pub fn predictions_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["refID", "year", "label", "predicted"])?;
        for p in &self.predictions {
            w.write_record([
                p.ref_id.clone(),
                p.year.to_string(),
                p.label.to_string(),
                p.predicted.to_string(),
            ])?;
        }
        finish(w)
    }
}

/// Leave-one-out cross-validation over the documents published up to
/// `cutoff`.
pub fn run_cv(corpus: &Corpus, spec: &ExperimentSpec, cutoff: i32) -> Result<EvalReport> {
    spec.validate()?;
    let data = featurize(corpus, spec, cutoff)?;
    let eval = match spec.classifier {
        ClassifierKind::Keyword => keyword_evaluate(&data.train.texts, &data.train.labels)?,
        _ => loocv(&data.train.dtm, &data.train.labels, spec)?,
    };
    Ok(EvalReport::assemble(Protocol::Loocv, spec, cutoff, &data, eval))
}

/// Trains on documents up to `cutoff` and predicts the later ones. The
/// trained model is returned alongside, except for the keyword baseline.
pub fn run_test(corpus: &Corpus, spec: &ExperimentSpec, cutoff: i32) -> Result<(EvalReport, Option<SavedModel>)> {
    spec.validate()?;
    let data = featurize(corpus, spec, cutoff)?;
    if data.test.is_empty() {
        return Err(Error::EmptyEvaluation);
    }
    let (eval, saved) = match spec.classifier {
        ClassifierKind::Keyword => (keyword_evaluate(&data.test.texts, &data.test.labels)?, None),
        _ => {
            let (model, eval) = predict_test(
                &data.train.dtm,
                &data.train.labels,
                &data.test.dtm,
                &data.test.labels,
                spec,
            )?;
            let saved = SavedModel::new(spec.scheme, data.space.clone(), model);
            (eval, Some(saved))
        }
    };
    Ok((
        EvalReport::assemble(Protocol::TestSet, spec, cutoff, &data, eval),
        saved,
    ))
}

pub fn featurize(corpus: &Corpus, spec: &ExperimentSpec, cutoff: i32) -> Result<SplitData> {
    prepare(
        corpus,
        spec.scheme,
        &spec.corpus_view,
        &spec.features,
        spec.normalize(),
        cutoff,
    )
}

/// One line of a results table: algorithm, corpus view and scores.
///
/// Binary rows carry `accuracy, f1, precision, recall` (class 1);
/// multiclass rows carry `accuracy` and `f1_<class>` per class.
#[derive(Clone, Debug, PartialEq)]
pub struct TableRow {
    pub algorithm: String,
    pub corpus: String,
    pub cells: Vec<(String, Option<f64>)>,
}

impl TableRow {
    pub fn from_report(report: &EvalReport) -> Self {
        let m = &report.metrics;
        let mut cells = vec![("accuracy".to_string(), Some(m.accuracy))];
        if report.spec.scheme.n_classes() == 2 {
            let h = m.headline();
            let get = |f: fn(&super::metrics::ClassMetrics) -> (f64, bool)| {
                h.and_then(|c| {
                    let (v, ok) = f(c);
                    ok.then_some(v)
                })
            };
            cells.push(("f1".into(), get(|c| (c.f1, c.f1_defined))));
            cells.push(("precision".into(), get(|c| (c.precision, c.precision_defined))));
            cells.push(("recall".into(), get(|c| (c.recall, c.recall_defined))));
        } else {
            for (class, c) in &m.per_class {
                cells.push((format!("f1_{class}"), c.f1_defined.then_some(c.f1)));
            }
        }
        TableRow {
            algorithm: report.spec.classifier.label().to_string(),
            corpus: report.spec.corpus_view.name().to_string(),
            cells,
        }
    }

    pub fn header(&self) -> Vec<String> {
        ["algorithm", "corpus"]
            .into_iter()
            .map(String::from)
            .chain(self.cells.iter().map(|(k, _)| k.clone()))
            .collect()
    }

    pub fn get(&self, column: &str) -> Option<Option<f64>> {
        self.cells.iter().find(|(k, _)| k == column).map(|(_, v)| *v)
    }

    /// Scores at two decimals, `-` where undefined.
    pub fn console_line(&self) -> String {
        let mut line = format!("{:<26} {:<10}", self.algorithm, self.corpus);
        for (_, v) in &self.cells {
            match v {
                Some(v) => line.push_str(&format!(" {v:>9.2}")),
                None => line.push_str(&format!(" {:>9}", "-")),
            }
        }
        line
    }

    pub fn console_header(&self) -> String {
        let mut line = format!("{:<26} {:<10}", "algorithm", "corpus");
        for (k, _) in &self.cells {
            line.push_str(&format!(" {k:>9}"));
        }
        line
    }

    /// Rows with a common header as CSV, scores at six decimals.
    pub fn to_csv(rows: &[TableRow]) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        if let Some(first) = rows.first() {
            w.write_record(first.header())?;
        }
        for row in rows {
            if rows[0].header() != row.header() {
                return Err(Error::InvalidParameter("table rows differ in columns".into()));
            }
            let mut rec = vec![row.algorithm.clone(), row.corpus.clone()];
            rec.extend(row.cells.iter().map(|(_, v)| match v {
                Some(v) => format!("{:.*}", REPORT_DECIMALS as usize, v),
                None => UNDEFINED.to_string(),
            }));
            w.write_record(rec)?;
        }
        finish(w)
    }

    pub fn from_csv(text: &str) -> Result<Vec<TableRow>> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let header: Vec<String> = r.headers()?.iter().map(String::from).collect();
        if header.len() < 2 || header[0] != "algorithm" || header[1] != "corpus" {
            return Err(Error::InvalidParameter("not a results table".into()));
        }
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            let cells = header[2..]
                .iter()
                .zip(rec.iter().skip(2))
                .map(|(k, v)| {
                    let value = if v == UNDEFINED {
                        None
                    } else {
                        Some(
                            v.parse::<f64>()
                                .map_err(|_| Error::InvalidParameter(format!("bad number `{v}` in column {k}")))?,
                        )
                    };
                    Ok((k.clone(), value))
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(TableRow {
                algorithm: rec[0].to_string(),
                corpus: rec[1].to_string(),
                cells,
            });
        }
        Ok(rows)
    }
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::InvalidParameter(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
