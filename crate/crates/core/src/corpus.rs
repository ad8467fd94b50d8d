//! Corpus ingestion: article metadata, binary and ordered multiclass labels,
//! refID cross-referencing and the temporal train/test split.
//!
//! Three JSON files make up a corpus:
//!
//! * metadata: an array of objects with exactly the keys `refID`, `title`,
//!   `authors`, `abstract`, `keywords`, `refs`, `journal`, `year`, `doi`;
//! * binary labels and multiclass labels: arrays of `{"refID", "label"}`
//!   objects where `label` is a string-encoded digit.
//!
//! An optional alias map (`{"labelRefID": "metadataRefID"}`) redirects label
//! refIDs that are spelled differently from the metadata. The loader is
//! strict: any unresolved, duplicated or missing reference is an error.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type ClassId = usize;

pub const MIN_YEAR: i32 = 1988;
pub const MAX_YEAR: i32 = 2018;
/// Last publication year of the training period.
pub const DEFAULT_CUTOFF: i32 = 2010;

pub type AliasMap = BTreeMap<String, String>;

/// Labelling scheme.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    /// 1 = critical process assumed or demonstrated, 0 = else.
    Binary,
    /// 0 = non-criticality < 1 = agnostic < 2 = criticality assumed
    /// < 3 = criticality demonstrated.
    Multiclass,
}

impl Scheme {
    pub fn n_classes(self) -> usize {
        match self {
            Scheme::Binary => 2,
            Scheme::Multiclass => 4,
        }
    }

    pub fn classes(self) -> Vec<ClassId> {
        (0..self.n_classes()).collect()
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Binary => "binary",
            Scheme::Multiclass => "multiclass",
        })
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "binary" => Ok(Scheme::Binary),
            "multiclass" => Ok(Scheme::Multiclass),
            other => Err(Error::InvalidParameter(format!("unknown scheme `{other}`"))),
        }
    }
}

/// One article's metadata record.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub ref_id: String,
    pub title: String,
    pub authors: Vec<String>,
    pub abstract_text: String,
    pub keywords: Option<Vec<String>>,
    pub journal: String,
    pub year: i32,
    pub doi: Option<String>,
}

impl Document {
    /// Title, authors, abstract and keywords joined by single spaces.
    pub fn metadata_text(&self) -> String {
        let mut parts: Vec<&str> = Vec::with_capacity(2 + self.authors.len());
        parts.push(&self.title);
        parts.extend(self.authors.iter().map(String::as_str));
        parts.push(&self.abstract_text);
        if let Some(keywords) = &self.keywords {
            parts.extend(keywords.iter().map(String::as_str));
        }
        parts.retain(|p| !p.is_empty());
        parts.join(" ")
    }

    fn validate(&self) -> Result<()> {
        let invalid = |reason: String| Error::InvalidDocument {
            ref_id: self.ref_id.clone(),
            reason,
        };
        if self.ref_id.trim().is_empty() {
            return Err(invalid("empty refID".into()));
        }
        if self.title.trim().is_empty() {
            return Err(invalid("empty title".into()));
        }
        if self.abstract_text.trim().is_empty() {
            return Err(invalid("empty abstract".into()));
        }
        if !(MIN_YEAR..=MAX_YEAR).contains(&self.year) {
            return Err(invalid(format!("year {} outside {MIN_YEAR}..={MAX_YEAR}", self.year)));
        }
        Ok(())
    }
}

/// Wire form of a metadata entry. Every key must be present; nullable keys
/// may be `null`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MetadataRecord {
    #[serde(rename = "refID")]
    ref_id: String,
    title: String,
    #[serde(deserialize_with = "Option::deserialize")]
    authors: Option<Vec<String>>,
    #[serde(rename = "abstract")]
    abstract_text: String,
    #[serde(deserialize_with = "Option::deserialize")]
    keywords: Option<Vec<String>>,
    #[serde(deserialize_with = "Option::deserialize")]
    refs: Option<serde_json::Value>,
    journal: String,
    year: i32,
    #[serde(deserialize_with = "Option::deserialize")]
    doi: Option<String>,
}

impl MetadataRecord {
    fn into_document(self) -> Result<Document> {
        if self.refs.is_some() {
            return Err(Error::InvalidDocument {
                ref_id: self.ref_id,
                reason: "`refs` must be null".into(),
            });
        }
        Ok(Document {
            ref_id: self.ref_id,
            title: self.title,
            authors: self.authors.unwrap_or_default(),
            abstract_text: self.abstract_text,
            keywords: self.keywords,
            journal: self.journal,
            year: self.year,
            doi: self.doi,
        })
    }

    fn from_document(doc: &Document) -> Self {
        MetadataRecord {
            ref_id: doc.ref_id.clone(),
            title: doc.title.clone(),
            authors: Some(doc.authors.clone()),
            abstract_text: doc.abstract_text.clone(),
            keywords: doc.keywords.clone(),
            refs: None,
            journal: doc.journal.clone(),
            year: doc.year,
            doi: doc.doi.clone(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LabelRecord {
    #[serde(rename = "refID")]
    ref_id: String,
    label: String,
}

/// Binary and multiclass labels keyed by refID.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LabelSet {
    pub binary: BTreeMap<String, ClassId>,
    pub multiclass: BTreeMap<String, ClassId>,
}

impl LabelSet {
    pub fn get(&self, scheme: Scheme) -> &BTreeMap<String, ClassId> {
        match scheme {
            Scheme::Binary => &self.binary,
            Scheme::Multiclass => &self.multiclass,
        }
    }

    fn restrict(&self, keep: &BTreeSet<&str>) -> LabelSet {
        let filter = |m: &BTreeMap<String, ClassId>| {
            m.iter()
                .filter(|(k, _)| keep.contains(k.as_str()))
                .map(|(k, v)| (k.clone(), *v))
                .collect()
        };
        LabelSet {
            binary: filter(&self.binary),
            multiclass: filter(&self.multiclass),
        }
    }
}

/// A validated, labelled corpus. Immutable once built.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Corpus {
    documents: Vec<Document>,
    labels: LabelSet,
}

impl Corpus {
    /// Builds a corpus, checking document invariants and that every document
    /// carries exactly one label of each scheme.
    pub fn new(documents: Vec<Document>, labels: LabelSet) -> Result<Self> {
        let mut seen = HashMap::with_capacity(documents.len());
        for doc in &documents {
            doc.validate()?;
            if seen.insert(doc.ref_id.as_str(), ()).is_some() {
                return Err(Error::DuplicateRefId(doc.ref_id.clone()));
            }
        }
        for scheme in [Scheme::Binary, Scheme::Multiclass] {
            let map = labels.get(scheme);
            for (ref_id, &class) in map {
                if !seen.contains_key(ref_id.as_str()) {
                    return Err(Error::UnresolvedRefId {
                        ref_id: ref_id.clone(),
                        source_name: format!("{scheme} labels"),
                    });
                }
                if class >= scheme.n_classes() {
                    return Err(Error::InvalidLabel {
                        ref_id: ref_id.clone(),
                        scheme,
                        value: class.to_string(),
                    });
                }
            }
            for doc in &documents {
                if !map.contains_key(&doc.ref_id) {
                    return Err(Error::MissingLabel {
                        ref_id: doc.ref_id.clone(),
                        scheme,
                    });
                }
            }
        }
        for doc in &documents {
            let binary = labels.binary[&doc.ref_id];
            let multiclass = labels.multiclass[&doc.ref_id];
            let consistent = match multiclass {
                0 => binary == 0,
                2 | 3 => binary == 1,
                _ => true,
            };
            if !consistent {
                return Err(Error::InconsistentLabels {
                    ref_id: doc.ref_id.clone(),
                    binary,
                    multiclass,
                });
            }
        }
        Ok(Corpus { documents, labels })
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn label_set(&self) -> &LabelSet {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn label(&self, ref_id: &str, scheme: Scheme) -> Option<ClassId> {
        self.labels.get(scheme).get(ref_id).copied()
    }

    /// Labels in document order.
    pub fn labels(&self, scheme: Scheme) -> Vec<ClassId> {
        let map = self.labels.get(scheme);
        self.documents.iter().map(|d| map[&d.ref_id]).collect()
    }

    /// Documents with `year <= cutoff` go to the first corpus, the rest to
    /// the second. Document order is preserved in both.
    pub fn split_by_year(&self, cutoff: i32) -> (Corpus, Corpus) {
        let (train, test): (Vec<_>, Vec<_>) = self.documents.iter().cloned().partition(|d| d.year <= cutoff);
        (self.subset(train), self.subset(test))
    }

    fn subset(&self, documents: Vec<Document>) -> Corpus {
        let keep: BTreeSet<&str> = documents.iter().map(|d| d.ref_id.as_str()).collect();
        let labels = self.labels.restrict(&keep);
        Corpus { documents, labels }
    }

    /// Per class document counts.
    pub fn class_counts(&self, scheme: Scheme) -> BTreeMap<ClassId, usize> {
        let mut counts = BTreeMap::new();
        for class in self.labels(scheme) {
            *counts.entry(class).or_insert(0) += 1;
        }
        counts
    }

    /// year -> class -> count. Years without documents are absent.
    pub fn class_histogram(&self, scheme: Scheme) -> BTreeMap<i32, BTreeMap<ClassId, usize>> {
        let map = self.labels.get(scheme);
        let mut hist: BTreeMap<i32, BTreeMap<ClassId, usize>> = BTreeMap::new();
        for doc in &self.documents {
            *hist.entry(doc.year).or_default().entry(map[&doc.ref_id]).or_insert(0) += 1;
        }
        hist
    }

    /// Serialises back to the three-file JSON form (metadata, binary labels,
    /// multiclass labels). Labels are written with canonical refIDs, so the
    /// output reloads without an alias map.
    pub fn to_json_sources(&self) -> Result<(String, String, String)> {
        let records: Vec<_> = self.documents.iter().map(MetadataRecord::from_document).collect();
        let labels = |scheme: Scheme| -> Vec<LabelRecord> {
            let map = self.labels.get(scheme);
            self.documents
                .iter()
                .map(|d| LabelRecord {
                    ref_id: d.ref_id.clone(),
                    label: map[&d.ref_id].to_string(),
                })
                .collect()
        };
        Ok((
            serde_json::to_string_pretty(&records)?,
            serde_json::to_string_pretty(&labels(Scheme::Binary))?,
            serde_json::to_string_pretty(&labels(Scheme::Multiclass))?,
        ))
    }
}

/// Parses the three JSON sources into a validated corpus.
pub fn load_corpus(metadata: &[u8], binary: &[u8], multiclass: &[u8], aliases: &AliasMap) -> Result<Corpus> {
    load_named(
        ("metadata", metadata),
        ("binary labels", binary),
        ("multiclass labels", multiclass),
        aliases,
    )
}

pub fn parse_alias_map(bytes: &[u8], source_name: &str) -> Result<AliasMap> {
    parse_json(bytes, source_name)
}

fn load_named(
    (meta_name, metadata): (&str, &[u8]),
    (bin_name, binary): (&str, &[u8]),
    (multi_name, multiclass): (&str, &[u8]),
    aliases: &AliasMap,
) -> Result<Corpus> {
    let records: Vec<MetadataRecord> = parse_json(metadata, meta_name)?;
    let documents = records
        .into_iter()
        .map(MetadataRecord::into_document)
        .collect::<Result<Vec<_>>>()?;

    let mut known = HashMap::with_capacity(documents.len());
    for doc in &documents {
        doc.validate()?;
        if known.insert(doc.ref_id.clone(), ()).is_some() {
            return Err(Error::DuplicateRefId(doc.ref_id.clone()));
        }
    }

    let binary = resolve_labels(binary, bin_name, Scheme::Binary, &known, aliases)?;
    let multiclass = resolve_labels(multiclass, multi_name, Scheme::Multiclass, &known, aliases)?;
    Corpus::new(documents, LabelSet { binary, multiclass })
}

fn resolve_labels(
    bytes: &[u8],
    source_name: &str,
    scheme: Scheme,
    known: &HashMap<String, ()>,
    aliases: &AliasMap,
) -> Result<BTreeMap<String, ClassId>> {
    let records: Vec<LabelRecord> = parse_json(bytes, source_name)?;
    let mut out = BTreeMap::new();
    for rec in records {
        let ref_id = aliases.get(&rec.ref_id).unwrap_or(&rec.ref_id).clone();
        if !known.contains_key(&ref_id) {
            return Err(Error::UnresolvedRefId {
                ref_id: rec.ref_id,
                source_name: source_name.to_string(),
            });
        }
        let class = match rec.label.trim().parse::<ClassId>() {
            Ok(c) if c < scheme.n_classes() && rec.label.len() == 1 => c,
            _ => {
                return Err(Error::InvalidLabel {
                    ref_id,
                    scheme,
                    value: rec.label,
                })
            }
        };
        if out.insert(ref_id.clone(), class).is_some() {
            return Err(Error::DuplicateRefId(ref_id));
        }
    }
    Ok(out)
}

fn parse_json<T: serde::de::DeserializeOwned>(bytes: &[u8], source_name: &str) -> Result<T> {
    serde_json::from_slice(bytes).map_err(|e| Error::MalformedJson {
        source_name: source_name.to_string(),
        offset: byte_offset(bytes, e.line(), e.column()),
        message: e.to_string(),
    })
}

/// Converts serde_json's 1-based line/column into a byte offset.
fn byte_offset(bytes: &[u8], line: usize, column: usize) -> usize {
    let line_start = if line <= 1 {
        0
    } else {
        bytes
            .iter()
            .enumerate()
            .filter(|(_, &b)| b == b'\n')
            .nth(line - 2)
            .map(|(i, _)| i + 1)
            .unwrap_or(bytes.len())
    };
    (line_start + column.saturating_sub(1)).min(bytes.len())
}

/// Locations of the corpus files on disk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusPaths {
    pub metadata: PathBuf,
    pub binary_labels: PathBuf,
    pub multiclass_labels: PathBuf,
    pub aliases: Option<PathBuf>,
}

impl CorpusPaths {
    /// Standard file names inside a data directory.
    pub fn in_dir(dir: impl AsRef<Path>) -> Self {
        let dir = dir.as_ref();
        let aliases = dir.join("aliases.json");
        CorpusPaths {
            metadata: dir.join("metadata.json"),
            binary_labels: dir.join("labels_binary.json"),
            multiclass_labels: dir.join("labels_multiclass.json"),
            aliases: aliases.exists().then_some(aliases),
        }
    }

    pub fn load(&self) -> Result<Corpus> {
        let read = |p: &Path| std::fs::read(p).map_err(|e| Error::io(p, e));
        let metadata = read(&self.metadata)?;
        let binary = read(&self.binary_labels)?;
        let multiclass = read(&self.multiclass_labels)?;
        let aliases = match &self.aliases {
            Some(p) => parse_alias_map(&read(p)?, &p.display().to_string())?,
            None => AliasMap::new(),
        };
        load_named(
            (&self.metadata.display().to_string(), &metadata),
            (&self.binary_labels.display().to_string(), &binary),
            (&self.multiclass_labels.display().to_string(), &multiclass),
            &aliases,
        )
    }
}
