//! JSON-lines problem records.
//!
//! One record per line:
//!
//! ```json
//! {"id": "ar-1", "section": "AR", "context": "...", "question": "...",
//!  "options": ["...", "...", "...", "...", "..."], "label": 2,
//!  "polarity": "Positive", "annotations": {...}}
//! ```
//!
//! `polarity` and `annotations` are optional. Records with four options get
//! a fifth, a copy of one wrong option chosen from the seed and the record
//! id, so padding is reproducible.

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::executor::Polarity;
use crate::game::{Capacity, Multiplicity};
use crate::logic::{LogicSymbol, SymbolId};
use crate::rng::{fnv1a, Mcg64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Section {
    AR,
    LR,
    RC,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpanText {
    /// Literal text of the symbol, located in its sentence.
    pub text: String,
    pub symbol: SymbolId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnnotatedSentence {
    pub text: String,
    pub spans: Vec<SpanText>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Annotations {
    // logic games
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub participants: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positions: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub ordered: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplicity: Option<Multiplicity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub capacities: Option<Vec<Capacity>>,
    /// One program per constraint, in program syntax.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub programs: Option<Vec<String>>,
    /// Extra constraints the question stem adds ("If D serves on X, ...").
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub question_programs: Option<Vec<String>>,
    /// One program per option; `null` for an option without one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub option_programs: Option<Vec<Option<String>>>,
    // logical reasoning
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbols: Option<Vec<LogicSymbol>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sentences: Option<Vec<AnnotatedSentence>>,
    /// Symbol spans in each option text.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub option_spans: Option<Vec<Vec<SpanText>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemRecord {
    pub id: String,
    pub section: Section,
    pub context: String,
    pub question: String,
    pub options: Vec<String>,
    pub label: usize,
    #[serde(default)]
    pub polarity: Polarity,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub annotations: Option<Annotations>,
}

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line} (record {id}): {message}")]
    Schema { line: usize, id: String, message: String },
    #[error("duplicate record id {0:?}")]
    Duplicate(String),
}

/// Question and context counts per split of the benchmark.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitCounts {
    pub section: Section,
    pub split: &'static str,
    pub contexts: usize,
    pub questions: usize,
}

pub const SPLIT_COUNTS: [SplitCounts; 9] = [
    SplitCounts {
        section: Section::AR,
        split: "train",
        contexts: 280,
        questions: 1630,
    },
    SplitCounts {
        section: Section::AR,
        split: "val",
        contexts: 40,
        questions: 231,
    },
    SplitCounts {
        section: Section::AR,
        split: "test",
        contexts: 40,
        questions: 230,
    },
    SplitCounts {
        section: Section::LR,
        split: "train",
        contexts: 3325,
        questions: 3529,
    },
    SplitCounts {
        section: Section::LR,
        split: "val",
        contexts: 503,
        questions: 506,
    },
    SplitCounts {
        section: Section::LR,
        split: "test",
        contexts: 507,
        questions: 510,
    },
    SplitCounts {
        section: Section::RC,
        split: "train",
        contexts: 280,
        questions: 1880,
    },
    SplitCounts {
        section: Section::RC,
        split: "val",
        contexts: 40,
        questions: 270,
    },
    SplitCounts {
        section: Section::RC,
        split: "test",
        contexts: 40,
        questions: 269,
    },
];

/// Expected counts for a section and split name.
pub fn split_counts(section: Section, split: &str) -> Option<SplitCounts> {
    SPLIT_COUNTS
        .iter()
        .copied()
        .find(|c| c.section == section && c.split == split)
}

/// Distinct contexts and questions of `section` in `records`.
pub fn count_split(records: &[ProblemRecord], section: Section) -> (usize, usize) {
    let of: Vec<&ProblemRecord> = records.iter().filter(|r| r.section == section).collect();
    let contexts: HashSet<&str> = of.iter().map(|r| r.context.as_str()).collect();
    (contexts.len(), of.len())
}

fn pad(record: &mut ProblemRecord, seed: u64) {
    let mut rng = Mcg64::new(seed ^ fnv1a(&record.id));
    let wrong: Vec<usize> = (0..4).filter(|&i| i != record.label).collect();
    let pick = wrong[rng.below(wrong.len())];
    record.options.push(record.options[pick].clone());
    if let Some(a) = record.annotations.as_mut() {
        if let Some(ps) = a.option_programs.as_mut() {
            if ps.len() == 4 {
                ps.push(ps[pick].clone());
            }
        }
        if let Some(spans) = a.option_spans.as_mut() {
            if spans.len() == 4 {
                spans.push(spans[pick].clone());
            }
        }
    }
}

fn check(record: &ProblemRecord) -> Result<(), String> {
    if record.id.is_empty() {
        return Err("empty id".into());
    }
    if record.options.len() != 5 {
        return Err(format!("expected 4 or 5 options, found {}", record.options.len()));
    }
    if record.label >= 5 {
        return Err(format!("label {} out of range", record.label));
    }
    if let Some(a) = &record.annotations {
        if a.option_programs.as_ref().is_some_and(|p| p.len() != 5) {
            return Err("option_programs must have one entry per option".into());
        }
        if a.option_spans.as_ref().is_some_and(|p| p.len() != 5) {
            return Err("option_spans must have one entry per option".into());
        }
        if a.participants.is_some() != a.positions.is_some() {
            return Err("participants and positions must be annotated together".into());
        }
    }
    Ok(())
}

/// Parses and validates JSON lines. Blank lines are skipped.
pub fn parse_dataset(text: &str, seed: u64) -> Result<Vec<ProblemRecord>, DatasetError> {
    let mut out = Vec::new();
    let mut ids = HashSet::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let schema = |id: &str, message: String| DatasetError::Schema {
            line: i + 1,
            id: id.to_string(),
            message,
        };
        let value: serde_json::Value = serde_json::from_str(line).map_err(|e| schema("?", e.to_string()))?;
        let id = value.get("id").and_then(|v| v.as_str()).unwrap_or("?").to_string();
        let mut record: ProblemRecord = serde_json::from_value(value).map_err(|e| schema(&id, e.to_string()))?;
        if record.options.len() == 4 && record.label < 4 {
            pad(&mut record, seed);
        }
        check(&record).map_err(|m| schema(&id, m))?;
        if !ids.insert(record.id.clone()) {
            return Err(DatasetError::Duplicate(record.id));
        }
        out.push(record);
    }
    Ok(out)
}

pub fn load_dataset(path: impl AsRef<Path>, seed: u64) -> Result<Vec<ProblemRecord>, DatasetError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| DatasetError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_dataset(&text, seed)
}

/// One JSON object per line, in the given order.
pub fn write_dataset(records: &[ProblemRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("records serialize"));
        out.push('\n');
    }
    out
}
