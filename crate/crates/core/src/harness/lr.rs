//! Logical-reasoning runner: context extension artifacts plus a symbolic
//! stand-in for the answer matcher.
//!
//! Each option is scored as `ENTAILMENT_WEIGHT * e + w`, where `e` is the
//! number of the option's own implications that are already in the
//! context's closure, and `w` is the number of distinct content words the
//! option and its extended context share with the context and question.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use super::{EvalReport, ProblemRecord, QuestionResult, Section, SpanText};
use crate::executor::{select_answer, OptionScore, ScoreMode};
use crate::logic::{
    extend_closure, identify_logic, locate_spans, select_related, verbalize, ExpressionSet, NegationCues, SymbolId,
    SymbolSpan, SymbolTable,
};

pub const ENTAILMENT_WEIGHT: f64 = 100.0;

/// Extended contexts `e_1..e_5` for one record and the derived expressions
/// they were verbalized from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LrArtifact {
    pub id: String,
    pub extended: Vec<String>,
    pub expressions: Vec<String>,
}

const STOPWORDS: &[&str] = &[
    "the",
    "and",
    "you",
    "your",
    "are",
    "will",
    "not",
    "then",
    "that",
    "this",
    "with",
    "for",
    "all",
    "any",
    "can",
    "have",
    "has",
    "was",
    "were",
    "which",
    "one",
    "following",
    "must",
    "true",
    "from",
    "statements",
    "above",
    "able",
    "who",
    "what",
    "there",
    "their",
    "some",
    "into",
    "than",
    "they",
    "also",
];

fn content_words(text: &str) -> BTreeSet<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .map(str::to_lowercase)
        .filter(|w| w.chars().count() >= 3 && !STOPWORDS.contains(&w.as_str()))
        .collect()
}

fn spans_in(text: &str, spans: &[SpanText]) -> Vec<SymbolSpan> {
    let surfaces: Vec<(&str, SymbolId)> = spans.iter().map(|s| (s.text.as_str(), s.symbol)).collect();
    locate_spans(text, &surfaces)
}

/// Runs every LR record with sentence annotations. Other records are
/// counted in `skipped`.
pub fn run_lr_extend(records: &[ProblemRecord]) -> (Vec<LrArtifact>, EvalReport) {
    let cues = NegationCues::default();
    let mut artifacts = Vec::new();
    let mut results = Vec::new();
    let mut skipped = 0;
    for record in records {
        let Some(a) = record.annotations.as_ref().filter(|_| record.section == Section::LR) else {
            skipped += 1;
            continue;
        };
        let Some(sentences) = &a.sentences else {
            skipped += 1;
            continue;
        };
        let mut diagnostics = Vec::new();
        let table: SymbolTable = a.symbols.iter().flatten().cloned().collect();
        let texts: Vec<&str> = sentences.iter().map(|s| s.text.as_str()).collect();
        let spans: Vec<Vec<SymbolSpan>> = sentences.iter().map(|s| spans_in(&s.text, &s.spans)).collect();
        for (s, found) in sentences.iter().zip(&spans) {
            if found.len() < s.spans.len() {
                diagnostics.push(format!("not every span located in {:?}", s.text));
            }
        }
        let asserted = identify_logic(&texts, &spans, &cues).unwrap_or_else(|e| {
            diagnostics.push(e.to_string());
            ExpressionSet::new()
        });
        let derived = extend_closure(&asserted);
        let reading = content_words(&format!("{} {}", record.context, record.question));

        let mut extended = Vec::with_capacity(record.options.len());
        let mut scores = Vec::with_capacity(record.options.len());
        for (i, option) in record.options.iter().enumerate() {
            let option_spans = a
                .option_spans
                .as_ref()
                .map(|all| spans_in(option, &all[i]))
                .unwrap_or_default();
            let symbols: HashSet<SymbolId> = option_spans.iter().map(|s| s.symbol).collect();
            let related = select_related(&derived, &symbols);
            let mut lines = Vec::new();
            for imp in related.iter() {
                match verbalize(imp, &table) {
                    Ok(s) => lines.push(format!("{s}.")),
                    Err(e) => diagnostics.push(e.to_string()),
                }
            }
            let e_i = lines.join(" ");
            let claims = identify_logic(&[option.as_str()], &[option_spans], &cues).unwrap_or_default();
            let entailed = claims
                .iter()
                .filter(|c| asserted.contains(c) || derived.contains(c))
                .count();
            let overlap = content_words(&format!("{option} {e_i}")).intersection(&reading).count();
            scores.push(OptionScore {
                option_index: i,
                mode: ScoreMode::Count,
                value: ENTAILMENT_WEIGHT * entailed as f64 + overlap as f64,
                flagged: false,
            });
            extended.push(e_i);
        }
        let predicted = match select_answer(&scores, record.polarity) {
            Ok(p) => Some(p),
            Err(e) => {
                diagnostics.push(e.to_string());
                None
            }
        };
        artifacts.push(LrArtifact {
            id: record.id.clone(),
            extended,
            expressions: derived.iter().map(ToString::to_string).collect(),
        });
        results.push(QuestionResult {
            id: record.id.clone(),
            section: record.section,
            predicted,
            gold: record.label,
            scores: scores.iter().map(|s| s.value).collect(),
            diagnostics,
        });
    }
    artifacts.sort_by(|a, b| a.id.cmp(&b.id));
    let mut report = EvalReport::finish(results);
    report.skipped = skipped;
    (artifacts, report)
}
