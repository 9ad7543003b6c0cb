//! Dataset ingestion, section runners and scoring.

mod ar;
mod dataset;
mod lr;
mod score;

use serde::{Deserialize, Serialize};

pub use ar::{run_ar, run_ar_traced, ArOptions, OnFailure};
pub use dataset::{
    count_split, load_dataset, parse_dataset, split_counts, write_dataset, AnnotatedSentence, Annotations,
    DatasetError, ProblemRecord, Section, SpanText, SplitCounts, SPLIT_COUNTS,
};
pub use lr::{run_lr_extend, LrArtifact, ENTAILMENT_WEIGHT};
pub use score::{overall_score, scaled_score, Anchor, ScaleError, ScoreScale, DEFAULT_SCALE, SECTION_WEIGHTS};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuestionResult {
    pub id: String,
    pub section: Section,
    /// `None` is an abstention.
    pub predicted: Option<usize>,
    pub gold: usize,
    pub scores: Vec<f64>,
    pub diagnostics: Vec<String>,
}

impl QuestionResult {
    pub fn is_correct(&self) -> bool {
        self.predicted == Some(self.gold)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectionAccuracy {
    pub section: Section,
    pub correct: usize,
    pub total: usize,
    pub accuracy: f64,
}

/// How much of the text the interpreter turned into programs. `bound`
/// counts interpreted programs whose names all resolve in the game.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct InterpretationStats {
    pub sentences: usize,
    pub interpreted: usize,
    pub bound: usize,
}

impl InterpretationStats {
    /// Percent of sentences that produced a program.
    pub fn coverage(&self) -> f64 {
        percent(self.interpreted, self.sentences)
    }

    /// Percent of produced programs that bind; 100 when none were produced.
    pub fn precision(&self) -> f64 {
        if self.interpreted == 0 {
            100.0
        } else {
            percent(self.bound, self.interpreted)
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    /// Sorted by record id.
    pub questions: Vec<QuestionResult>,
    pub sections: Vec<SectionAccuracy>,
    /// Records the runner could not use (wrong section, missing annotations).
    pub skipped: usize,
    /// Records stopped by search limits.
    pub limits_exceeded: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interpretation: Option<InterpretationStats>,
}

fn percent(n: usize, d: usize) -> f64 {
    if d == 0 {
        0.0
    } else {
        100.0 * n as f64 / d as f64
    }
}

impl EvalReport {
    /// Sorts questions by id and recomputes the per-section accuracies.
    pub(crate) fn finish(mut questions: Vec<QuestionResult>) -> Self {
        questions.sort_by(|a, b| a.id.cmp(&b.id));
        let mut sections = Vec::new();
        for section in [Section::AR, Section::LR, Section::RC] {
            let of: Vec<&QuestionResult> = questions.iter().filter(|q| q.section == section).collect();
            if of.is_empty() {
                continue;
            }
            let correct = of.iter().filter(|q| q.is_correct()).count();
            sections.push(SectionAccuracy {
                section,
                correct,
                total: of.len(),
                accuracy: percent(correct, of.len()),
            });
        }
        Self {
            questions,
            sections,
            ..Self::default()
        }
    }
}

/// Percent of questions answered correctly.
pub fn accuracy(report: &EvalReport) -> f64 {
    let correct = report.questions.iter().filter(|q| q.is_correct()).count();
    percent(correct, report.questions.len())
}
