//! End-to-end runner for logic-game records.

use serde::{Deserialize, Serialize};

use super::{EvalReport, InterpretationStats, ProblemRecord, QuestionResult, Section};
use crate::executor::{score_option, select_answer, solve_traced, ScoreMode, SearchLimits, SolveError, TraceEvent};
use crate::game::GameConfig;
use crate::interp::{
    constraint_sentences, extract_entities, interpret_constraint, interpret_option, question_condition, EntityCatalog,
    Interpretation, TriggerLexicon,
};
use crate::program::{bind, parse_program, BoolExpr, BoundProgram};
use crate::rng::{fnv1a, Mcg64};

/// What to answer when a record cannot be solved.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum OnFailure {
    #[default]
    Abstain,
    /// A uniformly random option drawn from the seed and the record id.
    Random { seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArOptions {
    pub limits: SearchLimits,
    pub mode: ScoreMode,
    pub on_failure: OnFailure,
    /// Use annotated programs when a record has them. With `false` every
    /// program comes from the lexicon; annotated entities are still used.
    pub gold_programs: bool,
}

impl Default for ArOptions {
    fn default() -> Self {
        Self {
            limits: SearchLimits::default(),
            mode: ScoreMode::default(),
            on_failure: OnFailure::default(),
            gold_programs: true,
        }
    }
}

pub fn run_ar(records: &[ProblemRecord], lex: &TriggerLexicon, opts: &ArOptions) -> EvalReport {
    run_ar_traced(records, lex, opts, |_, _| {})
}

/// [`run_ar`] that reports every search node together with its record id.
pub fn run_ar_traced(
    records: &[ProblemRecord],
    lex: &TriggerLexicon,
    opts: &ArOptions,
    mut trace: impl FnMut(&str, &TraceEvent),
) -> EvalReport {
    let mut results = Vec::new();
    let mut stats = InterpretationStats::default();
    let mut skipped = 0;
    let mut limits_exceeded = 0;
    for record in records {
        if record.section != Section::AR {
            skipped += 1;
            continue;
        }
        let mut diagnostics = Vec::new();
        let outcome = solve_record(record, lex, opts, &mut stats, &mut diagnostics, &mut |e| {
            trace(&record.id, e)
        });
        let (predicted, scores) = match outcome {
            Ok(found) => found,
            Err(Failure::Limits) => {
                limits_exceeded += 1;
                (None, Vec::new())
            }
            Err(Failure::Other) => (None, Vec::new()),
        };
        let predicted = predicted.or_else(|| match opts.on_failure {
            OnFailure::Abstain => None,
            OnFailure::Random { seed } => {
                diagnostics.push("answered at random".into());
                Some(Mcg64::new(seed ^ fnv1a(&record.id)).below(record.options.len()))
            }
        });
        results.push(QuestionResult {
            id: record.id.clone(),
            section: record.section,
            predicted,
            gold: record.label,
            scores,
            diagnostics,
        });
    }
    let mut report = EvalReport::finish(results);
    report.skipped = skipped;
    report.limits_exceeded = limits_exceeded;
    report.interpretation = Some(stats);
    report
}

enum Failure {
    Limits,
    Other,
}

fn catalog(record: &ProblemRecord) -> Result<EntityCatalog, String> {
    let annotated = record
        .annotations
        .as_ref()
        .and_then(|a| a.participants.clone().zip(a.positions.clone()));
    match annotated {
        Some((ps, qs)) => EntityCatalog::from_names(ps, qs).map_err(|e| e.to_string()),
        None => extract_entities(&record.context).map_err(|e| e.to_string()),
    }
}

fn config(record: &ProblemRecord, cat: &EntityCatalog) -> Result<GameConfig, String> {
    let mut spec = cat.game_spec();
    if let Some(a) = &record.annotations {
        spec = spec.ordered(a.ordered);
        if let Some(m) = a.multiplicity {
            spec = spec.multiplicity(m);
        }
        if let Some(c) = &a.capacities {
            spec = spec.capacities(c.clone());
        }
    }
    spec.build().map_err(|e| e.to_string())
}

fn parse_gold(texts: &[String], diagnostics: &mut Vec<String>) -> Vec<BoolExpr> {
    texts
        .iter()
        .filter_map(|t| match parse_program(t) {
            Ok(p) => Some(p),
            Err(e) => {
                diagnostics.push(format!("annotated program {t:?}: {e}"));
                None
            }
        })
        .collect()
}

// Binds one interpreted program and updates the precision counters.
fn bind_counted(
    program: &BoolExpr,
    cfg: &GameConfig,
    stats: &mut InterpretationStats,
    diagnostics: &mut Vec<String>,
) -> Option<BoundProgram> {
    stats.interpreted += 1;
    match bind(program, cfg) {
        Ok(b) => {
            stats.bound += 1;
            Some(b)
        }
        Err(e) => {
            diagnostics.push(format!("{program}: {e}"));
            None
        }
    }
}

fn solve_record(
    record: &ProblemRecord,
    lex: &TriggerLexicon,
    opts: &ArOptions,
    stats: &mut InterpretationStats,
    diagnostics: &mut Vec<String>,
    trace: &mut dyn FnMut(&TraceEvent),
) -> Result<(Option<usize>, Vec<f64>), Failure> {
    let fail = |diagnostics: &mut Vec<String>, message: String| {
        diagnostics.push(message);
        Failure::Other
    };
    let cat = catalog(record).map_err(|m| fail(diagnostics, m))?;
    let cfg = config(record, &cat).map_err(|m| fail(diagnostics, m))?;
    let gold = record.annotations.as_ref().filter(|_| opts.gold_programs);

    let mut programs: Vec<BoundProgram> = Vec::new();
    match gold.and_then(|a| a.programs.as_ref()) {
        Some(texts) => {
            for p in parse_gold(texts, diagnostics) {
                programs.push(bind(&p, &cfg).map_err(|e| fail(diagnostics, format!("{p}: {e}")))?);
            }
        }
        None => {
            for sentence in constraint_sentences(&record.context) {
                stats.sentences += 1;
                match interpret_constraint(sentence, &cat, lex) {
                    Interpretation::Program(p) => programs.extend(bind_counted(&p, &cfg, stats, diagnostics)),
                    Interpretation::NoMatch => diagnostics.push(format!("skipped {sentence:?}")),
                    Interpretation::Unresolved { rule_line, reason } => {
                        diagnostics.push(format!("rule at line {rule_line} on {sentence:?}: {reason}"))
                    }
                }
            }
        }
    }
    match gold.and_then(|a| a.question_programs.as_ref()) {
        Some(texts) => {
            for p in parse_gold(texts, diagnostics) {
                programs.push(bind(&p, &cfg).map_err(|e| fail(diagnostics, format!("{p}: {e}")))?);
            }
        }
        None => {
            if record.question.trim_start().to_ascii_lowercase().starts_with("if ") {
                stats.sentences += 1;
            }
            if let Some(p) = question_condition(&record.question, &cat, lex) {
                programs.extend(bind_counted(&p, &cfg, stats, diagnostics));
            }
        }
    }

    let legit = match solve_traced(&programs, &cfg, opts.limits, |e| trace(e)) {
        Ok((set, _)) => set,
        Err(SolveError::LimitsExceeded { stats }) => {
            diagnostics.push(format!("limits exceeded after {} nodes", stats.nodes));
            return Err(Failure::Limits);
        }
        Err(SolveError::Unsatisfiable) => Vec::new(),
    };
    if legit.is_empty() {
        return Err(fail(diagnostics, "unsatisfiable".into()));
    }

    let mut scores = Vec::with_capacity(record.options.len());
    for (i, option) in record.options.iter().enumerate() {
        let program = match gold.and_then(|a| a.option_programs.as_ref()) {
            Some(ps) => ps[i]
                .as_deref()
                .and_then(|t| parse_gold(&[t.to_string()], diagnostics).pop()),
            None => {
                stats.sentences += 1;
                match interpret_option(&record.question, option, &cat, lex, i) {
                    Ok(p) => Some(p),
                    Err(e) => {
                        diagnostics.push(e.to_string());
                        None
                    }
                }
            }
        };
        let bound = match (&program, gold.and_then(|a| a.option_programs.as_ref())) {
            (Some(p), Some(_)) => bind(p, &cfg).map_err(|e| diagnostics.push(format!("{p}: {e}"))).ok(),
            (Some(p), None) => bind_counted(p, &cfg, stats, diagnostics),
            (None, _) => None,
        };
        scores.push(score_option(&legit, bound.as_ref(), &cfg, opts.mode, i));
    }
    let predicted = select_answer(&scores, record.polarity).map_err(|e| fail(diagnostics, e.to_string()))?;
    Ok((Some(predicted), scores.iter().map(|s| s.value).collect()))
}
