//! Tree search over partial assignments, option scoring and answer selection.
//!
//! The search starts from the cells that single programs force on their own,
//! then takes the programs in input order. Each step expands every frontier
//! node over the participants the program mentions and drops the branches it
//! evaluates `False`. A final pass grounds the remaining columns and keeps
//! the complete assignments on which every program is `True`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{enumerate_completions, Assignment, GameConfig};
use crate::program::{BoundProgram, TriBool};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchLimits {
    pub max_nodes: usize,
    pub max_assignments: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        Self {
            max_nodes: 1_000_000,
            max_assignments: 100_000,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    /// Nodes created, the root included.
    pub nodes: usize,
    pub pruned: usize,
    pub assignments: usize,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("unsatisfiable constraints")]
    Unsatisfiable,
    #[error("search limits exceeded after {} nodes and {} assignments", .stats.nodes, .stats.assignments)]
    LimitsExceeded { stats: SearchStats },
}

/// One node of the search tree. `program` is `None` for the root and for
/// nodes made by the grounding pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub node: usize,
    pub parent: Option<usize>,
    pub program: Option<usize>,
    pub verdict: TriBool,
}

/// Applies every program that pins cells by itself (`To`, `NOT To`,
/// conjunctions of those, `VALUE(p) = n`).
pub fn initial_assignment(programs: &[BoundProgram], cfg: &GameConfig) -> Result<Assignment, SolveError> {
    let cells: Vec<_> = programs.iter().filter_map(|p| p.forced_cells(cfg)).flatten().collect();
    Assignment::new(cfg)
        .set_cells(cfg, &cells)
        .ok_or(SolveError::Unsatisfiable)
}

pub fn solve(programs: &[BoundProgram], cfg: &GameConfig, limits: SearchLimits) -> Result<Vec<Assignment>, SolveError> {
    solve_traced(programs, cfg, limits, |_| {}).map(|(set, _)| set)
}

/// [`solve`] that reports every created node to `trace`.
pub fn solve_traced(
    programs: &[BoundProgram],
    cfg: &GameConfig,
    limits: SearchLimits,
    mut trace: impl FnMut(&TraceEvent),
) -> Result<(Vec<Assignment>, SearchStats), SolveError> {
    let mut stats = SearchStats::default();
    let root = match initial_assignment(programs, cfg) {
        Ok(a) => a,
        Err(_) => return Ok((Vec::new(), stats)),
    };
    stats.nodes = 1;
    trace(&TraceEvent {
        node: 0,
        parent: None,
        program: None,
        verdict: all_of(programs, &root, cfg),
    });

    let mut frontier = vec![(0usize, root)];
    let mut step = |frontier: Vec<(usize, Assignment)>,
                    scope: &[usize],
                    program: Option<usize>,
                    stats: &mut SearchStats,
                    verdict: &dyn Fn(&Assignment) -> TriBool,
                    keep: &dyn Fn(TriBool) -> bool|
     -> Result<Vec<(usize, Assignment)>, SolveError> {
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for (id, node) in frontier {
            for child in enumerate_completions(&node, cfg, scope) {
                let v = verdict(&child);
                let child_id = stats.nodes;
                stats.nodes += 1;
                if stats.nodes > limits.max_nodes {
                    return Err(SolveError::LimitsExceeded { stats: *stats });
                }
                trace(&TraceEvent {
                    node: child_id,
                    parent: Some(id),
                    program,
                    verdict: v,
                });
                if !keep(v) {
                    stats.pruned += 1;
                } else if seen.insert(child.clone()) {
                    next.push((child_id, child));
                }
            }
        }
        Ok(next)
    };

    for (i, program) in programs.iter().enumerate() {
        let scope = program.involved_participants(cfg);
        frontier = step(frontier, &scope, Some(i), &mut stats, &|a| program.eval(a, cfg), &|v| {
            v != TriBool::False
        })?;
    }
    let everyone: Vec<usize> = (0..cfg.participants().len()).collect();
    let leaves = step(
        frontier,
        &everyone,
        None,
        &mut stats,
        &|a| all_of(programs, a, cfg),
        &|v| v == TriBool::True,
    )?;

    let set: BTreeSet<Assignment> = leaves
        .into_iter()
        .map(|(_, a)| a)
        .filter(|a| a.is_complete() && a.validate(cfg))
        .collect();
    stats.assignments = set.len();
    if set.len() > limits.max_assignments {
        return Err(SolveError::LimitsExceeded { stats });
    }
    Ok((set.into_iter().collect(), stats))
}

fn all_of(programs: &[BoundProgram], a: &Assignment, cfg: &GameConfig) -> TriBool {
    programs.iter().fold(TriBool::True, |acc, p| acc.and(p.eval(a, cfg)))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScoreMode {
    /// Number of legitimate assignments satisfying the option.
    Count,
    /// That number divided by the number of legitimate assignments.
    #[default]
    Ratio,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptionScore {
    pub option_index: usize,
    pub mode: ScoreMode,
    pub value: f64,
    /// The option had no program; its score is 0.
    pub flagged: bool,
}

/// Scores one option. `option` is `None` for an option that could not be
/// interpreted.
pub fn score_option(
    legit: &[Assignment],
    option: Option<&BoundProgram>,
    cfg: &GameConfig,
    mode: ScoreMode,
    option_index: usize,
) -> OptionScore {
    let Some(program) = option else {
        return OptionScore {
            option_index,
            mode,
            value: 0.0,
            flagged: true,
        };
    };
    let hits = legit.iter().filter(|a| program.eval(a, cfg) == TriBool::True).count();
    let value = match mode {
        ScoreMode::Count => hits as f64,
        ScoreMode::Ratio if legit.is_empty() => 0.0,
        ScoreMode::Ratio => hits as f64 / legit.len() as f64,
    };
    OptionScore {
        option_index,
        mode,
        value,
        flagged: false,
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Polarity {
    /// Pick the option with the highest score.
    #[default]
    Positive,
    /// EXCEPT / "cannot be true" questions: pick the lowest.
    Negative,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("expected 5 option scores, got {0}")]
pub struct WrongOptionCount(pub usize);

/// Argmax (or argmin for negative polarity); ties go to the lowest index.
pub fn select_answer(scores: &[OptionScore], polarity: Polarity) -> Result<usize, WrongOptionCount> {
    if scores.len() != 5 {
        return Err(WrongOptionCount(scores.len()));
    }
    let mut best = 0;
    for i in 1..scores.len() {
        let better = match polarity {
            Polarity::Positive => scores[i].value > scores[best].value,
            Polarity::Negative => scores[i].value < scores[best].value,
        };
        if better {
            best = i;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{CellState, GameSpec};
    use crate::program::{bind, parse_program};

    fn bound(cfg: &GameConfig, srcs: &[&str]) -> Vec<BoundProgram> {
        srcs.iter()
            .map(|s| bind(&parse_program(s).unwrap(), cfg).unwrap())
            .collect()
    }

    fn committee() -> GameConfig {
        GameSpec::new(["A", "B", "C", "D", "E", "F", "G"], ["X committee", "Y committee"])
            .build()
            .unwrap()
    }

    fn scores(values: [f64; 5]) -> Vec<OptionScore> {
        values
            .iter()
            .enumerate()
            .map(|(i, &value)| OptionScore {
                option_index: i,
                mode: ScoreMode::Count,
                value,
                flagged: false,
            })
            .collect()
    }

    #[test]
    fn initial_cells_from_conjunction() {
        let cfg = committee();
        let ps = bound(&cfg, &["To(D,X) AND To(F,X)"]);
        let a = initial_assignment(&ps, &cfg).unwrap();
        assert_eq!(a.cell(3, 0), CellState::True);
        assert_eq!(a.cell(5, 0), CellState::True);
        assert_eq!(a.cell(3, 1), CellState::False);
        assert_eq!(a.cell(5, 1), CellState::False);
        assert_eq!(a.cell(0, 0), CellState::Unknown);
    }

    #[test]
    fn initial_without_forcing_is_fresh() {
        let cfg = committee();
        let ps = bound(&cfg, &["IfThen({To(A,X)}, {To(B,Y)})"]);
        assert_eq!(initial_assignment(&ps, &cfg).unwrap(), Assignment::new(&cfg));
    }

    #[test]
    fn direct_contradiction() {
        let cfg = committee();
        let ps = bound(&cfg, &["To(A,X)", "To(A,Y)"]);
        assert_eq!(initial_assignment(&ps, &cfg), Err(SolveError::Unsatisfiable));
        assert!(solve(&ps, &cfg, SearchLimits::default()).unwrap().is_empty());
    }

    #[test]
    fn before_on_two_slots() {
        let cfg = GameSpec::new(["A", "B"], ["1", "2"])
            .ordered(true)
            .uniform_capacity(0, 1)
            .build()
            .unwrap();
        let ps = bound(&cfg, &["Before(A,B)"]);
        let set = solve(&ps, &cfg, SearchLimits::default()).unwrap();
        assert_eq!(set.len(), 1);
        assert_eq!(set[0].position_of(0), Some(0));
        assert_eq!(set[0].position_of(1), Some(1));
    }

    #[test]
    fn no_programs_counts_everything() {
        let cfg = GameSpec::new(["A", "B"], ["X", "Y"]).build().unwrap();
        assert_eq!(solve(&[], &cfg, SearchLimits::default()).unwrap().len(), 4);
    }

    #[test]
    fn limits_fail_loudly() {
        let cfg = committee();
        let limits = SearchLimits {
            max_nodes: 10,
            max_assignments: 10,
        };
        assert!(matches!(
            solve(&[], &cfg, limits),
            Err(SolveError::LimitsExceeded { .. })
        ));
        let limits = SearchLimits {
            max_nodes: 1_000,
            max_assignments: 10,
        };
        match solve(&[], &cfg, limits) {
            Err(SolveError::LimitsExceeded { stats }) => assert_eq!(stats.assignments, 128),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn trace_has_one_root() {
        let cfg = GameSpec::new(["A", "B"], ["X", "Y"]).build().unwrap();
        let ps = bound(&cfg, &["To(A,X) OR To(B,X)"]);
        let mut events = Vec::new();
        let (set, stats) = solve_traced(&ps, &cfg, SearchLimits::default(), |e| events.push(*e)).unwrap();
        assert_eq!(set.len(), 3);
        assert_eq!(events.len(), stats.nodes);
        assert_eq!(events.iter().filter(|e| e.parent.is_none()).count(), 1);
        assert!(events.iter().all(|e| e.parent.is_none_or(|p| p < e.node)));
    }

    #[test]
    fn ratio_and_count() {
        let cfg = GameSpec::new(["A", "B"], ["X", "Y"]).build().unwrap();
        let legit = solve(&[], &cfg, SearchLimits::default()).unwrap();
        let opt = &bound(&cfg, &["To(A,X) OR To(B,X)"])[0];
        let c = score_option(&legit, Some(opt), &cfg, ScoreMode::Count, 0);
        let r = score_option(&legit, Some(opt), &cfg, ScoreMode::Ratio, 0);
        assert_eq!((c.value, r.value), (3.0, 0.75));
        assert_eq!(score_option(&[], Some(opt), &cfg, ScoreMode::Ratio, 0).value, 0.0);
        let none = score_option(&legit, None, &cfg, ScoreMode::Ratio, 4);
        assert!(none.flagged && none.value == 0.0);
    }

    #[test]
    fn selection_rules() {
        assert_eq!(
            select_answer(&scores([0.0, 0.0, 4.0, 1.0, 0.0]), Polarity::Positive),
            Ok(2)
        );
        assert_eq!(select_answer(&scores([1.0; 5]), Polarity::Positive), Ok(0));
        assert_eq!(
            select_answer(&scores([1.0, 1.0, 0.0, 1.0, 1.0]), Polarity::Negative),
            Ok(2)
        );
        assert_eq!(
            select_answer(&scores([1.0; 5])[..4], Polarity::Positive),
            Err(WrongOptionCount(4))
        );
    }
}
