//! Participants, positions and the tri-state assignment grid.
//!
//! An [`Assignment`] is a table with one row per position and one column per
//! participant. Cells start `Unknown` and are fixed through
//! [`Assignment::set_cell`], which also runs unit propagation for the
//! participant multiplicity and the per-position capacities. A contradiction
//! is reported as `None`; it is a normal outcome during search.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GameError {
    #[error("duplicate participant name {0:?}")]
    DuplicateParticipant(String),
    #[error("duplicate position name {0:?}")]
    DuplicatePosition(String),
    #[error("empty entity name")]
    EmptyName,
    #[error("expected {expected} capacities, found {found}")]
    CapacityCount { expected: usize, found: usize },
    #[error("capacity of {position:?} has min {min} > max {max}")]
    CapacityRange { position: String, min: usize, max: usize },
    #[error("capacities admit between {min} and {max} participants, but there are {participants}")]
    CapacityTotal {
        min: usize,
        max: usize,
        participants: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CellState {
    True,
    False,
    Unknown,
}

impl CellState {
    fn glyph(self) -> char {
        match self {
            CellState::True => 'T',
            CellState::False => 'F',
            CellState::Unknown => '.',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Participant {
    pub id: usize,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Position {
    pub id: usize,
    pub name: String,
    /// 1-based slot number in ordering games.
    pub index: Option<u32>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Multiplicity {
    /// Every participant takes exactly one position.
    #[default]
    ExactlyOne,
    /// A participant takes one position or none.
    AtMostOne,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Capacity {
    pub min: usize,
    pub max: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameConfig {
    participants: Vec<Participant>,
    positions: Vec<Position>,
    multiplicity: Multiplicity,
    capacities: Vec<Capacity>,
    ordered: bool,
}

/// Builder-style description of a game, validated by [`GameConfig::new`].
#[derive(Debug, Clone, Default)]
pub struct GameSpec {
    pub participants: Vec<String>,
    pub positions: Vec<String>,
    pub multiplicity: Multiplicity,
    /// One `(min, max)` per position; `None` means `[0, |participants|]` everywhere.
    pub capacities: Option<Vec<Capacity>>,
    /// Positions are slots `1..=n` in the listed order.
    pub ordered: bool,
}

impl GameSpec {
    pub fn new<P, Q>(participants: P, positions: Q) -> Self
    where
        P: IntoIterator,
        P::Item: Into<String>,
        Q: IntoIterator,
        Q::Item: Into<String>,
    {
        Self {
            participants: participants.into_iter().map(Into::into).collect(),
            positions: positions.into_iter().map(Into::into).collect(),
            ..Self::default()
        }
    }

    pub fn ordered(mut self, ordered: bool) -> Self {
        self.ordered = ordered;
        self
    }

    pub fn multiplicity(mut self, m: Multiplicity) -> Self {
        self.multiplicity = m;
        self
    }

    pub fn capacities(mut self, caps: Vec<Capacity>) -> Self {
        self.capacities = Some(caps);
        self
    }

    /// The same `[min, max]` for every position.
    pub fn uniform_capacity(mut self, min: usize, max: usize) -> Self {
        self.capacities = Some(vec![Capacity { min, max }; self.positions.len()]);
        self
    }

    pub fn build(self) -> Result<GameConfig, GameError> {
        GameConfig::new(self)
    }
}

impl GameConfig {
    pub fn new(spec: GameSpec) -> Result<Self, GameError> {
        let n = spec.participants.len();
        let participants = named(spec.participants, GameError::DuplicateParticipant)?
            .into_iter()
            .enumerate()
            .map(|(id, name)| Participant { id, name })
            .collect::<Vec<_>>();
        let positions = named(spec.positions, GameError::DuplicatePosition)?
            .into_iter()
            .enumerate()
            .map(|(id, name)| Position {
                id,
                name,
                index: spec.ordered.then_some(id as u32 + 1),
            })
            .collect::<Vec<_>>();
        let capacities = match spec.capacities {
            Some(caps) => caps,
            None => vec![Capacity { min: 0, max: n }; positions.len()],
        };
        if capacities.len() != positions.len() {
            return Err(GameError::CapacityCount {
                expected: positions.len(),
                found: capacities.len(),
            });
        }
        for (cap, pos) in capacities.iter().zip(&positions) {
            if cap.min > cap.max {
                return Err(GameError::CapacityRange {
                    position: pos.name.clone(),
                    min: cap.min,
                    max: cap.max,
                });
            }
        }
        let min: usize = capacities.iter().map(|c| c.min).sum();
        let max: usize = capacities.iter().map(|c| c.max).sum();
        let fits = match spec.multiplicity {
            Multiplicity::ExactlyOne => min <= n && n <= max,
            Multiplicity::AtMostOne => min <= n,
        };
        if !fits {
            return Err(GameError::CapacityTotal {
                min,
                max,
                participants: n,
            });
        }
        Ok(Self {
            participants,
            positions,
            multiplicity: spec.multiplicity,
            capacities,
            ordered: spec.ordered,
        })
    }

    pub fn participants(&self) -> &[Participant] {
        &self.participants
    }

    pub fn positions(&self) -> &[Position] {
        &self.positions
    }

    pub fn multiplicity(&self) -> Multiplicity {
        self.multiplicity
    }

    pub fn capacity(&self, position: usize) -> Capacity {
        self.capacities[position]
    }

    pub fn capacities(&self) -> &[Capacity] {
        &self.capacities
    }

    pub fn is_ordered(&self) -> bool {
        self.ordered
    }

    pub fn participant_id(&self, name: &str) -> Option<usize> {
        lookup(self.participants.iter().map(|p| p.name.as_str()), name)
    }

    pub fn position_id(&self, name: &str) -> Option<usize> {
        lookup(self.positions.iter().map(|p| p.name.as_str()), name)
    }

    /// Ordinal of a position, 1-based, for ordered games.
    pub fn slot(&self, position: usize) -> Option<i64> {
        self.positions[position].index.map(i64::from)
    }
}

fn named(names: Vec<String>, dup: fn(String) -> GameError) -> Result<Vec<String>, GameError> {
    let mut seen = std::collections::HashSet::new();
    for name in &names {
        if name.trim().is_empty() {
            return Err(GameError::EmptyName);
        }
        if !seen.insert(name.as_str()) {
            return Err(dup(name.clone()));
        }
    }
    Ok(names)
}

// exact match, then a unique case-insensitive match, then a unique name
// whose first word matches ("X" for "X committee")
fn lookup<'a>(names: impl Iterator<Item = &'a str> + Clone, wanted: &str) -> Option<usize> {
    if let Some(i) = names.clone().position(|n| n == wanted) {
        return Some(i);
    }
    let unique = |pred: &dyn Fn(&str) -> bool| {
        let mut hits = names.clone().enumerate().filter(|(_, n)| pred(n)).map(|(i, _)| i);
        match (hits.next(), hits.next()) {
            (Some(i), None) => Some(i),
            _ => None,
        }
    };
    unique(&|n| n.eq_ignore_ascii_case(wanted)).or_else(|| {
        unique(&|n| {
            n.split_whitespace().count() > 1
                && n.split_whitespace()
                    .next()
                    .is_some_and(|w| w.eq_ignore_ascii_case(wanted))
        })
    })
}

/// Tri-state grid, rows = positions and columns = participants.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    rows: usize,
    cols: usize,
    cells: Vec<CellState>,
}

impl Assignment {
    pub fn new(cfg: &GameConfig) -> Self {
        let rows = cfg.positions.len();
        let cols = cfg.participants.len();
        Self {
            rows,
            cols,
            cells: vec![CellState::Unknown; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn cell(&self, participant: usize, position: usize) -> CellState {
        self.cells[position * self.cols + participant]
    }

    fn put(&mut self, participant: usize, position: usize, v: CellState) {
        self.cells[position * self.cols + participant] = v;
    }

    pub fn is_complete(&self) -> bool {
        !self.cells.contains(&CellState::Unknown)
    }

    /// The position holding `participant`, if its column has a `True`.
    pub fn position_of(&self, participant: usize) -> Option<usize> {
        (0..self.rows).find(|&r| self.cell(participant, r) == CellState::True)
    }

    /// No `Unknown` left in the participant's column.
    pub fn is_determined(&self, participant: usize) -> bool {
        (0..self.rows).all(|r| self.cell(participant, r) != CellState::Unknown)
    }

    /// Sets one cell and propagates. `None` means the result is contradictory.
    pub fn set_cell(&self, cfg: &GameConfig, participant: usize, position: usize, v: bool) -> Option<Assignment> {
        self.set_cells(cfg, &[(participant, position, v)])
    }

    /// Sets several cells, then propagates once.
    pub fn set_cells(&self, cfg: &GameConfig, cells: &[(usize, usize, bool)]) -> Option<Assignment> {
        let mut next = self.clone();
        for &(p, pos, v) in cells {
            let want = if v { CellState::True } else { CellState::False };
            match next.cell(p, pos) {
                CellState::Unknown => next.put(p, pos, want),
                s if s == want => {}
                _ => return None,
            }
        }
        next.propagate(cfg)?;
        Some(next)
    }

    // Runs every rule to a fixpoint. All rules are monotone, so the
    // result does not depend on the order cells were set in.
    fn propagate(&mut self, cfg: &GameConfig) -> Option<()> {
        loop {
            let mut changed = false;
            for p in 0..self.cols {
                let mut trues = 0;
                let mut unknown = Vec::new();
                for r in 0..self.rows {
                    match self.cell(p, r) {
                        CellState::True => trues += 1,
                        CellState::Unknown => unknown.push(r),
                        CellState::False => {}
                    }
                }
                if trues > 1 {
                    return None;
                }
                if trues == 1 {
                    for r in unknown {
                        self.put(p, r, CellState::False);
                        changed = true;
                    }
                } else if cfg.multiplicity == Multiplicity::ExactlyOne {
                    match unknown.len() {
                        0 => return None,
                        1 => {
                            self.put(p, unknown[0], CellState::True);
                            changed = true;
                        }
                        _ => {}
                    }
                }
            }
            for r in 0..self.rows {
                let cap = cfg.capacities[r];
                let mut trues = 0;
                let mut unknown = Vec::new();
                for p in 0..self.cols {
                    match self.cell(p, r) {
                        CellState::True => trues += 1,
                        CellState::Unknown => unknown.push(p),
                        CellState::False => {}
                    }
                }
                if trues > cap.max || trues + unknown.len() < cap.min {
                    return None;
                }
                if unknown.is_empty() {
                    continue;
                }
                if trues == cap.max {
                    for p in unknown {
                        self.put(p, r, CellState::False);
                    }
                    changed = true;
                } else if trues + unknown.len() == cap.min {
                    for p in unknown {
                        self.put(p, r, CellState::True);
                    }
                    changed = true;
                }
            }
            if !changed {
                return Some(());
            }
        }
    }

    /// Multiplicity and capacity hold on the determined cells.
    pub fn validate(&self, cfg: &GameConfig) -> bool {
        if self.rows != cfg.positions.len() || self.cols != cfg.participants.len() {
            return false;
        }
        for p in 0..self.cols {
            let trues = (0..self.rows).filter(|&r| self.cell(p, r) == CellState::True).count();
            let falses = (0..self.rows).filter(|&r| self.cell(p, r) == CellState::False).count();
            if trues > 1 {
                return false;
            }
            if cfg.multiplicity == Multiplicity::ExactlyOne && falses == self.rows {
                return false;
            }
        }
        for r in 0..self.rows {
            let cap = cfg.capacities[r];
            let trues = (0..self.cols).filter(|&p| self.cell(p, r) == CellState::True).count();
            let open = (0..self.cols)
                .filter(|&p| self.cell(p, r) == CellState::Unknown)
                .count();
            if trues > cap.max || trues + open < cap.min {
                return false;
            }
        }
        true
    }

    /// Fixed-width table: header of participant names, one row per
    /// position, cells `T`, `F` or `.`. Trailing spaces are trimmed.
    pub fn render(&self, cfg: &GameConfig) -> String {
        let label = cfg.positions.iter().map(|p| p.name.chars().count()).max().unwrap_or(0);
        let widths: Vec<usize> = cfg.participants.iter().map(|p| p.name.chars().count().max(1)).collect();
        let mut out = String::new();
        let mut line = format!("{:label$}", "");
        for (p, w) in cfg.participants.iter().zip(&widths) {
            line.push_str(&format!(" {:<w$}", p.name));
        }
        out.push_str(line.trim_end());
        out.push('\n');
        for (r, pos) in cfg.positions.iter().enumerate() {
            let mut line = format!("{:<label$}", pos.name);
            for (p, w) in widths.iter().enumerate() {
                line.push_str(&format!(" {:<w$}", self.cell(p, r).glyph()));
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: String = (0..self.cols).map(|p| self.cell(p, r).glyph()).collect();
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

/// All extensions of `a` in which every participant of `scope` has a fully
/// determined column.
///
/// Participants are branched on in id order, each over its open positions
/// in id order; under at-most-one, "unplaced" is the last branch.
pub fn enumerate_completions(a: &Assignment, cfg: &GameConfig, scope: &[usize]) -> Vec<Assignment> {
    let mut order: Vec<usize> = scope.to_vec();
    order.sort_unstable();
    order.dedup();
    let mut frontier = vec![a.clone()];
    for &p in &order {
        let mut next = Vec::with_capacity(frontier.len());
        for node in frontier {
            if node.is_determined(p) {
                next.push(node);
                continue;
            }
            if node.position_of(p).is_none() {
                for r in 0..node.rows {
                    if node.cell(p, r) == CellState::Unknown {
                        next.extend(node.set_cell(cfg, p, r, true));
                    }
                }
                if cfg.multiplicity == Multiplicity::AtMostOne {
                    let open: Vec<(usize, usize, bool)> = (0..node.rows)
                        .filter(|&r| node.cell(p, r) == CellState::Unknown)
                        .map(|r| (p, r, false))
                        .collect();
                    next.extend(node.set_cells(cfg, &open));
                }
            }
        }
        frontier = next;
    }
    frontier
}
