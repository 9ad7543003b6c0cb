//! Name binding and three-valued evaluation over partial assignments.
//!
//! Numeric terms evaluate to an integer interval, to `Absent` (the term is
//! undefined, e.g. the slot of a participant left out under at-most-one),
//! or to `Unknown`. Every shape only moves toward a more definite answer as
//! cells get resolved, so a `True` or `False` verdict on a partial
//! assignment holds for all of its refinements.
//!
//! | term | partial assignment |
//! |------|--------------------|
//! | `To(p, pos)` | the cell |
//! | `VALUE(p)` | slot of p's `True` row, `Absent` if the column is all `False`, else `Unknown` |
//! | `COUNT(S, pos)` | `[#True, #True + #Unknown]` over members of `S` |
//! | `Before(p, q)` | `VALUE(p) < VALUE(q)` |
//! | `Adjacent(p, q)` | `abs(VALUE(p) - VALUE(q)) = 1` |
//! | comparison | decided once the intervals no longer straddle; `False` on `Absent` |
//! | `IfThen(S1, S2)` | `NOT AND(S1) OR AND(S2)` |

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{BoolExpr, CmpOp, FunctionKind, NumExpr, Who};
use crate::game::{Assignment, CellState, GameConfig};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("unknown participant {0:?}")]
    UnknownParticipant(String),
    #[error("unknown position {0:?}")]
    UnknownPosition(String),
    #[error("{0} needs an ordered game")]
    Unordered(FunctionKind),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TriBool {
    True,
    False,
    Unknown,
}

impl TriBool {
    pub fn and(self, other: TriBool) -> TriBool {
        match (self, other) {
            (TriBool::False, _) | (_, TriBool::False) => TriBool::False,
            (TriBool::True, TriBool::True) => TriBool::True,
            _ => TriBool::Unknown,
        }
    }

    pub fn or(self, other: TriBool) -> TriBool {
        match (self, other) {
            (TriBool::True, _) | (_, TriBool::True) => TriBool::True,
            (TriBool::False, TriBool::False) => TriBool::False,
            _ => TriBool::Unknown,
        }
    }

    pub fn implies(self, other: TriBool) -> TriBool {
        (!self).or(other)
    }

    pub fn is_known(self) -> bool {
        self != TriBool::Unknown
    }
}

impl std::ops::Not for TriBool {
    type Output = TriBool;

    fn not(self) -> TriBool {
        match self {
            TriBool::True => TriBool::False,
            TriBool::False => TriBool::True,
            TriBool::Unknown => TriBool::Unknown,
        }
    }
}

impl From<bool> for TriBool {
    fn from(b: bool) -> Self {
        if b {
            TriBool::True
        } else {
            TriBool::False
        }
    }
}

impl From<CellState> for TriBool {
    fn from(c: CellState) -> Self {
        match c {
            CellState::True => TriBool::True,
            CellState::False => TriBool::False,
            CellState::Unknown => TriBool::Unknown,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum BWho {
    One(usize),
    ArgMax(Vec<usize>),
    ArgMin(Vec<usize>),
    Select(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum BNum {
    Const(i64),
    Value(BWho),
    Count(Vec<usize>, Option<usize>),
    Add(Box<BNum>, Box<BNum>),
    Sub(Box<BNum>, Box<BNum>),
    Max(Vec<BNum>),
    Min(Vec<BNum>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum BBool {
    To(BWho, usize),
    Before(BWho, BWho),
    After(BWho, BWho),
    Adjacent(BWho, BWho),
    Compare(CmpOp, BNum, BNum),
    IfThen(Vec<BBool>, Vec<BBool>),
    And(Box<BBool>, Box<BBool>),
    Or(Box<BBool>, Box<BBool>),
    Not(Box<BBool>),
}

/// A program whose names are resolved against one game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundProgram {
    source: BoolExpr,
    root: BBool,
    participants: BTreeSet<usize>,
    positions: BTreeSet<usize>,
    selects: bool,
}

struct Binder<'a> {
    cfg: &'a GameConfig,
    participants: BTreeSet<usize>,
    positions: BTreeSet<usize>,
    selects: bool,
}

impl Binder<'_> {
    fn order(&self, kind: FunctionKind) -> Result<(), EvalError> {
        if self.cfg.is_ordered() {
            Ok(())
        } else {
            Err(EvalError::Unordered(kind))
        }
    }

    fn participant(&mut self, name: &str) -> Result<usize, EvalError> {
        let id = self
            .cfg
            .participant_id(name)
            .ok_or_else(|| EvalError::UnknownParticipant(name.to_string()))?;
        self.participants.insert(id);
        Ok(id)
    }

    fn position(&mut self, name: &str) -> Result<usize, EvalError> {
        let id = self
            .cfg
            .position_id(name)
            .ok_or_else(|| EvalError::UnknownPosition(name.to_string()))?;
        self.positions.insert(id);
        Ok(id)
    }

    fn who(&mut self, w: &Who) -> Result<BWho, EvalError> {
        Ok(match w {
            Who::Named(n) => BWho::One(self.participant(n)?),
            Who::ArgMax(ps) => {
                self.order(FunctionKind::ArgMax)?;
                BWho::ArgMax(ps.iter().map(|p| self.participant(p)).collect::<Result<_, _>>()?)
            }
            Who::ArgMin(ps) => {
                self.order(FunctionKind::ArgMin)?;
                BWho::ArgMin(ps.iter().map(|p| self.participant(p)).collect::<Result<_, _>>()?)
            }
            Who::Select(pos) => {
                self.selects = true;
                BWho::Select(self.position(pos)?)
            }
        })
    }

    fn num(&mut self, e: &NumExpr) -> Result<BNum, EvalError> {
        Ok(match e {
            NumExpr::Const(n) => BNum::Const(*n),
            NumExpr::Value(w) => {
                self.order(FunctionKind::Value)?;
                BNum::Value(self.who(w)?)
            }
            NumExpr::Count(ps, pos) => {
                let ps = ps.iter().map(|p| self.participant(p)).collect::<Result<_, _>>()?;
                let pos = pos.as_deref().map(|p| self.position(p)).transpose()?;
                BNum::Count(ps, pos)
            }
            NumExpr::Add(a, b) => BNum::Add(Box::new(self.num(a)?), Box::new(self.num(b)?)),
            NumExpr::Sub(a, b) => BNum::Sub(Box::new(self.num(a)?), Box::new(self.num(b)?)),
            NumExpr::Max(xs) => BNum::Max(xs.iter().map(|x| self.num(x)).collect::<Result<_, _>>()?),
            NumExpr::Min(xs) => BNum::Min(xs.iter().map(|x| self.num(x)).collect::<Result<_, _>>()?),
        })
    }

    fn boolean(&mut self, e: &BoolExpr) -> Result<BBool, EvalError> {
        Ok(match e {
            BoolExpr::To(w, pos) => BBool::To(self.who(w)?, self.position(pos)?),
            BoolExpr::Before(a, b) => {
                self.order(FunctionKind::Before)?;
                BBool::Before(self.who(a)?, self.who(b)?)
            }
            BoolExpr::After(a, b) => {
                self.order(FunctionKind::After)?;
                BBool::After(self.who(a)?, self.who(b)?)
            }
            BoolExpr::Adjacent(a, b) => {
                self.order(FunctionKind::Adjacent)?;
                BBool::Adjacent(self.who(a)?, self.who(b)?)
            }
            BoolExpr::Compare(op, a, b) => BBool::Compare(*op, self.num(a)?, self.num(b)?),
            BoolExpr::IfThen(xs, ys) => BBool::IfThen(
                xs.iter().map(|x| self.boolean(x)).collect::<Result<_, _>>()?,
                ys.iter().map(|y| self.boolean(y)).collect::<Result<_, _>>()?,
            ),
            BoolExpr::And(a, b) => BBool::And(Box::new(self.boolean(a)?), Box::new(self.boolean(b)?)),
            BoolExpr::Or(a, b) => BBool::Or(Box::new(self.boolean(a)?), Box::new(self.boolean(b)?)),
            BoolExpr::Not(a) => BBool::Not(Box::new(self.boolean(a)?)),
        })
    }
}

/// Resolves every name in `program` against `cfg`.
pub fn bind(program: &BoolExpr, cfg: &GameConfig) -> Result<BoundProgram, EvalError> {
    let mut binder = Binder {
        cfg,
        participants: BTreeSet::new(),
        positions: BTreeSet::new(),
        selects: false,
    };
    let root = binder.boolean(program)?;
    Ok(BoundProgram {
        source: program.clone(),
        root,
        participants: binder.participants,
        positions: binder.positions,
        selects: binder.selects,
    })
}

/// Binds and evaluates in one step.
pub fn eval(program: &BoolExpr, a: &Assignment, cfg: &GameConfig) -> Result<TriBool, EvalError> {
    Ok(bind(program, cfg)?.eval(a, cfg))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Num {
    Range(i64, i64),
    Absent,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Person {
    Known(usize),
    Undefined,
    Unknown,
}

struct Ctx<'a> {
    a: &'a Assignment,
    cfg: &'a GameConfig,
}

impl Ctx<'_> {
    fn slot_of(&self, p: usize) -> Num {
        match self.a.position_of(p) {
            Some(r) => match self.cfg.slot(r) {
                Some(s) => Num::Range(s, s),
                None => Num::Absent,
            },
            None if self.a.is_determined(p) => Num::Absent,
            None => Num::Unknown,
        }
    }

    fn extreme(&self, ps: &[usize], highest: bool) -> Person {
        let mut best: Option<(i64, usize)> = None;
        let mut tied = false;
        for &p in ps {
            match self.slot_of(p) {
                Num::Unknown => return Person::Unknown,
                Num::Absent => {}
                Num::Range(v, _) => match best {
                    None => best = Some((v, p)),
                    Some((b, _)) if v == b => tied = true,
                    Some((b, _)) if (highest && v > b) || (!highest && v < b) => {
                        best = Some((v, p));
                        tied = false;
                    }
                    Some(_) => {}
                },
            }
        }
        match best {
            Some((_, p)) if !tied => Person::Known(p),
            _ => Person::Undefined,
        }
    }

    fn person(&self, w: &BWho) -> Person {
        match w {
            BWho::One(p) => Person::Known(*p),
            BWho::ArgMax(ps) => self.extreme(ps, true),
            BWho::ArgMin(ps) => self.extreme(ps, false),
            BWho::Select(pos) => {
                let mut trues = Vec::new();
                let mut open = 0;
                for p in 0..self.a.cols() {
                    match self.a.cell(p, *pos) {
                        CellState::True => trues.push(p),
                        CellState::Unknown => open += 1,
                        CellState::False => {}
                    }
                }
                match (trues.len(), open) {
                    (n, _) if n >= 2 => Person::Undefined,
                    (1, 0) => Person::Known(trues[0]),
                    (0, 0) => Person::Undefined,
                    _ => Person::Unknown,
                }
            }
        }
    }

    fn value(&self, w: &BWho) -> Num {
        match self.person(w) {
            Person::Known(p) => self.slot_of(p),
            Person::Undefined => Num::Absent,
            Person::Unknown => Num::Unknown,
        }
    }

    fn num(&self, e: &BNum) -> Num {
        match e {
            BNum::Const(n) => Num::Range(*n, *n),
            BNum::Value(w) => self.value(w),
            BNum::Count(ps, pos) => {
                let (mut lo, mut hi) = (0, 0);
                for &p in ps {
                    let state = match pos {
                        Some(r) => self.a.cell(p, *r),
                        None if self.a.position_of(p).is_some() => CellState::True,
                        None if self.a.is_determined(p) => CellState::False,
                        None => CellState::Unknown,
                    };
                    match state {
                        CellState::True => {
                            lo += 1;
                            hi += 1;
                        }
                        CellState::Unknown => hi += 1,
                        CellState::False => {}
                    }
                }
                Num::Range(lo, hi)
            }
            BNum::Add(a, b) => combine(self.num(a), self.num(b), |(a0, a1), (b0, b1)| (a0 + b0, a1 + b1)),
            BNum::Sub(a, b) => combine(self.num(a), self.num(b), |(a0, a1), (b0, b1)| (a0 - b1, a1 - b0)),
            BNum::Max(xs) => fold(xs.iter().map(|x| self.num(x)), |(a0, a1), (b0, b1)| {
                (a0.max(b0), a1.max(b1))
            }),
            BNum::Min(xs) => fold(xs.iter().map(|x| self.num(x)), |(a0, a1), (b0, b1)| {
                (a0.min(b0), a1.min(b1))
            }),
        }
    }

    fn boolean(&self, e: &BBool) -> TriBool {
        match e {
            BBool::To(w, pos) => match self.person(w) {
                Person::Known(p) => self.a.cell(p, *pos).into(),
                Person::Undefined => TriBool::False,
                Person::Unknown => TriBool::Unknown,
            },
            BBool::Before(a, b) => compare(CmpOp::Lt, self.value(a), self.value(b)),
            BBool::After(a, b) => compare(CmpOp::Gt, self.value(a), self.value(b)),
            BBool::Adjacent(a, b) => match (self.value(a), self.value(b)) {
                (Num::Absent, _) | (_, Num::Absent) => TriBool::False,
                (Num::Range(a0, a1), Num::Range(b0, b1)) => {
                    let (lo, hi) = (a0 - b1, a1 - b0);
                    if lo == hi {
                        (lo.abs() == 1).into()
                    } else if !(lo..=hi).contains(&1) && !(lo..=hi).contains(&-1) {
                        TriBool::False
                    } else {
                        TriBool::Unknown
                    }
                }
                _ => TriBool::Unknown,
            },
            BBool::Compare(op, a, b) => compare(*op, self.num(a), self.num(b)),
            BBool::IfThen(xs, ys) => {
                let all = |items: &[BBool]| items.iter().fold(TriBool::True, |acc, x| acc.and(self.boolean(x)));
                all(xs).implies(all(ys))
            }
            BBool::And(a, b) => {
                let left = self.boolean(a);
                if left == TriBool::False {
                    return TriBool::False;
                }
                left.and(self.boolean(b))
            }
            BBool::Or(a, b) => {
                let left = self.boolean(a);
                if left == TriBool::True {
                    return TriBool::True;
                }
                left.or(self.boolean(b))
            }
            BBool::Not(a) => !self.boolean(a),
        }
    }
}

fn combine(a: Num, b: Num, f: impl Fn((i64, i64), (i64, i64)) -> (i64, i64)) -> Num {
    match (a, b) {
        (Num::Absent, _) | (_, Num::Absent) => Num::Absent,
        (Num::Range(a0, a1), Num::Range(b0, b1)) => {
            let (lo, hi) = f((a0, a1), (b0, b1));
            Num::Range(lo, hi)
        }
        _ => Num::Unknown,
    }
}

fn fold(mut xs: impl Iterator<Item = Num>, f: impl Fn((i64, i64), (i64, i64)) -> (i64, i64)) -> Num {
    let first = xs.next().unwrap_or(Num::Absent);
    xs.fold(first, |acc, x| combine(acc, x, &f))
}

fn compare(op: CmpOp, a: Num, b: Num) -> TriBool {
    let ((a0, a1), (b0, b1)) = match (a, b) {
        (Num::Absent, _) | (_, Num::Absent) => return TriBool::False,
        (Num::Range(a0, a1), Num::Range(b0, b1)) => ((a0, a1), (b0, b1)),
        _ => return TriBool::Unknown,
    };
    // decided when every pair of values agrees
    let all = op.holds(a0, b0) && op.holds(a0, b1) && op.holds(a1, b0) && op.holds(a1, b1);
    let none = !op.holds(a0, b0) && !op.holds(a0, b1) && !op.holds(a1, b0) && !op.holds(a1, b1);
    match op {
        CmpOp::Eq | CmpOp::Ne => {
            let point = a0 == a1 && b0 == b1;
            let disjoint = a1 < b0 || b1 < a0;
            let eq = if point {
                TriBool::from(a0 == b0)
            } else if disjoint {
                TriBool::False
            } else {
                TriBool::Unknown
            };
            if op == CmpOp::Eq {
                eq
            } else {
                !eq
            }
        }
        _ if all => TriBool::True,
        _ if none => TriBool::False,
        _ => TriBool::Unknown,
    }
}

impl BoundProgram {
    pub fn source(&self) -> &BoolExpr {
        &self.source
    }

    pub fn eval(&self, a: &Assignment, cfg: &GameConfig) -> TriBool {
        Ctx { a, cfg }.boolean(&self.root)
    }

    /// Participant and position ids referenced by name.
    pub fn free_entities(&self) -> (&BTreeSet<usize>, &BTreeSet<usize>) {
        (&self.participants, &self.positions)
    }

    /// Participants whose placement can change the verdict. `SELECT`
    /// depends on everyone.
    pub fn involved_participants(&self, cfg: &GameConfig) -> Vec<usize> {
        if self.selects {
            (0..cfg.participants().len()).collect()
        } else {
            self.participants.iter().copied().collect()
        }
    }

    /// Cells this program fixes on its own, if it is a conjunction of
    /// (possibly negated) `To` atoms or `VALUE(p) = n` pins.
    pub fn forced_cells(&self, cfg: &GameConfig) -> Option<Vec<(usize, usize, bool)>> {
        let mut out = Vec::new();
        forced(&self.root, cfg, &mut out).then_some(out)
    }
}

fn forced(e: &BBool, cfg: &GameConfig, out: &mut Vec<(usize, usize, bool)>) -> bool {
    match e {
        BBool::To(BWho::One(p), pos) => {
            out.push((*p, *pos, true));
            true
        }
        BBool::Not(inner) => match inner.as_ref() {
            BBool::To(BWho::One(p), pos) => {
                out.push((*p, *pos, false));
                true
            }
            _ => false,
        },
        BBool::And(a, b) => forced(a, cfg, out) && forced(b, cfg, out),
        BBool::Compare(CmpOp::Eq, BNum::Value(BWho::One(p)), BNum::Const(n))
        | BBool::Compare(CmpOp::Eq, BNum::Const(n), BNum::Value(BWho::One(p))) => {
            match (0..cfg.positions().len()).find(|&r| cfg.slot(r) == Some(*n)) {
                Some(r) => {
                    out.push((*p, r, true));
                    true
                }
                None => false,
            }
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::GameSpec;
    use crate::program::parse_program;

    fn run(src: &str, a: &Assignment, cfg: &GameConfig) -> TriBool {
        eval(&parse_program(src).unwrap(), a, cfg).unwrap()
    }

    #[test]
    fn kleene_tables() {
        use TriBool::*;
        let all = [True, False, Unknown];
        for x in all {
            assert_eq!(x.and(False), False);
            assert_eq!(x.or(True), True);
            assert_eq!(!!x, x);
        }
        assert_eq!(Unknown.and(True), Unknown);
        assert_eq!(Unknown.or(False), Unknown);
        assert_eq!(False.implies(Unknown), True);
        assert_eq!(Unknown.implies(True), True);
        assert_eq!(True.implies(Unknown), Unknown);
    }

    #[test]
    fn to_reads_the_cell() {
        let cfg = GameSpec::new(["A", "B", "C", "D", "E", "F", "G"], ["X", "Y"])
            .build()
            .unwrap();
        let a = Assignment::new(&cfg).set_cell(&cfg, 3, 0, true).unwrap();
        assert_eq!(run("To(D,X)", &a, &cfg), TriBool::True);
        assert_eq!(run("To(D,Y)", &a, &cfg), TriBool::False);
        assert_eq!(run("To(E,Y)", &a, &cfg), TriBool::Unknown);
    }

    #[test]
    fn before_on_fresh_is_unknown() {
        let cfg = GameSpec::new(["A", "B"], ["1", "2"]).ordered(true).build().unwrap();
        assert_eq!(run("Before(A,B)", &Assignment::new(&cfg), &cfg), TriBool::Unknown);
    }

    #[test]
    fn ordering_needs_ordered_game() {
        let cfg = GameSpec::new(["A", "B"], ["X", "Y"]).build().unwrap();
        let err = eval(&parse_program("Before(A,B)").unwrap(), &Assignment::new(&cfg), &cfg).unwrap_err();
        assert_eq!(err, EvalError::Unordered(FunctionKind::Before));
        let err = eval(&parse_program("To(Q,X)").unwrap(), &Assignment::new(&cfg), &cfg).unwrap_err();
        assert_eq!(err, EvalError::UnknownParticipant("Q".into()));
    }

    #[test]
    fn count_interval() {
        let cfg = GameSpec::new(["A", "B", "C"], ["X", "Y"]).build().unwrap();
        let a = Assignment::new(&cfg).set_cell(&cfg, 0, 0, true).unwrap();
        assert_eq!(run("COUNT({A, B, C}, X) >= 1", &a, &cfg), TriBool::True);
        assert_eq!(run("COUNT({A, B, C}, X) >= 2", &a, &cfg), TriBool::Unknown);
        assert_eq!(run("COUNT({A, B, C}, X) > 3", &a, &cfg), TriBool::False);
        assert_eq!(run("COUNT({A, B, C}, Y) = 3", &a, &cfg), TriBool::False);
    }

    #[test]
    fn forced_cells_of_conjunction() {
        let cfg = GameSpec::new(["D", "F"], ["X", "Y"]).build().unwrap();
        let p = bind(&parse_program("To(D,X) AND NOT To(F,Y)").unwrap(), &cfg).unwrap();
        assert_eq!(p.forced_cells(&cfg), Some(vec![(0, 0, true), (1, 1, false)]));
        let q = bind(&parse_program("To(D,X) OR To(F,X)").unwrap(), &cfg).unwrap();
        assert_eq!(q.forced_cells(&cfg), None);
    }
}
