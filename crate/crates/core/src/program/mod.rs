//! The constraint-program language.
//!
//! Programs are boolean expressions over the relational atoms `To`,
//! `Before`, `After` and `Adjacent`, numeric comparisons, `IfThen` and the
//! usual connectives. Numeric terms are built from `VALUE`, `COUNT`, `MAX`,
//! `MIN`, integer constants, `+` and `-`. `ARGMAX`, `ARGMIN` and `SELECT`
//! denote participants. [`parse_program`] reads the textual form and the
//! `Display` impls print it back in canonical form; [`bind`] resolves names
//! against a [`GameConfig`](crate::game::GameConfig) and
//! [`BoundProgram::eval`] evaluates under Kleene semantics.

mod eval;
mod parse;
mod print;

pub use eval::{bind, eval, BoundProgram, EvalError, TriBool};
pub use parse::{parse_program, parse_program_file, ParseError, ParseErrorKind};
pub(crate) use print::name_text;
pub use print::print_program;

use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FunctionKind {
    To,
    Before,
    After,
    Adjacent,
    IfThen,
    And,
    Or,
    Not,
    Value,
    Count,
    Select,
    Max,
    Min,
    ArgMax,
    ArgMin,
    Eq,
    Ne,
    Lt,
    Gt,
    Le,
    Ge,
    Add,
    Sub,
}

impl FunctionKind {
    pub const ALL: [FunctionKind; 23] = [
        FunctionKind::To,
        FunctionKind::Before,
        FunctionKind::After,
        FunctionKind::Adjacent,
        FunctionKind::IfThen,
        FunctionKind::And,
        FunctionKind::Or,
        FunctionKind::Not,
        FunctionKind::Value,
        FunctionKind::Count,
        FunctionKind::Select,
        FunctionKind::Max,
        FunctionKind::Min,
        FunctionKind::ArgMax,
        FunctionKind::ArgMin,
        FunctionKind::Eq,
        FunctionKind::Ne,
        FunctionKind::Lt,
        FunctionKind::Gt,
        FunctionKind::Le,
        FunctionKind::Ge,
        FunctionKind::Add,
        FunctionKind::Sub,
    ];

    /// Needs positions to be ordered slots.
    pub fn needs_order(self) -> bool {
        matches!(
            self,
            FunctionKind::Before
                | FunctionKind::After
                | FunctionKind::Adjacent
                | FunctionKind::Value
                | FunctionKind::ArgMax
                | FunctionKind::ArgMin
        )
    }
}

impl fmt::Display for FunctionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FunctionKind::To => "To",
            FunctionKind::Before => "Before",
            FunctionKind::After => "After",
            FunctionKind::Adjacent => "Adjacent",
            FunctionKind::IfThen => "IfThen",
            FunctionKind::And => "AND",
            FunctionKind::Or => "OR",
            FunctionKind::Not => "NOT",
            FunctionKind::Value => "VALUE",
            FunctionKind::Count => "COUNT",
            FunctionKind::Select => "SELECT",
            FunctionKind::Max => "MAX",
            FunctionKind::Min => "MIN",
            FunctionKind::ArgMax => "ARGMAX",
            FunctionKind::ArgMin => "ARGMIN",
            FunctionKind::Eq => "=",
            FunctionKind::Ne => "!=",
            FunctionKind::Lt => "<",
            FunctionKind::Gt => ">",
            FunctionKind::Le => "<=",
            FunctionKind::Ge => ">=",
            FunctionKind::Add => "+",
            FunctionKind::Sub => "-",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Gt,
    Le,
    Ge,
}

impl CmpOp {
    pub fn kind(self) -> FunctionKind {
        match self {
            CmpOp::Eq => FunctionKind::Eq,
            CmpOp::Ne => FunctionKind::Ne,
            CmpOp::Lt => FunctionKind::Lt,
            CmpOp::Gt => FunctionKind::Gt,
            CmpOp::Le => FunctionKind::Le,
            CmpOp::Ge => FunctionKind::Ge,
        }
    }

    pub fn holds(self, a: i64, b: i64) -> bool {
        match self {
            CmpOp::Eq => a == b,
            CmpOp::Ne => a != b,
            CmpOp::Lt => a < b,
            CmpOp::Gt => a > b,
            CmpOp::Le => a <= b,
            CmpOp::Ge => a >= b,
        }
    }
}

/// A term denoting one participant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Who {
    Named(String),
    /// The listed participant in the highest slot.
    ArgMax(Vec<String>),
    /// The listed participant in the lowest slot.
    ArgMin(Vec<String>),
    /// The single participant assigned to a position.
    Select(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NumExpr {
    Const(i64),
    /// Slot number of a participant.
    Value(Who),
    /// How many of the listed participants sit in the position, or are
    /// placed at all when no position is given.
    Count(Vec<String>, Option<String>),
    Add(Box<NumExpr>, Box<NumExpr>),
    Sub(Box<NumExpr>, Box<NumExpr>),
    Max(Vec<NumExpr>),
    Min(Vec<NumExpr>),
}

/// A constraint program.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BoolExpr {
    To(Who, String),
    Before(Who, Who),
    After(Who, Who),
    Adjacent(Who, Who),
    Compare(CmpOp, NumExpr, NumExpr),
    IfThen(Vec<BoolExpr>, Vec<BoolExpr>),
    And(Box<BoolExpr>, Box<BoolExpr>),
    Or(Box<BoolExpr>, Box<BoolExpr>),
    Not(Box<BoolExpr>),
}

pub type Program = BoolExpr;

impl Who {
    pub fn named(name: impl Into<String>) -> Self {
        Who::Named(name.into())
    }
}

impl NumExpr {
    pub fn value(p: impl Into<String>) -> Self {
        NumExpr::Value(Who::Named(p.into()))
    }

    pub fn kind(&self) -> Option<FunctionKind> {
        Some(match self {
            NumExpr::Const(_) => return None,
            NumExpr::Value(_) => FunctionKind::Value,
            NumExpr::Count(..) => FunctionKind::Count,
            NumExpr::Add(..) => FunctionKind::Add,
            NumExpr::Sub(..) => FunctionKind::Sub,
            NumExpr::Max(_) => FunctionKind::Max,
            NumExpr::Min(_) => FunctionKind::Min,
        })
    }
}

impl BoolExpr {
    pub fn to(p: impl Into<String>, pos: impl Into<String>) -> Self {
        BoolExpr::To(Who::Named(p.into()), pos.into())
    }

    pub fn and(self, other: BoolExpr) -> Self {
        BoolExpr::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: BoolExpr) -> Self {
        BoolExpr::Or(Box::new(self), Box::new(other))
    }

    pub fn negated(self) -> Self {
        BoolExpr::Not(Box::new(self))
    }

    /// Left-nested conjunction; `None` for an empty input.
    pub fn conjunction(parts: impl IntoIterator<Item = BoolExpr>) -> Option<Self> {
        parts.into_iter().reduce(BoolExpr::and)
    }

    /// The outermost function of the expression.
    pub fn kind(&self) -> FunctionKind {
        match self {
            BoolExpr::To(..) => FunctionKind::To,
            BoolExpr::Before(..) => FunctionKind::Before,
            BoolExpr::After(..) => FunctionKind::After,
            BoolExpr::Adjacent(..) => FunctionKind::Adjacent,
            BoolExpr::Compare(op, ..) => op.kind(),
            BoolExpr::IfThen(..) => FunctionKind::IfThen,
            BoolExpr::And(..) => FunctionKind::And,
            BoolExpr::Or(..) => FunctionKind::Or,
            BoolExpr::Not(_) => FunctionKind::Not,
        }
    }

    /// Every function kind used anywhere in the expression.
    pub fn kinds(&self) -> BTreeSet<FunctionKind> {
        let mut out = BTreeSet::new();
        self.visit_kinds(&mut out);
        out
    }

    fn visit_kinds(&self, out: &mut BTreeSet<FunctionKind>) {
        out.insert(self.kind());
        match self {
            BoolExpr::To(w, _) => w.visit_kinds(out),
            BoolExpr::Before(a, b) | BoolExpr::After(a, b) | BoolExpr::Adjacent(a, b) => {
                a.visit_kinds(out);
                b.visit_kinds(out);
            }
            BoolExpr::Compare(_, a, b) => {
                a.visit_kinds(out);
                b.visit_kinds(out);
            }
            BoolExpr::IfThen(xs, ys) => xs.iter().chain(ys).for_each(|e| e.visit_kinds(out)),
            BoolExpr::And(a, b) | BoolExpr::Or(a, b) => {
                a.visit_kinds(out);
                b.visit_kinds(out);
            }
            BoolExpr::Not(a) => a.visit_kinds(out),
        }
    }

    /// Participant and position names referenced by the expression.
    pub fn free_entities(&self) -> (BTreeSet<String>, BTreeSet<String>) {
        let mut people = BTreeSet::new();
        let mut places = BTreeSet::new();
        self.visit_names(&mut people, &mut places);
        (people, places)
    }

    fn visit_names(&self, people: &mut BTreeSet<String>, places: &mut BTreeSet<String>) {
        match self {
            BoolExpr::To(w, pos) => {
                w.visit_names(people, places);
                places.insert(pos.clone());
            }
            BoolExpr::Before(a, b) | BoolExpr::After(a, b) | BoolExpr::Adjacent(a, b) => {
                a.visit_names(people, places);
                b.visit_names(people, places);
            }
            BoolExpr::Compare(_, a, b) => {
                a.visit_names(people, places);
                b.visit_names(people, places);
            }
            BoolExpr::IfThen(xs, ys) => xs.iter().chain(ys).for_each(|e| e.visit_names(people, places)),
            BoolExpr::And(a, b) | BoolExpr::Or(a, b) => {
                a.visit_names(people, places);
                b.visit_names(people, places);
            }
            BoolExpr::Not(a) => a.visit_names(people, places),
        }
    }
}

impl Who {
    fn visit_kinds(&self, out: &mut BTreeSet<FunctionKind>) {
        match self {
            Who::Named(_) => {}
            Who::ArgMax(_) => {
                out.insert(FunctionKind::ArgMax);
            }
            Who::ArgMin(_) => {
                out.insert(FunctionKind::ArgMin);
            }
            Who::Select(_) => {
                out.insert(FunctionKind::Select);
            }
        }
    }

    fn visit_names(&self, people: &mut BTreeSet<String>, places: &mut BTreeSet<String>) {
        match self {
            Who::Named(p) => {
                people.insert(p.clone());
            }
            Who::ArgMax(ps) | Who::ArgMin(ps) => people.extend(ps.iter().cloned()),
            Who::Select(pos) => {
                places.insert(pos.clone());
            }
        }
    }
}

impl NumExpr {
    fn visit_kinds(&self, out: &mut BTreeSet<FunctionKind>) {
        if let Some(k) = self.kind() {
            out.insert(k);
        }
        match self {
            NumExpr::Const(_) | NumExpr::Count(..) => {}
            NumExpr::Value(w) => w.visit_kinds(out),
            NumExpr::Add(a, b) | NumExpr::Sub(a, b) => {
                a.visit_kinds(out);
                b.visit_kinds(out);
            }
            NumExpr::Max(xs) | NumExpr::Min(xs) => xs.iter().for_each(|x| x.visit_kinds(out)),
        }
    }

    fn visit_names(&self, people: &mut BTreeSet<String>, places: &mut BTreeSet<String>) {
        match self {
            NumExpr::Const(_) => {}
            NumExpr::Value(w) => w.visit_names(people, places),
            NumExpr::Count(ps, pos) => {
                people.extend(ps.iter().cloned());
                places.extend(pos.iter().cloned());
            }
            NumExpr::Add(a, b) | NumExpr::Sub(a, b) => {
                a.visit_names(people, places);
                b.visit_names(people, places);
            }
            NumExpr::Max(xs) | NumExpr::Min(xs) => xs.iter().for_each(|x| x.visit_names(people, places)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_entities_of_if_then() {
        let p = parse_program("IfThen({To(A,X)}, {To(B,Y)})").unwrap();
        let (people, places) = p.free_entities();
        assert_eq!(people.into_iter().collect::<Vec<_>>(), ["A", "B"]);
        assert_eq!(places.into_iter().collect::<Vec<_>>(), ["X", "Y"]);
    }

    #[test]
    fn free_entities_of_constants() {
        let (people, places) = parse_program("2 > 1").unwrap().free_entities();
        assert!(people.is_empty() && places.is_empty());
    }

    #[test]
    fn free_entities_of_count() {
        let (people, places) = parse_program("COUNT({C, D}) >= 1").unwrap().free_entities();
        assert_eq!(people.into_iter().collect::<Vec<_>>(), ["C", "D"]);
        assert!(places.is_empty());
    }
}
