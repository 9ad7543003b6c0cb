//! Propositional symbols, implications and their closure under
//! contraposition and the transitive law.
//!
//! Expressions are literal-to-literal implications such as `¬α → ¬β`.
//! [`extend_closure`] derives everything those implications entail under the
//! two rules and returns only the new members, which can then be filtered per
//! option with [`select_related`] and turned back into text with
//! [`verbalize`].

mod augment;
mod identify;

pub use augment::{augment_negative, AugmentOp};
pub use identify::{identify_logic, locate_spans, NegationCues, SentenceSpans, SymbolSpan};
pub(crate) use identify::{tokenize, Token};

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub type SymbolId = u32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LogicError {
    #[error("implication {0} -> {1} relates a symbol to itself")]
    SelfImplication(Literal, Literal),
    #[error("no surface text for symbol {0}")]
    MissingSurface(SymbolId),
    #[error("sentence {sentence}: symbol spans {first:?} and {second:?} overlap")]
    OverlappingSpans {
        sentence: usize,
        first: (usize, usize),
        second: (usize, usize),
    },
    #[error("sentence {sentence}: span {span:?} is out of bounds or not on a char boundary")]
    BadSpan { sentence: usize, span: (usize, usize) },
    #[error("cannot augment an empty expression set")]
    EmptySet,
    #[error("no {0:?} modification yields a different expression set")]
    NoModification(AugmentOp),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

/// An extracted text constituent standing for an atomic proposition.
#[derive(Debug, Clone, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct LogicSymbol {
    pub id: SymbolId,
    pub surface: String,
}

/// Symbol surfaces keyed by id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SymbolTable {
    surfaces: HashMap<SymbolId, String>,
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, symbol: LogicSymbol) -> Option<String> {
        self.surfaces.insert(symbol.id, symbol.surface)
    }

    pub fn surface(&self, id: SymbolId) -> Option<&str> {
        self.surfaces.get(&id).map(String::as_str)
    }
}

impl FromIterator<LogicSymbol> for SymbolTable {
    fn from_iter<I: IntoIterator<Item = LogicSymbol>>(iter: I) -> Self {
        let mut table = SymbolTable::new();
        for symbol in iter {
            table.insert(symbol);
        }
        table
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub symbol: SymbolId,
    pub negated: bool,
}

impl Literal {
    pub fn pos(symbol: SymbolId) -> Self {
        Self { symbol, negated: false }
    }

    pub fn neg(symbol: SymbolId) -> Self {
        Self { symbol, negated: true }
    }
}

pub fn negate(l: Literal) -> Literal {
    Literal {
        symbol: l.symbol,
        negated: !l.negated,
    }
}

impl std::ops::Not for Literal {
    type Output = Literal;

    fn not(self) -> Literal {
        negate(self)
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "~{}", self.symbol)
        } else {
            write!(f, "{}", self.symbol)
        }
    }
}

impl FromStr for Literal {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (negated, digits) = match s.strip_prefix('~') {
            Some(rest) => (true, rest.trim_start()),
            None => (false, s),
        };
        let symbol = digits.parse::<SymbolId>().map_err(|_| format!("bad literal {s:?}"))?;
        Ok(Literal { symbol, negated })
    }
}

/// `antecedent → consequent` over two distinct symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Implication {
    antecedent: Literal,
    consequent: Literal,
}

impl Implication {
    pub fn new(antecedent: Literal, consequent: Literal) -> Result<Self, LogicError> {
        if antecedent.symbol == consequent.symbol {
            return Err(LogicError::SelfImplication(antecedent, consequent));
        }
        Ok(Self { antecedent, consequent })
    }

    pub fn antecedent(&self) -> Literal {
        self.antecedent
    }

    pub fn consequent(&self) -> Literal {
        self.consequent
    }

    pub fn reversed(&self) -> Implication {
        Implication {
            antecedent: self.consequent,
            consequent: self.antecedent,
        }
    }

    pub fn mentions(&self, symbol: SymbolId) -> bool {
        self.antecedent.symbol == symbol || self.consequent.symbol == symbol
    }
}

impl fmt::Display for Implication {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.antecedent, self.consequent)
    }
}

impl FromStr for Implication {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (lhs, rhs) = s.split_once("->").ok_or_else(|| format!("missing `->` in {s:?}"))?;
        Implication::new(lhs.parse()?, rhs.parse()?).map_err(|e| e.to_string())
    }
}

/// Contraposition: `(α → β)` becomes `(¬β → ¬α)`.
pub fn contrapose(i: Implication) -> Implication {
    Implication {
        antecedent: negate(i.consequent),
        consequent: negate(i.antecedent),
    }
}

/// Transitive law: `(α → β) ∧ (β → γ)` gives `(α → γ)`.
///
/// The middle literals must agree in symbol and polarity. A result that
/// would relate a symbol to itself is dropped.
pub fn transitive_join(first: Implication, second: Implication) -> Option<Implication> {
    if first.consequent != second.antecedent {
        return None;
    }
    Implication::new(first.antecedent, second.consequent).ok()
}

/// Insertion-ordered set of implications without duplicates.
#[derive(Debug, Clone, Default)]
pub struct ExpressionSet {
    exprs: Vec<Implication>,
    index: HashSet<Implication>,
}

impl PartialEq for ExpressionSet {
    fn eq(&self, other: &Self) -> bool {
        self.exprs == other.exprs
    }
}

impl Eq for ExpressionSet {}

impl ExpressionSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends `i` unless it is already present. Returns whether it was added.
    pub fn insert(&mut self, i: Implication) -> bool {
        if self.index.insert(i) {
            self.exprs.push(i);
            true
        } else {
            false
        }
    }

    pub fn contains(&self, i: &Implication) -> bool {
        self.index.contains(i)
    }

    pub fn len(&self) -> usize {
        self.exprs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exprs.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Implication> {
        self.exprs.iter()
    }

    pub fn as_slice(&self) -> &[Implication] {
        &self.exprs
    }

    /// Same members, ignoring order.
    pub fn same_members(&self, other: &ExpressionSet) -> bool {
        self.index == other.index
    }

    /// Distinct symbols, in order of first mention.
    pub fn symbols(&self) -> Vec<SymbolId> {
        let mut seen = Vec::new();
        for i in &self.exprs {
            for s in [i.antecedent.symbol, i.consequent.symbol] {
                if !seen.contains(&s) {
                    seen.push(s);
                }
            }
        }
        seen
    }
}

impl FromIterator<Implication> for ExpressionSet {
    fn from_iter<I: IntoIterator<Item = Implication>>(iter: I) -> Self {
        let mut set = ExpressionSet::new();
        for i in iter {
            set.insert(i);
        }
        set
    }
}

impl<'a> IntoIterator for &'a ExpressionSet {
    type Item = &'a Implication;
    type IntoIter = std::slice::Iter<'a, Implication>;

    fn into_iter(self) -> Self::IntoIter {
        self.exprs.iter()
    }
}

/// One implication per line, `[~]id -> [~]id`, each line LF-terminated.
impl fmt::Display for ExpressionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in &self.exprs {
            writeln!(f, "{i}")?;
        }
        Ok(())
    }
}

impl FromStr for ExpressionSet {
    type Err = LogicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut set = ExpressionSet::new();
        for (n, line) in s.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let i = line
                .parse::<Implication>()
                .map_err(|message| LogicError::Syntax { line: n + 1, message })?;
            set.insert(i);
        }
        Ok(set)
    }
}

/// How a member of the extended set was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Derivation {
    Contraposition(Implication),
    Transitive(Implication, Implication),
}

/// Everything `s` entails under contraposition and the transitive law,
/// minus `s` itself.
///
/// Rounds run breadth-first. Each round first contraposes every known
/// expression in order, then joins every ordered pair `(i, j)` where
/// `i.consequent == j.antecedent`, again in order. New results are appended
/// when the round ends; the closure stops at the first round adding nothing.
pub fn extend_closure(s: &ExpressionSet) -> ExpressionSet {
    extend_closure_traced(s).into_iter().map(|(i, _)| i).collect()
}

/// [`extend_closure`] with the premises used for each derived member.
pub fn extend_closure_traced(s: &ExpressionSet) -> Vec<(Implication, Derivation)> {
    let mut known: Vec<Implication> = s.exprs.clone();
    let mut seen: HashSet<Implication> = s.index.clone();
    let mut derived = Vec::new();

    loop {
        let mut round: Vec<(Implication, Derivation)> = Vec::new();
        let mut push = |i: Implication, d: Derivation, seen: &mut HashSet<Implication>| {
            if seen.insert(i) {
                round.push((i, d));
            }
        };

        for &i in &known {
            push(contrapose(i), Derivation::Contraposition(i), &mut seen);
        }

        let mut by_antecedent: HashMap<Literal, Vec<usize>> = HashMap::new();
        for (n, i) in known.iter().enumerate() {
            by_antecedent.entry(i.antecedent).or_default().push(n);
        }
        for &first in &known {
            let Some(nexts) = by_antecedent.get(&first.consequent) else {
                continue;
            };
            for &n in nexts {
                let second = known[n];
                if let Some(joined) = transitive_join(first, second) {
                    push(joined, Derivation::Transitive(first, second), &mut seen);
                }
            }
        }

        if round.is_empty() {
            break;
        }
        known.extend(round.iter().map(|(i, _)| *i));
        derived.extend(round);
    }
    derived
}

/// Members of `extended` that mention any of `option_symbols`, order kept.
pub fn select_related(extended: &ExpressionSet, option_symbols: &HashSet<SymbolId>) -> ExpressionSet {
    extended
        .iter()
        .filter(|i| option_symbols.iter().any(|&s| i.mentions(s)))
        .copied()
        .collect()
}

/// Renders `i` as `If [do not ]<antecedent>, then [will not ]<consequent>`.
pub fn verbalize(i: &Implication, table: &SymbolTable) -> Result<String, LogicError> {
    let surface = |l: Literal| table.surface(l.symbol).ok_or(LogicError::MissingSurface(l.symbol));
    let antecedent = surface(i.antecedent)?;
    let consequent = surface(i.consequent)?;
    Ok(format!(
        "If {}{}, then {}{}",
        if i.antecedent.negated { "do not " } else { "" },
        antecedent,
        if i.consequent.negated { "will not " } else { "" },
        consequent,
    ))
}
