//! Rule-based reading of game texts into programs.
//!
//! Entities come from the leading sentence (or from annotations). Each
//! later sentence is matched against a [`TriggerLexicon`]; the first rule
//! whose pattern matches fills its template with entities found by their
//! position relative to the match. Arguments are taken nearest-left and
//! nearest-right of the trigger. Sentences no rule matches are skipped.

mod entities;
mod lexicon;
mod positions;

use thiserror::Error;

pub use entities::{extract_entities, leading_sentence, Entity, EntityCatalog};
pub use lexicon::{LexiconError, Rule, TriggerLexicon};
pub use positions::annotate_positions;

use lexicon::{Fill, Slot, SlotKind, Source};

use crate::logic::{tokenize, NegationCues};
use crate::program::{name_text, parse_program, BoolExpr};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InterpError {
    #[error("context has no leading sentence")]
    NoLeadingSentence,
    #[error("expected two entity groups in the leading sentence, found {0}")]
    TooFewGroups(usize),
    #[error("{0:?} names both a participant and a position")]
    SharedName(String),
    #[error("option {index} not interpretable: {reason}")]
    Uninterpretable { index: usize, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Interpretation {
    Program(BoolExpr),
    /// No rule matched.
    NoMatch,
    /// A rule matched but its slots could not be filled.
    Unresolved {
        rule_line: usize,
        reason: String,
    },
}

impl Interpretation {
    pub fn program(self) -> Option<BoolExpr> {
        match self {
            Interpretation::Program(p) => Some(p),
            _ => None,
        }
    }
}

const NUMBER_WORDS: [&str; 11] = [
    "zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten",
];

fn number(word: &str) -> Option<i64> {
    word.parse().ok().or_else(|| {
        NUMBER_WORDS
            .iter()
            .position(|w| w.eq_ignore_ascii_case(word))
            .map(|n| n as i64)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Participant,
    Position,
}

#[derive(Debug, Clone, Copy)]
struct Mention {
    start: usize,
    end: usize,
    kind: Kind,
    entity: usize,
}

fn word_boundary(text: &str, at: usize) -> bool {
    let before = text[..at].chars().next_back();
    let after = text[at..].chars().next();
    !(before.is_some_and(char::is_alphanumeric) && after.is_some_and(char::is_alphanumeric))
}

// Longest surfaces first; one-letter names only match as capitals.
fn mentions(text: &str, cat: &EntityCatalog) -> Vec<Mention> {
    let mut surfaces: Vec<(&str, Kind, usize)> = Vec::new();
    for (kind, list) in [(Kind::Participant, &cat.participants), (Kind::Position, &cat.positions)] {
        for (i, e) in list.iter().enumerate() {
            surfaces.extend(e.surfaces().map(|s| (s, kind, i)));
        }
    }
    surfaces.sort_by_key(|(s, _, _)| std::cmp::Reverse(s.len()));
    let folded = text.to_ascii_lowercase();
    let mut found: Vec<Mention> = Vec::new();
    for (surface, kind, entity) in surfaces {
        if surface.is_empty() {
            continue;
        }
        let exact = surface.chars().count() == 1;
        let (hay, needle) = if exact {
            (text.to_string(), surface.to_string())
        } else {
            (folded.clone(), surface.to_ascii_lowercase())
        };
        for (start, _) in hay.match_indices(&needle) {
            let end = start + needle.len();
            let free = !found.iter().any(|m| start < m.end && m.start < end);
            if free && word_boundary(text, start) && word_boundary(text, end) {
                found.push(Mention {
                    start,
                    end,
                    kind,
                    entity,
                });
            }
        }
    }
    found.sort_by_key(|m| m.start);
    found
}

fn strip_end(sentence: &str) -> &str {
    sentence.trim().trim_end_matches(['.', '!', ';']).trim_end()
}

struct Reader<'a> {
    cat: &'a EntityCatalog,
    lex: &'a TriggerLexicon,
    cues: NegationCues,
}

impl Reader<'_> {
    fn key(&self, m: &Mention) -> String {
        let list = match m.kind {
            Kind::Participant => &self.cat.participants,
            Kind::Position => &self.cat.positions,
        };
        name_text(list[m.entity].key())
    }

    fn read(&self, text: &str, depth: usize) -> Interpretation {
        let text = strip_end(text);
        if depth > 8 {
            return Interpretation::NoMatch;
        }
        for rule in self.lex.rules() {
            let Some(caps) = rule.pattern.captures(text) else {
                continue;
            };
            let whole = caps.get(0).unwrap();
            let found = mentions(text, self.cat);
            let unresolved = |reason: String| Interpretation::Unresolved {
                rule_line: rule.line,
                reason,
            };
            let filled = rule.fill(|slot: &Slot| self.resolve(slot, text, &caps, whole, &found, depth));
            let source = match filled {
                Ok(s) => s,
                Err(reason) => return unresolved(reason),
            };
            let program = match parse_program(&source) {
                Ok(p) => p,
                Err(e) => return unresolved(format!("{source:?}: {e}")),
            };
            if !rule.is_compositional() && self.negated_outside(text, whole.start(), whole.end()) {
                return Interpretation::Program(program.negated());
            }
            return Interpretation::Program(program);
        }
        Interpretation::NoMatch
    }

    fn negated_outside(&self, text: &str, start: usize, end: usize) -> bool {
        let tokens = tokenize(text);
        let before: Vec<&str> = tokens.iter().filter(|t| t.end <= start).map(|t| t.text).collect();
        let after: Vec<&str> = tokens.iter().filter(|t| t.start >= end).map(|t| t.text).collect();
        self.cues.any_in(&before) || self.cues.any_in(&after)
    }

    fn resolve(
        &self,
        slot: &Slot,
        text: &str,
        caps: &regex::Captures<'_>,
        whole: regex::Match<'_>,
        found: &[Mention],
        depth: usize,
    ) -> Result<Fill, String> {
        let kind = match slot.kind {
            SlotKind::Participant => Some(Kind::Participant),
            SlotKind::Position => Some(Kind::Position),
            _ => None,
        };
        let (lo, hi) = match &slot.source {
            Source::Left => (0, whole.start()),
            Source::Right => (whole.end(), text.len()),
            Source::All => {
                let names = self.cat.participants.iter().map(|e| name_text(e.key())).collect();
                return Ok(Fill::Many(names));
            }
            Source::Group(g) => match caps.name(g) {
                Some(m) => (m.start(), m.end()),
                None => return Err(format!("group {g:?} did not participate")),
            },
        };
        let span = &text[lo..hi];
        match slot.kind {
            SlotKind::Program => match self.read(span, depth + 1) {
                Interpretation::Program(p) => Ok(Fill::One(format!("({p})"))),
                _ => Err(format!("cannot interpret {span:?}")),
            },
            SlotKind::Number => {
                let numbers: Vec<i64> = tokenize(span).iter().filter_map(|t| number(t.text)).collect();
                let n = match slot.source {
                    Source::Left => numbers.last(),
                    _ => numbers.first(),
                };
                n.map(|n| Fill::One(n.to_string()))
                    .ok_or_else(|| format!("no number in {span:?}"))
            }
            _ => {
                let kind = kind.expect("entity slot");
                let inside: Vec<&Mention> = found
                    .iter()
                    .filter(|m| m.kind == kind && m.start >= lo && m.end <= hi)
                    .collect();
                let what = if kind == Kind::Participant {
                    "participant"
                } else {
                    "position"
                };
                if slot.many {
                    if inside.is_empty() {
                        return Err(format!("no {what} in {span:?}"));
                    }
                    return Ok(Fill::Many(inside.iter().map(|m| self.key(m)).collect()));
                }
                let pick = match slot.source {
                    Source::Left => inside.last(),
                    Source::Right => inside.first(),
                    _ if inside.len() == 1 => inside.first(),
                    _ => return Err(format!("expected one {what} in {span:?}, found {}", inside.len())),
                };
                pick.map(|m| Fill::One(self.key(m)))
                    .ok_or_else(|| format!("no {what} in {span:?}"))
            }
        }
    }
}

/// Program for one constraint sentence.
pub fn interpret_constraint(sentence: &str, cat: &EntityCatalog, lex: &TriggerLexicon) -> Interpretation {
    Reader {
        cat,
        lex,
        cues: NegationCues::default(),
    }
    .read(sentence, 0)
}

/// Program for one answer option. A roster such as `X: A, B; Y: C` becomes
/// a conjunction of `To` atoms; anything else goes through the lexicon.
pub fn interpret_option(
    question: &str,
    option: &str,
    cat: &EntityCatalog,
    lex: &TriggerLexicon,
    index: usize,
) -> Result<BoolExpr, InterpError> {
    let _ = question;
    if let Some(p) = roster(option, cat) {
        return Ok(p);
    }
    match interpret_constraint(option, cat, lex) {
        Interpretation::Program(p) => Ok(p),
        Interpretation::NoMatch => Err(InterpError::Uninterpretable {
            index,
            reason: "no rule matched".into(),
        }),
        Interpretation::Unresolved { reason, .. } => Err(InterpError::Uninterpretable { index, reason }),
    }
}

/// The condition of a question like "If D serves on X, which one of the
/// following must be true?", to be added to the game's constraints.
pub fn question_condition(question: &str, cat: &EntityCatalog, lex: &TriggerLexicon) -> Option<BoolExpr> {
    let q = question.trim();
    if !q.to_ascii_lowercase().starts_with("if ") {
        return None;
    }
    let lower = q.to_ascii_lowercase();
    let cut = [", which", ", then which", ", what", ", each"]
        .iter()
        .filter_map(|m| lower.find(m))
        .min()?;
    interpret_constraint(&q[3..cut], cat, lex).program()
}

fn roster(option: &str, cat: &EntityCatalog) -> Option<BoolExpr> {
    let option = strip_end(option);
    if !option.contains(':') {
        return None;
    }
    let mut atoms = Vec::new();
    for part in option.split(';') {
        let (head, members) = part.split_once(':')?;
        let pos = mentions(head, cat);
        let [p] = pos.as_slice() else { return None };
        if p.kind != Kind::Position {
            return None;
        }
        let position = cat.positions[p.entity].key().to_string();
        for m in mentions(members, cat) {
            if m.kind != Kind::Participant {
                return None;
            }
            atoms.push(BoolExpr::to(cat.participants[m.entity].key(), position.clone()));
        }
    }
    BoolExpr::conjunction(atoms)
}

/// The context's sentences after the leading one.
pub fn constraint_sentences(context: &str) -> Vec<&str> {
    let lead = leading_sentence(context);
    let rest = context.trim_start()[lead.len()..].trim_start_matches(['.', '?', '!']);
    let mut out = Vec::new();
    let mut start = 0;
    let bytes: Vec<(usize, char)> = rest.char_indices().collect();
    for (k, &(i, c)) in bytes.iter().enumerate() {
        let end_here = match c {
            '\n' => true,
            '.' | '?' | '!' => bytes.get(k + 1).is_none_or(|&(_, n)| n.is_whitespace()),
            _ => false,
        };
        if end_here {
            let s = rest[start..=i].trim();
            if s.len() > 1 {
                out.push(s);
            }
            start = i + c.len_utf8();
        }
    }
    let tail = rest[start..].trim();
    if !tail.is_empty() {
        out.push(tail);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn committee() -> EntityCatalog {
        extract_entities(
            "A company's board has seven directors, A, B, C, D, E, F, and G, who each serve on either \
             the X committee or the Y committee.",
        )
        .unwrap()
    }

    fn read(s: &str) -> Interpretation {
        interpret_constraint(s, &committee(), &TriggerLexicon::starter())
    }

    fn program(s: &str) -> String {
        match read(s) {
            Interpretation::Program(p) => p.to_string(),
            other => panic!("{s:?}: {other:?}"),
        }
    }

    #[test]
    fn conditional_sentence() {
        assert_eq!(
            program("If A serves on the X, then B serves on the Y."),
            "IfThen({To(A,X)}, {To(B,Y)})"
        );
    }

    #[test]
    fn both_serve() {
        assert_eq!(program("D and F both serve on the X committee."), "To(D,X) AND To(F,X)");
    }

    #[test]
    fn no_trigger() {
        assert_eq!(read("The weather is nice."), Interpretation::NoMatch);
    }

    #[test]
    fn negated_leaf() {
        // (sentence, program)
        let table = [
            ("B does not serve on X", "NOT To(B,X)"),
            ("B doesn't serve on the Y committee", "NOT To(B,Y)"),
            ("A serves on Y", "To(A,Y)"),
            (
                "If C does not serve on X, then G serves on X",
                "IfThen({NOT To(C,X)}, {To(G,X)})",
            ),
            ("E serves on Y unless F serves on Y", "IfThen({NOT To(F,Y)}, {To(E,Y)})"),
            ("A serves on X only if B serves on X", "IfThen({To(A,X)}, {To(B,X)})"),
            ("Either A or B serves on X", "To(A,X) OR To(B,X)"),
            (
                "Exactly two of A, B, and C serve on the Y committee",
                "COUNT({A, B, C}, Y) = 2",
            ),
        ];
        for (s, want) in table {
            assert_eq!(program(s), want, "{s}");
        }
    }

    #[test]
    fn unresolved_slot_has_diagnostic() {
        match read("Somebody serves on the X committee") {
            Interpretation::Unresolved { reason, .. } => assert!(reason.contains("participant")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn roadster_annotation() {
        let cat =
            EntityCatalog::from_names(["hatchback", "roadster", "van"], ["Monday", "Tuesday", "Wednesday"]).unwrap();
        let got = interpret_constraint(
            "The roadster is serviced later in the week than the van and earlier in the week than the hatchback.",
            &cat,
            &TriggerLexicon::starter(),
        );
        assert_eq!(
            got.program().unwrap().to_string(),
            "VALUE(roadster) > VALUE(van) AND VALUE(roadster) < VALUE(hatchback)"
        );
    }

    #[test]
    fn roster_option() {
        let cat = committee();
        let p = interpret_option("", "X: A, B, D; Y: C, E, F, G", &cat, &TriggerLexicon::starter(), 0).unwrap();
        assert_eq!(
            p.to_string(),
            "To(A,X) AND To(B,X) AND To(D,X) AND To(C,Y) AND To(E,Y) AND To(F,Y) AND To(G,Y)"
        );
        let err = interpret_option("", "The weather is nice", &cat, &TriggerLexicon::starter(), 3).unwrap_err();
        assert!(matches!(err, InterpError::Uninterpretable { index: 3, .. }));
    }

    #[test]
    fn question_prefix() {
        let cat = committee();
        let lex = TriggerLexicon::starter();
        let q = "If G serves on the X committee, which one of the following must be true?";
        assert_eq!(question_condition(q, &cat, &lex).unwrap().to_string(), "To(G,X)");
        assert_eq!(
            question_condition("Which one of the following could be true?", &cat, &lex),
            None
        );
    }

    #[test]
    fn sentences_after_the_first() {
        let ctx = "Seven directors, A, B, C, D, E, F, and G, serve on the X or Y. D and F both serve on X. If A serves on X, then B serves on Y.";
        assert_eq!(
            constraint_sentences(ctx),
            ["D and F both serve on X.", "If A serves on X, then B serves on Y."]
        );
    }

    #[test]
    fn deterministic() {
        let s = "If A serves on the X, then B serves on the Y.";
        assert_eq!(read(s), read(s));
    }
}
