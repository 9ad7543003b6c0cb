//! Trigger lexicon: ordered `pattern => template` rules.
//!
//! A pattern is a case-insensitive regular expression. A template is program
//! text with argument slots:
//!
//! | slot | filled with |
//! |------|-------------|
//! | `[<P]` / `[>P]` | nearest participant left / right of the match |
//! | `[<P*]` / `[>P*]` | every participant left / right of the match |
//! | `[<Pos]` / `[>Pos]` | nearest position left / right of the match |
//! | `[<N]` / `[>N]` | nearest number left / right of the match |
//! | `[$g]` | the text of group `g`, interpreted recursively |
//! | `[$g:P]`, `[$g:P*]`, `[$g:Pos]`, `[$g:N]` | the entity or number inside group `g` |
//! | `[all:P]` | every participant of the game |
//!
//! A starred slot inside `{...}` becomes a comma list. Outside braces the
//! whole template is repeated once per entity and joined with `AND`.

use std::path::Path;
use std::sync::OnceLock;

use regex::Regex;
use thiserror::Error;

use crate::program::{parse_program, FunctionKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("lexicon line {line}: {message}")]
pub struct LexiconError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum SlotKind {
    Participant,
    Position,
    Number,
    Program,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Source {
    Left,
    Right,
    Group(String),
    All,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Slot {
    pub source: Source,
    pub kind: SlotKind,
    pub many: bool,
    pub braced: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Segment {
    Text(String),
    Slot(Slot),
}

/// What a slot resolved to, already in program syntax.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Fill {
    One(String),
    Many(Vec<String>),
}

#[derive(Debug, Clone)]
pub struct Rule {
    /// 1-based line in the lexicon source.
    pub line: usize,
    pub pattern: Regex,
    pub template: String,
    /// Head function of the produced program.
    pub kind: FunctionKind,
    segments: Vec<Segment>,
}

impl Rule {
    /// Rules that interpret parts of the sentence recursively. Negation cues
    /// are left to the parts.
    pub fn is_compositional(&self) -> bool {
        self.slots().any(|s| s.kind == SlotKind::Program)
    }

    pub(crate) fn slots(&self) -> impl Iterator<Item = &Slot> {
        self.segments.iter().filter_map(|s| match s {
            Segment::Slot(slot) => Some(slot),
            Segment::Text(_) => None,
        })
    }

    /// Program text with slots filled by `resolve`, called once per slot
    /// in template order.
    pub(crate) fn fill(&self, mut resolve: impl FnMut(&Slot) -> Result<Fill, String>) -> Result<String, String> {
        let fills: Vec<Option<Fill>> = self
            .segments
            .iter()
            .map(|seg| match seg {
                Segment::Slot(slot) => resolve(slot).map(Some),
                Segment::Text(_) => Ok(None),
            })
            .collect::<Result<_, _>>()?;
        let expand = self
            .segments
            .iter()
            .zip(&fills)
            .find_map(|(seg, fill)| match (seg, fill) {
                (Segment::Slot(slot), Some(Fill::Many(items))) if !slot.braced => Some(items.len()),
                _ => None,
            });
        let render = |k: usize| {
            let mut out = String::new();
            for (seg, fill) in self.segments.iter().zip(&fills) {
                match (seg, fill) {
                    (Segment::Text(t), _) => out.push_str(t),
                    (Segment::Slot(_), Some(Fill::One(v))) => out.push_str(v),
                    (Segment::Slot(slot), Some(Fill::Many(items))) if slot.braced => out.push_str(&items.join(", ")),
                    (Segment::Slot(_), Some(Fill::Many(items))) => out.push_str(&items[k]),
                    (Segment::Slot(_), None) => unreachable!("every slot is filled"),
                }
            }
            out
        };
        Ok(match expand {
            Some(0) => return Err("empty entity list".into()),
            Some(1) | None => render(0),
            Some(n) => (0..n)
                .map(|k| format!("({})", render(k)))
                .collect::<Vec<_>>()
                .join(" AND "),
        })
    }
}

fn slot_syntax() -> Regex {
    Regex::new(
        r"\[(?:(?P<dir>[<>])(?P<k1>Pos|P|N)(?P<s1>\*)?|\$(?P<g>\w+)(?::(?P<k2>Pos|P|N)(?P<s2>\*)?)?|(?P<all>all:P))\]",
    )
    .expect("slot syntax")
}

fn kind_of(s: &str) -> SlotKind {
    match s {
        "P" => SlotKind::Participant,
        "Pos" => SlotKind::Position,
        _ => SlotKind::Number,
    }
}

fn segments(template: &str) -> Result<Vec<Segment>, String> {
    let syntax = slot_syntax();
    let mut out = Vec::new();
    let mut last = 0;
    let mut depth = 0i32;
    for caps in syntax.captures_iter(template) {
        let m = caps.get(0).unwrap();
        let text = &template[last..m.start()];
        depth += text.matches('{').count() as i32 - text.matches('}').count() as i32;
        if !text.is_empty() {
            out.push(Segment::Text(text.to_string()));
        }
        let slot = if let Some(dir) = caps.name("dir") {
            Slot {
                source: if dir.as_str() == "<" {
                    Source::Left
                } else {
                    Source::Right
                },
                kind: kind_of(&caps["k1"]),
                many: caps.name("s1").is_some(),
                braced: depth > 0,
            }
        } else if let Some(g) = caps.name("g") {
            Slot {
                source: Source::Group(g.as_str().to_string()),
                kind: caps.name("k2").map_or(SlotKind::Program, |k| kind_of(k.as_str())),
                many: caps.name("s2").is_some(),
                braced: depth > 0,
            }
        } else {
            Slot {
                source: Source::All,
                kind: SlotKind::Participant,
                many: true,
                braced: depth > 0,
            }
        };
        if slot.many && slot.kind != SlotKind::Participant {
            return Err(format!("only participant slots can be starred: {}", m.as_str()));
        }
        out.push(Segment::Slot(slot));
        last = m.end();
    }
    if template[last..].contains('[') {
        return Err(format!("malformed slot in {:?}", &template[last..]));
    }
    if last < template.len() {
        out.push(Segment::Text(template[last..].to_string()));
    }
    Ok(out)
}

/// Text of the bundled lexicon.
pub const STARTER_SOURCE: &str = include_str!("../../data/starter.lex");

/// Ordered rules; the first rule whose pattern matches is used.
#[derive(Debug, Clone)]
pub struct TriggerLexicon {
    rules: Vec<Rule>,
}

impl TriggerLexicon {
    /// The bundled rules.
    pub fn starter() -> Self {
        static STARTER: OnceLock<TriggerLexicon> = OnceLock::new();
        STARTER
            .get_or_init(|| Self::parse(STARTER_SOURCE).expect("bundled lexicon is valid"))
            .clone()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, LexiconError> {
        let text = std::fs::read_to_string(path.as_ref()).map_err(|e| LexiconError {
            line: 0,
            message: format!("{}: {e}", path.as_ref().display()),
        })?;
        Self::parse(&text)
    }

    /// One rule per line as `pattern => template`. Blank lines and lines
    /// starting with `#` are skipped. Every template is checked by parsing
    /// it with placeholder arguments.
    pub fn parse(text: &str) -> Result<Self, LexiconError> {
        let mut rules = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let err = |message: String| LexiconError { line, message };
            let (pattern, template) = trimmed
                .split_once(" => ")
                .ok_or_else(|| err("expected `pattern => template`".into()))?;
            let pattern = Regex::new(&format!("(?i){}", pattern.trim())).map_err(|e| err(e.to_string()))?;
            let template = template.trim().to_string();
            let segments = segments(&template).map_err(err)?;
            let mut rule = Rule {
                line,
                pattern,
                template,
                kind: FunctionKind::To,
                segments,
            };
            for slot in rule.slots() {
                if let Source::Group(g) = &slot.source {
                    if !rule.pattern.capture_names().flatten().any(|n| n == g) {
                        return Err(err(format!("template uses group {g:?} missing from the pattern")));
                    }
                }
            }
            let sample = |width: usize| {
                rule.fill(|slot| {
                    Ok(match (slot.kind, slot.many) {
                        (SlotKind::Participant, true) => Fill::Many((0..width).map(|k| format!("p{k}")).collect()),
                        (SlotKind::Participant, false) => Fill::One("p0".into()),
                        (SlotKind::Position, _) => Fill::One("pos0".into()),
                        (SlotKind::Number, _) => Fill::One("1".into()),
                        (SlotKind::Program, _) => Fill::One("(To(p0,pos0))".into()),
                    })
                })
                .map_err(err)
            };
            let check = |text: String| parse_program(&text).map_err(|e| err(format!("template does not parse: {e}")));
            check(sample(2)?)?;
            let program = check(sample(1)?)?;
            rule.kind = program.kind();
            rules.push(rule);
        }
        Ok(Self { rules })
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }
}
