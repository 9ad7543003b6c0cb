//! Participants and positions from the leading sentence of a game.

use serde::{Deserialize, Serialize};

use super::InterpError;
use crate::game::GameSpec;
use crate::logic::{tokenize, Token};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entity {
    pub name: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub aliases: Vec<String>,
}

impl Entity {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            aliases: Vec::new(),
        }
    }

    /// Name and aliases.
    pub fn surfaces(&self) -> impl Iterator<Item = &str> {
        std::iter::once(self.name.as_str()).chain(self.aliases.iter().map(String::as_str))
    }

    /// The shortest surface; interpreted programs refer to the entity by it.
    pub fn key(&self) -> &str {
        self.surfaces().min_by_key(|s| s.chars().count()).unwrap_or(&self.name)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntityCatalog {
    pub participants: Vec<Entity>,
    pub positions: Vec<Entity>,
}

impl EntityCatalog {
    /// A catalog without aliases, e.g. from dataset annotations.
    pub fn from_names<P, Q>(participants: P, positions: Q) -> Result<Self, InterpError>
    where
        P: IntoIterator,
        P::Item: Into<String>,
        Q: IntoIterator,
        Q::Item: Into<String>,
    {
        let cat = Self {
            participants: participants.into_iter().map(Entity::new).collect(),
            positions: positions.into_iter().map(Entity::new).collect(),
        };
        cat.check()?;
        Ok(cat)
    }

    /// No surface is shared between a participant and a position.
    pub fn check(&self) -> Result<(), InterpError> {
        for p in &self.participants {
            for s in p.surfaces() {
                if self
                    .positions
                    .iter()
                    .any(|q| q.surfaces().any(|t| t.eq_ignore_ascii_case(s)))
                {
                    return Err(InterpError::SharedName(s.to_string()));
                }
            }
        }
        Ok(())
    }

    pub fn game_spec(&self) -> GameSpec {
        GameSpec::new(
            self.participants.iter().map(|e| e.name.clone()),
            self.positions.iter().map(|e| e.name.clone()),
        )
    }
}

const CONNECTORS: &[&str] = &[",", "and", "or", "nor", "the", "a", "an", "either", "both"];

/// The first sentence, up to a `.`, `?` or `!` followed by whitespace or
/// the end of the text, or up to the first line break.
pub fn leading_sentence(context: &str) -> &str {
    let text = context.trim_start();
    let mut chars = text.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        if c == '\n' {
            return text[..i].trim_end();
        }
        if matches!(c, '.' | '?' | '!') && chars.peek().is_none_or(|&(_, n)| n.is_whitespace()) {
            return &text[..i];
        }
    }
    text.trim_end()
}

fn is_mention(tokens: &[Token<'_>], i: usize) -> bool {
    let t = tokens[i].text;
    let capital = t.chars().next().is_some_and(|c| c.is_uppercase() || c.is_ascii_digit());
    if !capital {
        return false;
    }
    // A sentence-initial capital is only taken when a list follows it.
    if i == 0 && t.chars().count() > 1 {
        return tokens.get(1).is_some_and(|n| n.text == ",");
    }
    true
}

fn is_lower_word(t: &str) -> bool {
    t.chars().next().is_some_and(char::is_lowercase) && !CONNECTORS.contains(&t)
}

/// Groups capitalized mentions of the leading sentence. A group is a run of
/// two or more mentions joined only by list connectors. A lowercase noun
/// repeated after several mentions of one group ("the X committee or the Y
/// committee") becomes part of each name, and the bare mention is kept as an
/// alias.
pub fn extract_entities(context: &str) -> Result<EntityCatalog, InterpError> {
    let sentence = leading_sentence(context);
    if sentence.is_empty() {
        return Err(InterpError::NoLeadingSentence);
    }
    let tokens = tokenize(sentence);
    let mut groups: Vec<Vec<Entity>> = Vec::new();
    let mut current: Vec<Entity> = Vec::new();
    let mut head: Option<&str> = None;
    let mut i = 0;
    while i < tokens.len() {
        let t = tokens[i].text;
        if is_mention(&tokens, i) {
            let next = tokens.get(i + 1).map(|n| n.text);
            let absorb = match next {
                Some(w) if is_lower_word(w) => head == Some(w) || repeats_head(&tokens, i, w),
                _ => false,
            };
            if absorb {
                let w = next.unwrap();
                head = Some(w);
                current.push(Entity {
                    name: format!("{t} {w}"),
                    aliases: vec![t.to_string()],
                });
                i += 2;
                continue;
            }
            current.push(Entity::new(t));
        } else if !(CONNECTORS.contains(&t.to_lowercase().as_str()) && !current.is_empty()) {
            if !current.is_empty() {
                groups.push(std::mem::take(&mut current));
            }
            head = None;
        }
        i += 1;
    }
    if !current.is_empty() {
        groups.push(current);
    }
    groups.retain(|g| g.len() >= 2);
    if groups.len() < 2 {
        return Err(InterpError::TooFewGroups(groups.len()));
    }
    let mut groups = groups.into_iter();
    let cat = EntityCatalog {
        participants: groups.next().unwrap(),
        positions: groups.next().unwrap(),
    };
    cat.check()?;
    Ok(cat)
}

// After the mention at `i` and its noun `w`, do connectors lead to another
// mention followed by the same noun?
fn repeats_head(tokens: &[Token<'_>], i: usize, w: &str) -> bool {
    let mut j = i + 2;
    while j < tokens.len() && CONNECTORS.contains(&tokens[j].text.to_lowercase().as_str()) {
        j += 1;
    }
    j > i + 2 && j + 1 < tokens.len() && is_mention(tokens, j) && tokens[j + 1].text == w
}
