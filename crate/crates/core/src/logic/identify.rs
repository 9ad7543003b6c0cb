use super::{ExpressionSet, Implication, Literal, LogicError, SymbolId};

/// A symbol occurrence inside one sentence, as a byte range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct SymbolSpan {
    pub start: usize,
    pub end: usize,
    pub symbol: SymbolId,
}

/// A sentence together with its symbol spans.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentenceSpans {
    pub text: String,
    pub spans: Vec<SymbolSpan>,
}

/// Number of words before a span searched for a negation cue.
const NEGATION_WINDOW: usize = 3;

/// Word sequences that negate a symbol when they occur inside it or just
/// before it. A cue of `n't` also matches any word ending in `n't`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NegationCues {
    cues: Vec<Vec<String>>,
}

impl Default for NegationCues {
    fn default() -> Self {
        Self::new(["not", "n't", "unable", "no", "few", "little", "neither", "none of"])
    }
}

impl NegationCues {
    pub fn new<I, S>(cues: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let cues = cues
            .into_iter()
            .map(|c| c.as_ref().split_whitespace().map(normalize).collect::<Vec<_>>())
            .filter(|c: &Vec<String>| !c.is_empty())
            .collect();
        Self { cues }
    }

    /// Whether any cue occurs entirely within `words`.
    pub fn any_in(&self, words: &[&str]) -> bool {
        let words: Vec<String> = words.iter().map(|w| normalize(w)).collect();
        self.cues.iter().any(|cue| {
            words.windows(cue.len()).any(|window| {
                window
                    .iter()
                    .zip(cue)
                    .all(|(w, c)| if c == "n't" { w.ends_with("n't") } else { w == c })
            })
        })
    }
}

fn normalize(word: &str) -> String {
    word.to_lowercase().replace('\u{2019}', "'")
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Token<'a> {
    pub start: usize,
    pub end: usize,
    pub text: &'a str,
}

impl Token<'_> {
    fn is_word(&self) -> bool {
        self.text.chars().next().is_some_and(is_word_char)
    }
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '\'' || c == '\u{2019}'
}

/// Words and single punctuation characters, with byte offsets.
pub(crate) fn tokenize(text: &str) -> Vec<Token<'_>> {
    let mut tokens = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some((start, c)) = chars.next() {
        if c.is_whitespace() {
            continue;
        }
        let mut end = start + c.len_utf8();
        if is_word_char(c) {
            while let Some(&(i, next)) = chars.peek() {
                if !is_word_char(next) {
                    break;
                }
                end = i + next.len_utf8();
                chars.next();
            }
        }
        tokens.push(Token {
            start,
            end,
            text: &text[start..end],
        });
    }
    tokens
}

fn words_in<'a>(tokens: &[Token<'a>], from: usize, to: usize) -> Vec<&'a str> {
    tokens
        .iter()
        .filter(|t| t.start >= from && t.end <= to && t.is_word())
        .map(|t| t.text)
        .collect()
}

fn literal_for(tokens: &[Token<'_>], span: &SymbolSpan, region_start: usize, cues: &NegationCues) -> Literal {
    if cues.any_in(&words_in(tokens, span.start, span.end)) {
        return Literal::neg(span.symbol);
    }
    // words just before the span, not crossing the previous span or a clause break
    let mut before: Vec<&str> = Vec::new();
    for t in tokens.iter().rev() {
        if t.end > span.start {
            continue;
        }
        if t.start < region_start || matches!(t.text, "," | ";" | ":") {
            break;
        }
        if t.is_word() {
            before.push(t.text);
            if before.len() == NEGATION_WINDOW {
                break;
            }
        }
    }
    before.reverse();
    Literal {
        symbol: span.symbol,
        negated: cues.any_in(&before),
    }
}

fn contains_phrase(words: &[&str], phrase: &[&str]) -> bool {
    words
        .windows(phrase.len())
        .any(|w| w.iter().zip(phrase).all(|(a, b)| a.eq_ignore_ascii_case(b)))
}

/// Builds one implication per sentence that matches a conditional pattern.
///
/// The first two spans of a sentence, in text order, are the two literals.
/// Recognized shapes, checked in this order:
///
/// * `if L1, [then] L2` gives `L1 → L2`
/// * `L1 unless L2` gives `L2 → ¬L1`
/// * `L1 due to L2` gives `L2 → L1`
/// * `L1 thus L2` gives `L1 → L2`
///
/// Sentences matching none of them, or with fewer than two spans, add
/// nothing. Overlapping spans in a sentence are rejected.
pub fn identify_logic<S: AsRef<str>>(
    sentences: &[S],
    symbol_spans: &[Vec<SymbolSpan>],
    cues: &NegationCues,
) -> Result<ExpressionSet, LogicError> {
    let mut out = ExpressionSet::new();
    for (n, sentence) in sentences.iter().enumerate() {
        let text = sentence.as_ref();
        let mut spans = symbol_spans.get(n).cloned().unwrap_or_default();
        for s in &spans {
            if s.start >= s.end
                || s.end > text.len()
                || !text.is_char_boundary(s.start)
                || !text.is_char_boundary(s.end)
            {
                return Err(LogicError::BadSpan {
                    sentence: n,
                    span: (s.start, s.end),
                });
            }
        }
        spans.sort_by_key(|s| (s.start, s.end));
        for pair in spans.windows(2) {
            if pair[1].start < pair[0].end {
                return Err(LogicError::OverlappingSpans {
                    sentence: n,
                    first: (pair[0].start, pair[0].end),
                    second: (pair[1].start, pair[1].end),
                });
            }
        }
        if spans.len() < 2 {
            continue;
        }
        let tokens = tokenize(text);
        let (first, second) = (&spans[0], &spans[1]);
        let l1 = literal_for(&tokens, first, 0, cues);
        let l2 = literal_for(&tokens, second, first.end, cues);
        let leading = words_in(&tokens, 0, first.start);
        let between = words_in(&tokens, first.end, second.start);

        let built = if leading.iter().any(|w| w.eq_ignore_ascii_case("if")) {
            Some((l1, l2))
        } else if contains_phrase(&between, &["unless"]) {
            Some((l2, super::negate(l1)))
        } else if contains_phrase(&between, &["due", "to"]) {
            Some((l2, l1))
        } else if contains_phrase(&between, &["thus"]) {
            Some((l1, l2))
        } else {
            None
        };
        if let Some((a, c)) = built {
            if let Ok(i) = Implication::new(a, c) {
                out.insert(i);
            }
        }
    }
    Ok(out)
}

/// Finds each surface in `sentence` (ASCII case-insensitive, first
/// non-overlapping occurrence) and returns the matching spans in text order.
/// Surfaces that do not occur are skipped.
pub fn locate_spans(sentence: &str, surfaces: &[(&str, SymbolId)]) -> Vec<SymbolSpan> {
    let haystack = sentence.to_ascii_lowercase();
    let mut found: Vec<SymbolSpan> = Vec::new();
    let mut order: Vec<&(&str, SymbolId)> = surfaces.iter().filter(|(s, _)| !s.is_empty()).collect();
    // longer surfaces first so that a short one cannot claim part of a longer one
    order.sort_by_key(|(s, _)| std::cmp::Reverse(s.len()));
    for (surface, symbol) in order {
        let needle = surface.to_ascii_lowercase();
        let mut from = 0;
        while let Some(offset) = haystack[from..].find(&needle) {
            let start = from + offset;
            let end = start + needle.len();
            let overlaps = found.iter().any(|s| start < s.end && s.start < end);
            if !overlaps && haystack.is_char_boundary(start) && haystack.is_char_boundary(end) {
                found.push(SymbolSpan {
                    start,
                    end,
                    symbol: *symbol,
                });
                break;
            }
            from = start + needle.chars().next().map_or(1, char::len_utf8);
        }
    }
    found.sort_by_key(|s| s.start);
    found
}
