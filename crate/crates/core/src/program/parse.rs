//! Lexer, untyped parse tree and type checking for program text.
//!
//! Parsing happens in two passes. The first builds an untyped tree with the
//! usual precedence (`IF … THEN` < `OR` < `AND` < `NOT` < comparison <
//! `+`/`-`); the second checks it into [`BoolExpr`], reporting a type error
//! when, say, a numeric term sits where a boolean is expected.

use thiserror::Error;

use super::{BoolExpr, CmpOp, NumExpr, Who};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    Type,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("{kind:?} error at {line}:{column}: {message}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub message: String,
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Loc {
    line: usize,
    column: usize,
}

fn syntax(loc: Loc, message: impl Into<String>) -> ParseError {
    ParseError {
        kind: ParseErrorKind::Syntax,
        message: message.into(),
        line: loc.line,
        column: loc.column,
    }
}

fn type_error(loc: Loc, message: impl Into<String>) -> ParseError {
    ParseError {
        kind: ParseErrorKind::Type,
        message: message.into(),
        line: loc.line,
        column: loc.column,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Keyword {
    And,
    Or,
    Not,
    If,
    Then,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Quoted(String),
    Int(i64),
    Kw(Keyword),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Cmp(CmpOp),
    Plus,
    Minus,
    End,
}

pub(crate) fn keyword(word: &str) -> Option<Keyword> {
    match word.to_ascii_uppercase().as_str() {
        "AND" => Some(Keyword::And),
        "OR" => Some(Keyword::Or),
        "NOT" => Some(Keyword::Not),
        "IF" => Some(Keyword::If),
        "THEN" => Some(Keyword::Then),
        _ => None,
    }
}

pub(crate) fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

pub(crate) fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

fn lex(text: &str) -> Result<Vec<(Tok, Loc)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut column) = (0, 1, 1);
    macro_rules! bump {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            i += 1;
        }};
    }
    while i < chars.len() {
        let c = chars[i];
        let loc = Loc { line, column };
        if c.is_whitespace() {
            bump!();
            continue;
        }
        let peek = chars.get(i + 1).copied();
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            ',' => Tok::Comma,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '=' => {
                if peek == Some('=') {
                    bump!();
                }
                Tok::Cmp(CmpOp::Eq)
            }
            '!' if peek == Some('=') => {
                bump!();
                Tok::Cmp(CmpOp::Ne)
            }
            '<' => match peek {
                Some('=') => {
                    bump!();
                    Tok::Cmp(CmpOp::Le)
                }
                Some('>') => {
                    bump!();
                    Tok::Cmp(CmpOp::Ne)
                }
                _ => Tok::Cmp(CmpOp::Lt),
            },
            '>' => {
                if peek == Some('=') {
                    bump!();
                    Tok::Cmp(CmpOp::Ge)
                } else {
                    Tok::Cmp(CmpOp::Gt)
                }
            }
            '≠' => Tok::Cmp(CmpOp::Ne),
            '≤' => Tok::Cmp(CmpOp::Le),
            '≥' => Tok::Cmp(CmpOp::Ge),
            '"' => {
                bump!();
                let mut s = String::new();
                loop {
                    match chars.get(i) {
                        None => return Err(syntax(loc, "unterminated string")),
                        Some('"') => break,
                        Some('\\') => {
                            bump!();
                            match chars.get(i) {
                                Some(&e @ ('"' | '\\')) => s.push(e),
                                _ => return Err(syntax(Loc { line, column }, "bad escape in string")),
                            }
                            bump!();
                        }
                        Some(&ch) => {
                            s.push(ch);
                            bump!();
                        }
                    }
                }
                if s.trim().is_empty() {
                    return Err(syntax(loc, "empty name"));
                }
                Tok::Quoted(s)
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while let Some(&d) = chars.get(i) {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    s.push(d);
                    bump!();
                }
                if chars.get(i).copied().is_some_and(is_ident_char) {
                    return Err(syntax(loc, format!("malformed number {s}{}", chars[i])));
                }
                let n = s.parse().map_err(|_| syntax(loc, format!("number {s} out of range")))?;
                out.push((Tok::Int(n), loc));
                continue;
            }
            c if is_ident_start(c) => {
                let mut s = String::new();
                while let Some(&d) = chars.get(i) {
                    if !is_ident_char(d) {
                        break;
                    }
                    s.push(d);
                    bump!();
                }
                let tok = match keyword(&s) {
                    Some(k) => Tok::Kw(k),
                    None => Tok::Ident(s),
                };
                out.push((tok, loc));
                continue;
            }
            other => return Err(syntax(loc, format!("unexpected character {other:?}"))),
        };
        bump!();
        out.push((tok, loc));
    }
    out.push((Tok::End, Loc { line, column }));
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Arith {
    Add,
    Sub,
}

#[derive(Debug, Clone)]
enum Term {
    Int(i64, Loc),
    Name(String, Loc),
    Call(String, Vec<Term>, Loc),
    Set(Vec<Term>, Loc),
    And(Box<Term>, Box<Term>, Loc),
    Or(Box<Term>, Box<Term>, Loc),
    Not(Box<Term>, Loc),
    IfThen(Box<Term>, Box<Term>, Loc),
    Cmp(CmpOp, Box<Term>, Box<Term>, Loc),
    Arith(Arith, Box<Term>, Box<Term>, Loc),
}

impl Term {
    fn loc(&self) -> Loc {
        match self {
            Term::Int(_, l)
            | Term::Name(_, l)
            | Term::Call(_, _, l)
            | Term::Set(_, l)
            | Term::And(_, _, l)
            | Term::Or(_, _, l)
            | Term::Not(_, l)
            | Term::IfThen(_, _, l)
            | Term::Cmp(_, _, _, l)
            | Term::Arith(_, _, _, l) => *l,
        }
    }

    fn describe(&self) -> String {
        match self {
            Term::Int(n, _) => format!("number {n}"),
            Term::Name(n, _) => format!("name {n:?}"),
            Term::Call(f, ..) => format!("call to {f}"),
            Term::Set(..) => "a set".to_string(),
            Term::And(..) | Term::Or(..) | Term::Not(..) | Term::IfThen(..) | Term::Cmp(..) => {
                "a boolean expression".to_string()
            }
            Term::Arith(..) => "an arithmetic expression".to_string(),
        }
    }
}

struct Parser {
    toks: Vec<(Tok, Loc)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.at + 1).min(self.toks.len() - 1)].0
    }

    fn loc(&self) -> Loc {
        self.toks[self.at].1
    }

    fn next(&mut self) -> (Tok, Loc) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<Loc, ParseError> {
        let (tok, loc) = self.next();
        if tok == want {
            Ok(loc)
        } else {
            Err(syntax(loc, format!("expected {what}, found {}", show(&tok))))
        }
    }

    fn expr(&mut self) -> Result<Term, ParseError> {
        if *self.peek() == Tok::Kw(Keyword::If) {
            let (_, loc) = self.next();
            let cond = self.or()?;
            self.expect(Tok::Kw(Keyword::Then), "THEN")?;
            let then = self.or()?;
            return Ok(Term::IfThen(Box::new(cond), Box::new(then), loc));
        }
        self.or()
    }

    fn or(&mut self) -> Result<Term, ParseError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Kw(Keyword::Or) {
            let (_, loc) = self.next();
            let rhs = self.and()?;
            lhs = Term::Or(Box::new(lhs), Box::new(rhs), loc);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Term, ParseError> {
        let mut lhs = self.not()?;
        while *self.peek() == Tok::Kw(Keyword::And) {
            let (_, loc) = self.next();
            let rhs = self.not()?;
            lhs = Term::And(Box::new(lhs), Box::new(rhs), loc);
        }
        Ok(lhs)
    }

    fn not(&mut self) -> Result<Term, ParseError> {
        if *self.peek() == Tok::Kw(Keyword::Not) {
            let (_, loc) = self.next();
            let inner = self.not()?;
            return Ok(Term::Not(Box::new(inner), loc));
        }
        self.cmp()
    }

    fn cmp(&mut self) -> Result<Term, ParseError> {
        let lhs = self.arith()?;
        if let Tok::Cmp(op) = *self.peek() {
            let (_, loc) = self.next();
            let rhs = self.arith()?;
            if let Tok::Cmp(_) = self.peek() {
                return Err(syntax(self.loc(), "comparisons do not chain; add parentheses"));
            }
            return Ok(Term::Cmp(op, Box::new(lhs), Box::new(rhs), loc));
        }
        Ok(lhs)
    }

    fn arith(&mut self) -> Result<Term, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => Arith::Add,
                Tok::Minus => Arith::Sub,
                _ => return Ok(lhs),
            };
            let (_, loc) = self.next();
            let rhs = self.unary()?;
            lhs = Term::Arith(op, Box::new(lhs), Box::new(rhs), loc);
        }
    }

    fn unary(&mut self) -> Result<Term, ParseError> {
        if *self.peek() == Tok::Minus {
            let (_, loc) = self.next();
            return match self.next() {
                (Tok::Int(n), _) => Ok(Term::Int(-n, loc)),
                (tok, l) => Err(syntax(l, format!("expected a number after '-', found {}", show(&tok)))),
            };
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Term, ParseError> {
        // AND(...) / OR(...) call forms
        if let Tok::Kw(k @ (Keyword::And | Keyword::Or)) = *self.peek() {
            if *self.peek2() == Tok::LParen {
                let (_, loc) = self.next();
                let args = self.args()?;
                let name = if k == Keyword::And { "and" } else { "or" };
                return Ok(Term::Call(name.to_string(), args, loc));
            }
        }
        let (tok, loc) = self.next();
        match tok {
            Tok::Int(n) => Ok(Term::Int(n, loc)),
            Tok::Quoted(s) => Ok(Term::Name(s, loc)),
            Tok::Ident(s) => {
                if *self.peek() == Tok::LParen {
                    let args = self.args()?;
                    Ok(Term::Call(s, args, loc))
                } else {
                    Ok(Term::Name(s, loc))
                }
            }
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Tok::LBrace => {
                let mut items = Vec::new();
                if *self.peek() != Tok::RBrace {
                    loop {
                        items.push(self.expr()?);
                        if *self.peek() == Tok::Comma {
                            self.next();
                        } else {
                            break;
                        }
                    }
                }
                self.expect(Tok::RBrace, "'}'")?;
                Ok(Term::Set(items, loc))
            }
            other => Err(syntax(loc, format!("unexpected {}", show(&other)))),
        }
    }

    fn args(&mut self) -> Result<Vec<Term>, ParseError> {
        self.expect(Tok::LParen, "'('")?;
        let mut args = Vec::new();
        if *self.peek() != Tok::RParen {
            loop {
                args.push(self.expr()?);
                if *self.peek() == Tok::Comma {
                    self.next();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RParen, "')'")?;
        Ok(args)
    }
}

fn show(tok: &Tok) -> String {
    match tok {
        Tok::Ident(s) => format!("identifier {s:?}"),
        Tok::Quoted(s) => format!("string {s:?}"),
        Tok::Int(n) => format!("number {n}"),
        Tok::Kw(k) => format!("keyword {k:?}").to_uppercase(),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
        Tok::LBrace => "'{'".into(),
        Tok::RBrace => "'}'".into(),
        Tok::Comma => "','".into(),
        Tok::Cmp(op) => format!("'{}'", op.kind()),
        Tok::Plus => "'+'".into(),
        Tok::Minus => "'-'".into(),
        Tok::End => "end of input".into(),
    }
}

fn arity(name: &str, args: &[Term], want: usize, loc: Loc) -> Result<(), ParseError> {
    if args.len() != want {
        return Err(type_error(
            loc,
            format!("{name} takes {want} argument(s), got {}", args.len()),
        ));
    }
    Ok(())
}

// A bare non-negative integer also names an entity, e.g. slot `1`.
fn to_name(term: &Term) -> Result<String, ParseError> {
    match term {
        Term::Name(s, _) => Ok(s.clone()),
        Term::Int(n, _) if *n >= 0 => Ok(n.to_string()),
        other => Err(type_error(
            other.loc(),
            format!("expected an entity name, found {}", other.describe()),
        )),
    }
}

fn to_names(term: &Term) -> Result<Vec<String>, ParseError> {
    match term {
        Term::Set(items, loc) => {
            if items.is_empty() {
                return Err(type_error(*loc, "empty participant set"));
            }
            items.iter().map(to_name).collect()
        }
        Term::Name(s, _) => Ok(vec![s.clone()]),
        other => Err(type_error(
            other.loc(),
            format!("expected a set of names, found {}", other.describe()),
        )),
    }
}

fn to_bools(term: &Term) -> Result<Vec<BoolExpr>, ParseError> {
    match term {
        Term::Set(items, _) => items.iter().map(to_bool).collect(),
        other => Ok(vec![to_bool(other)?]),
    }
}

fn to_who(term: &Term) -> Result<Who, ParseError> {
    match term {
        Term::Name(s, _) => Ok(Who::Named(s.clone())),
        Term::Call(f, args, loc) => match f.to_ascii_lowercase().as_str() {
            "argmax" | "argmin" => {
                let names = if args.len() == 1 {
                    to_names(&args[0])?
                } else if args.is_empty() {
                    return Err(type_error(*loc, format!("{f} needs participants")));
                } else {
                    args.iter().map(to_name).collect::<Result<_, _>>()?
                };
                Ok(if f.eq_ignore_ascii_case("argmax") {
                    Who::ArgMax(names)
                } else {
                    Who::ArgMin(names)
                })
            }
            "select" => {
                arity(f, args, 1, *loc)?;
                Ok(Who::Select(to_name(&args[0])?))
            }
            _ => Err(type_error(*loc, format!("expected a participant, found call to {f}"))),
        },
        other => Err(type_error(
            other.loc(),
            format!("expected a participant, found {}", other.describe()),
        )),
    }
}

fn to_num(term: &Term) -> Result<NumExpr, ParseError> {
    match term {
        Term::Int(n, _) => Ok(NumExpr::Const(*n)),
        Term::Arith(op, a, b, _) => {
            let (a, b) = (Box::new(to_num(a)?), Box::new(to_num(b)?));
            Ok(match op {
                Arith::Add => NumExpr::Add(a, b),
                Arith::Sub => NumExpr::Sub(a, b),
            })
        }
        Term::Call(f, args, loc) => match f.to_ascii_lowercase().as_str() {
            "value" => {
                arity(f, args, 1, *loc)?;
                Ok(NumExpr::Value(to_who(&args[0])?))
            }
            "count" => match args.len() {
                1 => Ok(NumExpr::Count(to_names(&args[0])?, None)),
                2 => Ok(NumExpr::Count(to_names(&args[0])?, Some(to_name(&args[1])?))),
                n => Err(type_error(*loc, format!("COUNT takes 1 or 2 arguments, got {n}"))),
            },
            "max" | "min" => {
                if args.is_empty() {
                    return Err(type_error(*loc, format!("{f} needs at least one argument")));
                }
                let xs = args.iter().map(to_num).collect::<Result<Vec<_>, _>>()?;
                Ok(if f.eq_ignore_ascii_case("max") {
                    NumExpr::Max(xs)
                } else {
                    NumExpr::Min(xs)
                })
            }
            _ => Err(type_error(*loc, format!("expected a number, found call to {f}"))),
        },
        other => Err(type_error(
            other.loc(),
            format!("expected a number, found {}", other.describe()),
        )),
    }
}

fn to_bool(term: &Term) -> Result<BoolExpr, ParseError> {
    match term {
        Term::And(a, b, _) => Ok(to_bool(a)?.and(to_bool(b)?)),
        Term::Or(a, b, _) => Ok(to_bool(a)?.or(to_bool(b)?)),
        Term::Not(a, _) => Ok(to_bool(a)?.negated()),
        Term::IfThen(a, b, _) => Ok(BoolExpr::IfThen(vec![to_bool(a)?], vec![to_bool(b)?])),
        Term::Cmp(op, a, b, _) => Ok(BoolExpr::Compare(*op, to_num(a)?, to_num(b)?)),
        Term::Call(f, args, loc) => {
            let lower = f.to_ascii_lowercase();
            match lower.as_str() {
                "to" => {
                    arity(f, args, 2, *loc)?;
                    Ok(BoolExpr::To(to_who(&args[0])?, to_name(&args[1])?))
                }
                "before" | "after" | "adjacent" => {
                    arity(f, args, 2, *loc)?;
                    let (a, b) = (to_who(&args[0])?, to_who(&args[1])?);
                    Ok(match lower.as_str() {
                        "before" => BoolExpr::Before(a, b),
                        "after" => BoolExpr::After(a, b),
                        _ => BoolExpr::Adjacent(a, b),
                    })
                }
                "ifthen" => {
                    arity(f, args, 2, *loc)?;
                    Ok(BoolExpr::IfThen(to_bools(&args[0])?, to_bools(&args[1])?))
                }
                "and" | "or" => {
                    if args.len() < 2 {
                        return Err(type_error(*loc, format!("{f} needs at least two arguments")));
                    }
                    let parts = args.iter().map(to_bool).collect::<Result<Vec<_>, _>>()?;
                    let join = if lower == "and" { BoolExpr::and } else { BoolExpr::or };
                    Ok(parts.into_iter().reduce(join).expect("at least two parts"))
                }
                _ => Err(type_error(
                    *loc,
                    format!("expected a boolean expression, found call to {f}"),
                )),
            }
        }
        other => Err(type_error(
            other.loc(),
            format!("expected a boolean expression, found {}", other.describe()),
        )),
    }
}

/// Parses one program.
pub fn parse_program(text: &str) -> Result<BoolExpr, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
    };
    let term = p.expr()?;
    if *p.peek() != Tok::End {
        let tok = p.peek().clone();
        return Err(syntax(p.loc(), format!("unexpected {} after program", show(&tok))));
    }
    to_bool(&term)
}

/// Parses a program file: one program per line, `#` starts a comment,
/// blank lines are skipped. Returns `(line number, result)` per program.
pub fn parse_program_file(text: &str) -> Vec<(usize, Result<BoolExpr, ParseError>)> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        if line.trim().is_empty() {
            continue;
        }
        let parsed = parse_program(line).map_err(|mut e| {
            e.line = n + 1;
            e
        });
        out.push((n + 1, parsed));
    }
    out
}

// `#` outside a quoted name starts a comment
fn strip_comment(line: &str) -> &str {
    let mut quoted = false;
    let mut escaped = false;
    for (i, c) in line.char_indices() {
        match c {
            _ if escaped => escaped = false,
            '\\' if quoted => escaped = true,
            '"' => quoted = !quoted,
            '#' if !quoted => return &line[..i],
            _ => {}
        }
    }
    line
}
