//! Canonical program text.
//!
//! ARM-style functions print in CamelCase (`To`, `IfThen`), operator
//! functions in upper case (`VALUE`, `COUNT`), connectives as infix `AND`,
//! `OR` and prefix `NOT`. Call arguments are joined with `,` when they are
//! all plain names or numbers and with `, ` otherwise; set members always use
//! `, `. Parentheses appear only where precedence needs them.

use std::fmt::{self, Write};

use super::parse::{is_ident_char, is_ident_start, keyword};
use super::{BoolExpr, NumExpr, Who};

fn write_name(f: &mut impl Write, name: &str) -> fmt::Result {
    let mut chars = name.chars();
    let bare = chars.next().is_some_and(is_ident_start) && chars.all(is_ident_char) && keyword(name).is_none();
    if bare {
        f.write_str(name)
    } else {
        f.write_char('"')?;
        for c in name.chars() {
            if c == '"' || c == '\\' {
                f.write_char('\\')?;
            }
            f.write_char(c)?;
        }
        f.write_char('"')
    }
}

fn write_names(f: &mut impl Write, names: &[String]) -> fmt::Result {
    f.write_char('{')?;
    for (i, n) in names.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write_name(f, n)?;
    }
    f.write_char('}')
}

fn write_who(f: &mut impl Write, who: &Who) -> fmt::Result {
    match who {
        Who::Named(n) => write_name(f, n),
        Who::ArgMax(ps) => {
            f.write_str("ARGMAX(")?;
            write_names(f, ps)?;
            f.write_char(')')
        }
        Who::ArgMin(ps) => {
            f.write_str("ARGMIN(")?;
            write_names(f, ps)?;
            f.write_char(')')
        }
        Who::Select(pos) => {
            f.write_str("SELECT(")?;
            write_name(f, pos)?;
            f.write_char(')')
        }
    }
}

fn simple_who(who: &Who) -> bool {
    matches!(who, Who::Named(_))
}

fn bool_prec(e: &BoolExpr) -> u8 {
    match e {
        BoolExpr::Or(..) => 1,
        BoolExpr::And(..) => 2,
        BoolExpr::Not(_) => 3,
        BoolExpr::Compare(..) => 4,
        _ => 5,
    }
}

fn num_prec(e: &NumExpr) -> u8 {
    match e {
        NumExpr::Add(..) | NumExpr::Sub(..) => 1,
        _ => 2,
    }
}

fn write_bool_at(f: &mut impl Write, e: &BoolExpr, parens: bool) -> fmt::Result {
    if parens {
        f.write_char('(')?;
        write_bool(f, e)?;
        f.write_char(')')
    } else {
        write_bool(f, e)
    }
}

fn write_set(f: &mut impl Write, items: &[BoolExpr]) -> fmt::Result {
    f.write_char('{')?;
    for (i, e) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write_bool(f, e)?;
    }
    f.write_char('}')
}

fn write_bool(f: &mut impl Write, e: &BoolExpr) -> fmt::Result {
    match e {
        BoolExpr::To(who, pos) => {
            f.write_str("To(")?;
            write_who(f, who)?;
            f.write_str(if simple_who(who) { "," } else { ", " })?;
            write_name(f, pos)?;
            f.write_char(')')
        }
        BoolExpr::Before(a, b) | BoolExpr::After(a, b) | BoolExpr::Adjacent(a, b) => {
            let head = match e {
                BoolExpr::Before(..) => "Before(",
                BoolExpr::After(..) => "After(",
                _ => "Adjacent(",
            };
            f.write_str(head)?;
            write_who(f, a)?;
            f.write_str(if simple_who(a) && simple_who(b) { "," } else { ", " })?;
            write_who(f, b)?;
            f.write_char(')')
        }
        BoolExpr::Compare(op, a, b) => {
            write_num(f, a)?;
            write!(f, " {} ", op.kind())?;
            write_num(f, b)
        }
        BoolExpr::IfThen(xs, ys) => {
            f.write_str("IfThen(")?;
            write_set(f, xs)?;
            f.write_str(", ")?;
            write_set(f, ys)?;
            f.write_char(')')
        }
        BoolExpr::And(a, b) => {
            write_bool_at(f, a, bool_prec(a) < 2)?;
            f.write_str(" AND ")?;
            write_bool_at(f, b, bool_prec(b) <= 2)
        }
        BoolExpr::Or(a, b) => {
            write_bool_at(f, a, bool_prec(a) < 1)?;
            f.write_str(" OR ")?;
            write_bool_at(f, b, bool_prec(b) <= 1)
        }
        BoolExpr::Not(a) => {
            f.write_str("NOT ")?;
            write_bool_at(f, a, bool_prec(a) < 3)
        }
    }
}

fn write_num(f: &mut impl Write, e: &NumExpr) -> fmt::Result {
    match e {
        NumExpr::Const(n) => write!(f, "{n}"),
        NumExpr::Value(who) => {
            f.write_str("VALUE(")?;
            write_who(f, who)?;
            f.write_char(')')
        }
        NumExpr::Count(ps, pos) => {
            f.write_str("COUNT(")?;
            write_names(f, ps)?;
            if let Some(pos) = pos {
                f.write_str(", ")?;
                write_name(f, pos)?;
            }
            f.write_char(')')
        }
        NumExpr::Add(a, b) | NumExpr::Sub(a, b) => {
            write_num(f, a)?;
            f.write_str(if matches!(e, NumExpr::Add(..)) { " + " } else { " - " })?;
            if num_prec(b) <= 1 {
                f.write_char('(')?;
                write_num(f, b)?;
                f.write_char(')')
            } else {
                write_num(f, b)
            }
        }
        NumExpr::Max(xs) | NumExpr::Min(xs) => {
            f.write_str(if matches!(e, NumExpr::Max(_)) { "MAX(" } else { "MIN(" })?;
            let plain = xs.iter().all(|x| matches!(x, NumExpr::Const(_)));
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    f.write_str(if plain { "," } else { ", " })?;
                }
                write_num(f, x)?;
            }
            f.write_char(')')
        }
    }
}

impl fmt::Display for BoolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_bool(f, self)
    }
}

impl fmt::Display for NumExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_num(f, self)
    }
}

impl fmt::Display for Who {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_who(f, self)
    }
}

/// A name as it appears in program text, quoted when needed.
pub(crate) fn name_text(name: &str) -> String {
    let mut out = String::new();
    write_name(&mut out, name).expect("writing to a String");
    out
}

/// Canonical text of a program.
pub fn print_program(e: &BoolExpr) -> String {
    e.to_string()
}

#[cfg(test)]
mod tests {
    use super::super::parse_program;
    use super::*;

    #[test]
    fn quoted_strings_round_trip() {
        for s in [
            "VALUE(roadster) > VALUE(van) AND VALUE(roadster) < VALUE(hatchback)",
            "IfThen({To(A,X)}, {To(B,Y)})",
        ] {
            assert_eq!(parse_program(s).unwrap().to_string(), s);
        }
    }

    #[test]
    fn double_negation_kept() {
        let e = BoolExpr::to("A", "X").negated().negated();
        assert_eq!(e.to_string(), "NOT NOT To(A,X)");
        assert_eq!(parse_program(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn parentheses_only_when_needed() {
        let e = parse_program("((To(A,X) OR To(B,X))) AND (To(C,X) AND To(D,X))").unwrap();
        assert_eq!(e.to_string(), "(To(A,X) OR To(B,X)) AND (To(C,X) AND To(D,X))");
        let e = parse_program("NOT (To(A,X) AND To(B,X))").unwrap();
        assert_eq!(e.to_string(), "NOT (To(A,X) AND To(B,X))");
        let e = parse_program("VALUE(A) - (VALUE(B) - 1) = -2").unwrap();
        assert_eq!(e.to_string(), "VALUE(A) - (VALUE(B) - 1) = -2");
    }

    #[test]
    fn names_quoted_when_needed() {
        let e = BoolExpr::to("and", "X committee").and(BoolExpr::to("Bo\"b", "Y"));
        assert_eq!(e.to_string(), "To(\"and\",\"X committee\") AND To(\"Bo\\\"b\",Y)");
        assert_eq!(parse_program(&e.to_string()).unwrap(), e);
    }
}
