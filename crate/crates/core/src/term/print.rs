//! Printer for the ASCII term grammar. Output re-parses to the same term.

use super::{Family, IndexExpr, Term};
use crate::rational;

// Binding strength, loosest first.
const ADD: u8 = 1;
const JOIN: u8 = 2;
const MEET: u8 = 3;
const SCALED: u8 = 4;

fn level(t: &Term) -> u8 {
    match t {
        Term::Add(..) => ADD,
        Term::Join(..) if sugar(t).is_none() => JOIN,
        Term::Meet(..) => MEET,
        Term::Neg(_) | Term::Scalar(..) | Term::NatScale(..) => SCALED,
        _ => SCALED + 1,
    }
}

/// Recognizes the `abs`, `pos` and `neg` expansions.
fn sugar(t: &Term) -> Option<(&'static str, &Term)> {
    let Term::Join(a, b) = t else { return None };
    match (a.as_ref(), b.as_ref()) {
        (Term::Neg(inner), Term::Zero) => Some(("neg", inner)),
        (x, Term::Zero) => Some(("pos", x)),
        (x, Term::Neg(y)) if x == y.as_ref() => Some(("abs", x)),
        _ => None,
    }
}

pub(super) fn term_to_string(t: &Term) -> String {
    let mut out = String::new();
    write_term(t, &mut out);
    out
}

fn write_at(t: &Term, min: u8, out: &mut String) {
    if level(t) < min {
        out.push('(');
        write_term(t, out);
        out.push(')');
    } else {
        write_term(t, out);
    }
}

fn write_term(t: &Term, out: &mut String) {
    if let Some((name, inner)) = sugar(t) {
        out.push_str(name);
        out.push('(');
        write_term(inner, out);
        out.push(')');
        return;
    }
    match t {
        Term::Zero => out.push('0'),
        Term::One => out.push_str("one"),
        Term::Var(x) => out.push_str(x),
        Term::Neg(a) => {
            out.push('-');
            // `-2*x` would read back as a negative scalar literal
            if matches!(a.as_ref(), Term::Scalar(..)) {
                out.push('(');
                write_term(a, out);
                out.push(')');
            } else {
                write_at(a, SCALED, out);
            }
        }
        Term::Add(a, b) => {
            write_at(a, ADD, out);
            match b.as_ref() {
                Term::Neg(c) => {
                    out.push_str(" - ");
                    write_at(c, JOIN, out);
                }
                _ => {
                    out.push_str(" + ");
                    write_at(b, JOIN, out);
                }
            }
        }
        Term::Join(a, b) => {
            write_at(a, JOIN, out);
            out.push_str(" \\/ ");
            write_at(b, MEET, out);
        }
        Term::Meet(a, b) => {
            write_at(a, MEET, out);
            out.push_str(" /\\ ");
            write_at(b, SCALED, out);
        }
        Term::Scalar(q, a) => {
            out.push_str(&rational::format(q));
            out.push('*');
            write_at(a, SCALED, out);
        }
        Term::NatScale(e, a) => {
            out.push_str(&index_to_string(*e));
            out.push('*');
            write_at(a, SCALED, out);
        }
        Term::CSup(bound, fam) => {
            out.push_str("csup[");
            write_term(bound, out);
            out.push_str("](");
            out.push_str(&family_to_string(fam));
            out.push(')');
        }
    }
}

fn index_to_string(e: IndexExpr) -> String {
    match (e.alpha, e.beta) {
        (1, 0) => "n".to_string(),
        (a, 0) => format!("({a}*n)"),
        (0, b) => format!("(0*n+{b})"),
        (1, b) => format!("(n+{b})"),
        (a, b) => format!("({a}*n+{b})"),
    }
}

fn list(ts: &[Term]) -> String {
    ts.iter().map(term_to_string).collect::<Vec<_>>().join(", ")
}

pub(super) fn family_to_string(fam: &Family) -> String {
    match fam {
        Family::EventuallyConstant { prefix, tail } => {
            format!("[{}] ~ {}", list(prefix), term_to_string(tail))
        }
        Family::Indexed(body) => format!("n : {}", term_to_string(body)),
        Family::DoubleIndexed { head, body } if head.is_empty() => {
            format!("n, k : {}", term_to_string(body))
        }
        Family::DoubleIndexed { head, body } => {
            format!("n, k : [{}] ++ {}", list(head), term_to_string(body))
        }
    }
}
