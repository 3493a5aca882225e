//! Recursive-descent parser for the ASCII term grammar.
//!
//! ```text
//! term   := "0" | "one" | "1" | ident | "-" term | term "+" term | term "-" term
//!         | term "/\" term | term "\/" term | rational "*" term
//!         | "abs(" term ")" | "pos(" term ")" | "neg(" term ")"
//!         | "csup[" term "](" family ")" | index "*" term   (family bodies only)
//! index  := "n" | "(" affine ")"          e.g. (2*n+1)
//! family := "n :" term
//!         | "[" [term {"," term}] "] ~" term
//!         | "n, k :" ["[" term {"," term} "] ++"] term
//! stmt   := term | term ("=" | "<=") term
//!         | [premise {";" premise}] "=>" term ("=" | "<=") term
//! premise:= term ("=" | "<=") term | "forall n :" term ("=" | "<=") term
//! ```
//!
//! Binding strength, tightest first: unary minus and scalar multiples, `/\`,
//! `\/`, then `+` and binary `-`. Binary operators associate to the left.

use num_bigint::BigInt;

use super::{Equation, Family, IndexExpr, QuasiEquation, Signature, Term, TermError};
use crate::rational::Q;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error(transparent)]
    Term(#[from] TermError),
}

impl ParseError {
    fn at(pos: usize, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax { pos, msg: msg.into() }
    }
}

/// A parsed line of input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Statement {
    Term(Term),
    Equation(Equation),
    Quasi(QuasiEquation),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    PlusPlus,
    Minus,
    Star,
    Slash,
    Meet,
    Join,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Semicolon,
    Tilde,
    Eq,
    Le,
    Implies,
}

const RESERVED: [&str; 7] = ["n", "one", "abs", "pos", "neg", "csup", "forall"];

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let next = bytes.get(i + 1).copied();
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Int(text[start..i].parse().expect("digits"))));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'\'') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            b'+' if next == Some(b'+') => Tok::PlusPlus,
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' if next == Some(b'\\') => Tok::Meet,
            b'/' => Tok::Slash,
            b'\\' if next == Some(b'/') => Tok::Join,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'[' => Tok::LBracket,
            b']' => Tok::RBracket,
            b',' => Tok::Comma,
            b':' => Tok::Colon,
            b';' => Tok::Semicolon,
            b'~' => Tok::Tilde,
            b'=' if next == Some(b'>') => Tok::Implies,
            b'=' => Tok::Eq,
            b'<' if next == Some(b'=') => Tok::Le,
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(ParseError::at(i, format!("unexpected character `{ch}`")));
            }
        };
        i += match tok {
            Tok::PlusPlus | Tok::Meet | Tok::Join | Tok::Implies | Tok::Le => 2,
            _ => 1,
        };
        out.push((start, tok));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Parser, ParseError> {
        Ok(Parser { toks: lex(text)?, pos: 0, end: text.len() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn is_ident(&self, k: usize, name: &str) -> bool {
        matches!(self.peek_at(k), Some(Tok::Ident(s)) if s == name)
    }

    fn error(&self, msg: impl Into<String>) -> ParseError {
        let found = match self.peek() {
            Some(t) => format!(" (found {t:?})"),
            None => " (found end of input)".to_string(),
        };
        ParseError::at(self.offset(), format!("{}{found}", msg.into()))
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut lhs = self.join()?;
        loop {
            if self.eat(&Tok::Plus) {
                lhs = lhs + self.join()?;
            } else if self.eat(&Tok::Minus) {
                lhs = lhs - self.join()?;
            } else {
                return Ok(lhs);
            }
        }
    }

    fn join(&mut self) -> Result<Term, ParseError> {
        let mut lhs = self.meet()?;
        while self.eat(&Tok::Join) {
            lhs = lhs | self.meet()?;
        }
        Ok(lhs)
    }

    fn meet(&mut self) -> Result<Term, ParseError> {
        let mut lhs = self.scaled()?;
        while self.eat(&Tok::Meet) {
            lhs = lhs & self.scaled()?;
        }
        Ok(lhs)
    }

    /// Starts a rational literal followed by `*`?
    fn rational_scalar_ahead(&self, k: usize) -> bool {
        matches!(self.peek_at(k), Some(Tok::Int(_))) && matches!(self.peek_at(k + 1), Some(Tok::Star | Tok::Slash))
    }

    fn scaled(&mut self) -> Result<Term, ParseError> {
        if self.rational_scalar_ahead(0) {
            let q = self.rational(false)?;
            self.expect(Tok::Star, "`*` after scalar")?;
            return Ok(Term::scalar(q, self.scaled()?));
        }
        if self.peek() == Some(&Tok::Minus) && self.rational_scalar_ahead(1) {
            self.bump();
            let q = self.rational(true)?;
            self.expect(Tok::Star, "`*` after scalar")?;
            return Ok(Term::scalar(q, self.scaled()?));
        }
        if self.eat(&Tok::Minus) {
            return Ok(-self.scaled()?);
        }
        if self.is_ident(0, "n") {
            let at = self.offset();
            self.bump();
            if !self.eat(&Tok::Star) {
                return Err(ParseError::at(at, "the index `n` may only appear as `n*t`"));
            }
            return Ok(Term::nat(IndexExpr::INDEX, self.scaled()?));
        }
        if self.peek() == Some(&Tok::LParen) {
            if let Some(e) = self.try_index_factor()? {
                return Ok(Term::nat(e, self.scaled()?));
            }
        }
        self.atom()
    }

    fn rational(&mut self, negative: bool) -> Result<Q, ParseError> {
        let Some(Tok::Int(num)) = self.bump() else {
            return Err(self.error("expected integer"));
        };
        let num = if negative { -num } else { num };
        if self.eat(&Tok::Slash) {
            let at = self.offset();
            match self.bump() {
                Some(Tok::Int(den)) if den > BigInt::from(0) => Ok(Q::new(num, den)),
                _ => Err(ParseError::at(at, "expected positive denominator")),
            }
        } else {
            Ok(Q::from_integer(num))
        }
    }

    /// Parses `( affine ) *` if the parenthesized group is an affine
    /// expression in `n`; otherwise leaves the position untouched.
    fn try_index_factor(&mut self) -> Result<Option<IndexExpr>, ParseError> {
        let save = self.pos;
        let open = self.offset();
        self.bump();
        let (mut alpha, mut beta, mut mentions_n) = (0u64, 0u64, false);
        loop {
            // summand := INT | "n" | INT "*" "n"
            match self.bump() {
                Some(Tok::Ident(s)) if s == "n" => {
                    alpha += 1;
                    mentions_n = true;
                }
                Some(Tok::Int(k)) => {
                    let k = u64::try_from(&k).map_err(|_| ParseError::at(open, "index coefficient too large"))?;
                    if self.eat(&Tok::Star) {
                        if !self.is_ident(0, "n") {
                            self.pos = save;
                            return Ok(None);
                        }
                        self.bump();
                        alpha += k;
                        mentions_n = true;
                    } else {
                        beta += k;
                    }
                }
                _ => {
                    self.pos = save;
                    return Ok(None);
                }
            }
            if self.eat(&Tok::Plus) {
                continue;
            }
            if self.eat(&Tok::RParen) && mentions_n && self.eat(&Tok::Star) {
                return match IndexExpr::new(alpha, beta) {
                    Some(e) => Ok(Some(e)),
                    None => Err(ParseError::at(open, "index multiple must be at least 1")),
                };
            }
            self.pos = save;
            return Ok(None);
        }
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::Int(k)) if k == BigInt::from(0) => Ok(Term::Zero),
            Some(Tok::Int(k)) if k == BigInt::from(1) => Ok(Term::One),
            Some(Tok::Int(_)) => Err(ParseError::at(at, "integer literal must scale a term, as in `3*t`")),
            Some(Tok::LParen) => {
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            Some(Tok::Ident(name)) => match name.as_str() {
                "one" => Ok(Term::One),
                "abs" | "pos" | "neg" => {
                    self.expect(Tok::LParen, "`(`")?;
                    let t = self.term()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(match name.as_str() {
                        "abs" => t.abs(),
                        "pos" => t.pos(),
                        _ => t.neg_part(),
                    })
                }
                "csup" => {
                    self.expect(Tok::LBracket, "`[` after csup")?;
                    let bound = self.term()?;
                    self.expect(Tok::RBracket, "`]`")?;
                    self.expect(Tok::LParen, "`(`")?;
                    let fam = self.family()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(Term::csup(bound, fam))
                }
                _ if RESERVED.contains(&name.as_str()) => Err(ParseError::at(at, format!("`{name}` is reserved"))),
                _ => Ok(Term::Var(name)),
            },
            _ => {
                self.pos -= 1;
                Err(self.error("expected a term"))
            }
        }
    }

    fn term_list(&mut self) -> Result<Vec<Term>, ParseError> {
        self.expect(Tok::LBracket, "`[`")?;
        let mut items = Vec::new();
        if self.eat(&Tok::RBracket) {
            return Ok(items);
        }
        loop {
            items.push(self.term()?);
            if self.eat(&Tok::RBracket) {
                return Ok(items);
            }
            self.expect(Tok::Comma, "`,` or `]`")?;
        }
    }

    fn family(&mut self) -> Result<Family, ParseError> {
        if self.peek() == Some(&Tok::LBracket) {
            let prefix = self.term_list()?;
            self.expect(Tok::Tilde, "`~` before the tail of the family")?;
            let tail = self.term()?;
            return Ok(Family::EventuallyConstant { prefix, tail });
        }
        if !self.is_ident(0, "n") {
            return Err(self.error("expected `n :`, `n, k :` or `[...] ~`"));
        }
        self.bump();
        if self.eat(&Tok::Comma) {
            if !self.is_ident(0, "k") {
                return Err(self.error("expected `k`"));
            }
            self.bump();
            self.expect(Tok::Colon, "`:`")?;
            let head = if self.peek() == Some(&Tok::LBracket) {
                let head = self.term_list()?;
                self.expect(Tok::PlusPlus, "`++`")?;
                head
            } else {
                Vec::new()
            };
            let body = self.term()?;
            return Ok(Family::DoubleIndexed { head, body });
        }
        self.expect(Tok::Colon, "`:`")?;
        Ok(Family::Indexed(self.term()?))
    }

    /// `term ("=" | "<=") term`, returned as an equation pair.
    fn relation(&mut self) -> Result<(Term, Term), ParseError> {
        let lhs = self.term()?;
        self.relation_rest(lhs)
    }

    fn relation_rest(&mut self, lhs: Term) -> Result<(Term, Term), ParseError> {
        if self.eat(&Tok::Eq) {
            Ok((lhs, self.term()?))
        } else if self.eat(&Tok::Le) {
            let rhs = self.term()?;
            Ok((lhs.clone() & rhs, lhs))
        } else {
            Err(self.error("expected `=` or `<=`"))
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error("unexpected trailing input"))
        }
    }

    fn statement(&mut self, sig: Signature) -> Result<Statement, ParseError> {
        if self.at_end() {
            return Err(self.error("empty input"));
        }
        let mut finite = Vec::new();
        let mut indexed: Option<(Term, Term)> = None;
        if !self.eat(&Tok::Implies) {
            loop {
                if self.is_ident(0, "forall") {
                    let at = self.offset();
                    self.bump();
                    if !self.is_ident(0, "n") {
                        return Err(self.error("expected `n` after forall"));
                    }
                    self.bump();
                    self.expect(Tok::Colon, "`:`")?;
                    let pair = self.relation()?;
                    if indexed.replace(pair).is_some() {
                        return Err(ParseError::at(at, "at most one indexed premise family is supported"));
                    }
                } else {
                    let lhs = self.term()?;
                    if finite.is_empty() && indexed.is_none() && self.at_end() {
                        sig.check(&lhs)?;
                        return Ok(Statement::Term(lhs));
                    }
                    let pair = self.relation_rest(lhs)?;
                    if finite.is_empty() && indexed.is_none() && self.at_end() {
                        return Ok(Statement::Equation(Equation::new(pair.0, pair.1, sig)?));
                    }
                    finite.push(pair);
                }
                if self.eat(&Tok::Semicolon) {
                    continue;
                }
                self.expect(Tok::Implies, "`;` or `=>`")?;
                break;
            }
        }
        let conclusion = self.relation()?;
        self.finish()?;
        Ok(Statement::Quasi(QuasiEquation::new(finite, indexed, conclusion, sig)?))
    }
}

/// Parses a term, an equation/inequality, or a quasi-equation.
pub fn parse(text: &str, signature: Signature) -> Result<Statement, ParseError> {
    Parser::new(text)?.statement(signature)
}

pub fn parse_term(text: &str, signature: Signature) -> Result<Term, ParseError> {
    let mut p = Parser::new(text)?;
    let t = p.term()?;
    p.finish()?;
    signature.check(&t)?;
    Ok(t)
}

/// Parses an indexed family body, in which `n` may occur in index factors.
pub fn parse_family_body(text: &str, signature: Signature) -> Result<Term, ParseError> {
    let mut p = Parser::new(text)?;
    let t = p.term()?;
    p.finish()?;
    signature.check_family_body(&t)?;
    Ok(t)
}

/// Parses `a = b` or `a <= b` (stored as `a /\ b = a`).
pub fn parse_equation(text: &str, signature: Signature) -> Result<Equation, ParseError> {
    let mut p = Parser::new(text)?;
    let (lhs, rhs) = p.relation()?;
    p.finish()?;
    Ok(Equation::new(lhs, rhs, signature)?)
}

/// Parses a quasi-equation; a plain equation is read as one with no premises.
pub fn parse_quasi(text: &str, signature: Signature) -> Result<QuasiEquation, ParseError> {
    match parse(text, signature)? {
        Statement::Quasi(q) => Ok(q),
        Statement::Equation(eq) => Ok(QuasiEquation {
            finite_premises: Vec::new(),
            indexed_premise: None,
            conclusion: (eq.lhs, eq.rhs),
            signature,
        }),
        Statement::Term(_) => Err(ParseError::at(0, "expected a quasi-equation")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn v(x: &str) -> Term {
        Term::var(x)
    }

    #[test]
    fn meet_of_vars() {
        assert_eq!(parse_term("x /\\ y", Signature::Lg).unwrap(), v("x") & v("y"));
    }

    #[test]
    fn weak_unit_axiom_left_side() {
        let t = parse_term("csup[g](n : abs(f) /\\ n*one)", Signature::Lgu).unwrap();
        let expected = Term::csup(v("g"), Family::Indexed(v("f").abs() & Term::index_times(Term::One)));
        assert_eq!(t, expected);
    }

    #[test]
    fn unit_rejected_under_lg() {
        let err = parse_term("1", Signature::Lg).unwrap_err();
        assert!(matches!(err, ParseError::Term(TermError::Symbol { symbol: "1", .. })));
        assert!(parse_term("one", Signature::Lg).is_err());
    }

    #[test]
    fn precedence() {
        let t = parse_term("a + b /\\ c \\/ d", Signature::Lg).unwrap();
        assert_eq!(t, v("a") + ((v("b") & v("c")) | v("d")));
        let t = parse_term("-x /\\ y", Signature::Lg).unwrap();
        assert_eq!(t, (-v("x")) & v("y"));
        let t = parse_term("a - b - c", Signature::Lg).unwrap();
        assert_eq!(t, (v("a") - v("b")) - v("c"));
    }

    #[test]
    fn scalars() {
        let t = parse_term("-7/2*x + 3*-y", Signature::Rs).unwrap();
        assert_eq!(t, Term::scalar(frac(-7, 2), v("x")) + Term::scalar(frac(3, 1), -v("y")));
        assert!(parse_term("2*x", Signature::Lg).is_err());
        assert!(parse_term("2", Signature::Rs).is_err());
        assert!(parse_term("1/0*x", Signature::Rs).is_err());
    }

    #[test]
    fn index_factors() {
        let t = parse_term("csup[g](n : (2*n+1)*x /\\ (n+3)*y \\/ n*z)", Signature::Lg).unwrap();
        let body = (Term::nat(IndexExpr { alpha: 2, beta: 1 }, v("x"))
            & Term::nat(IndexExpr { alpha: 1, beta: 3 }, v("y")))
            | Term::index_times(v("z"));
        assert_eq!(t, Term::csup(v("g"), Family::Indexed(body)));
        // a parenthesized group that is not affine in n stays a term
        let t = parse_term("csup[g](n : (x + y) /\\ n*x)", Signature::Lg).unwrap();
        assert_eq!(t, Term::csup(v("g"), Family::Indexed((v("x") + v("y")) & Term::index_times(v("x")))));
    }

    #[test]
    fn index_outside_family_rejected() {
        assert!(matches!(parse_term("n*x", Signature::Lg), Err(ParseError::Term(TermError::IndexOutsideFamily))));
        assert!(parse_term("n", Signature::Lg).is_err());
    }

    #[test]
    fn families() {
        let t = parse_term("csup[g]([a, b] ~ c)", Signature::Lg).unwrap();
        assert_eq!(t, Term::csup(v("g"), Family::EventuallyConstant { prefix: vec![v("a"), v("b")], tail: v("c") }));
        let t = parse_term("csup[g]([] ~ c)", Signature::Lg).unwrap();
        assert_eq!(t, Term::csup(v("g"), Family::constant(v("c"))));
        let t = parse_term("csup[g](n, k : [abs(a)] ++ abs(n*b))", Signature::Lg).unwrap();
        assert_eq!(
            t,
            Term::csup(
                v("g"),
                Family::DoubleIndexed { head: vec![v("a").abs()], body: Term::index_times(v("b")).abs() }
            )
        );
    }

    #[test]
    fn statements() {
        match parse("x <= y", Signature::Lg).unwrap() {
            Statement::Equation(eq) => {
                assert_eq!(eq.lhs, v("x") & v("y"));
                assert_eq!(eq.rhs, v("x"));
            }
            other => panic!("{other:?}"),
        }
        match parse("a \\/ 0 = a; forall n : n*a <= b => a = 0", Signature::Lg).unwrap() {
            Statement::Quasi(q) => {
                assert_eq!(q.finite_premises, vec![(v("a") | Term::Zero, v("a"))]);
                let (l, r) = q.indexed_premise.unwrap();
                assert_eq!(l, Term::index_times(v("a")) & v("b"));
                assert_eq!(r, Term::index_times(v("a")));
                assert_eq!(q.conclusion, (v("a"), Term::Zero));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("=> x = x", Signature::Lg).unwrap(), Statement::Quasi(_)));
        assert!(matches!(parse("x", Signature::Lg).unwrap(), Statement::Term(_)));
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse("x /\\ ", Signature::Lg) {
            Err(ParseError::Syntax { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("{other:?}"),
        }
        match parse("x # y", Signature::Lg) {
            Err(ParseError::Syntax { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("{other:?}"),
        }
        assert!(parse("x = y = z", Signature::Lg).is_err());
        assert!(parse("forall n : n*a = 0; forall n : n*b = 0 => a = b", Signature::Lg).is_err());
    }

    #[test]
    fn printer_round_trips_fixtures() {
        for src in [
            "x /\\ y",
            "a - b - c",
            "a - (b - c)",
            "-(2*x) + -2*x",
            "--x \\/ -0",
            "abs(x - y) /\\ pos(x) \\/ neg(y)",
            "csup[abs(f)](n : abs(f) /\\ n*one)",
            "csup[g]([a, b /\\ c] ~ d + e)",
            "csup[g](n : (2*n+3)*x /\\ (0*n+2)*y - (n+1)*z)",
            "csup[abs(a - b)](n, k : [abs(x), abs(y)] ++ abs(n*a - b))",
            "1/2*(x + y) \\/ 3*-x",
        ] {
            let t = parse_term(src, Signature::Rsu).unwrap();
            let printed = t.to_string();
            let again = parse_term(&printed, Signature::Rsu).unwrap_or_else(|e| panic!("{printed}: {e}"));
            assert_eq!(t, again, "{src} -> {printed}");
        }
    }
}
