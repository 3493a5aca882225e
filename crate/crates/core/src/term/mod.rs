//! Term language over the signatures of Dedekind σ-complete ℓ-groups and
//! Riesz spaces, with and without a designated weak unit.
//!
//! A term is built from `0`, `+`, `-`, `∧`, `∨`, optionally the constant `1`
//! and rational scalar multiples, and the countably-infinitary operation
//! `csup[g](f_n)` which denotes `sup_{n≥1} {f_n ∧ g}`. The countable family
//! `(f_n)` is one of the finitely describable [`Family`] forms. The family
//! index `n` is the only binder and may appear only as a natural multiple
//! `(α·n+β)·t` of an index-free term `t` inside an indexed family body.

mod parse;
mod print;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops;
use std::str::FromStr;

use crate::rational::Q;

pub use parse::{parse, parse_equation, parse_family_body, parse_quasi, parse_term, ParseError, Statement};

/// The four operation sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Signature {
    /// `0, +, -, ∨, ∧, csup`
    Lg,
    /// `Lg` plus the constant `1`
    Lgu,
    /// `Lg` plus rational scalar multiples
    Rs,
    /// `Rs` plus the constant `1`
    Rsu,
}

impl Signature {
    pub const ALL: [Signature; 4] = [Signature::Lg, Signature::Lgu, Signature::Rs, Signature::Rsu];

    pub fn has_unit(self) -> bool {
        matches!(self, Signature::Lgu | Signature::Rsu)
    }

    pub fn has_scalars(self) -> bool {
        matches!(self, Signature::Rs | Signature::Rsu)
    }

    pub fn name(self) -> &'static str {
        match self {
            Signature::Lg => "lg",
            Signature::Lgu => "lgu",
            Signature::Rs => "rs",
            Signature::Rsu => "rsu",
        }
    }

    /// Whether every operation of `self` is also an operation of `other`.
    pub fn is_subsignature_of(self, other: Signature) -> bool {
        (!self.has_unit() || other.has_unit()) && (!self.has_scalars() || other.has_scalars())
    }

    /// Checks that `t` is well formed and uses only operations of `self`.
    pub fn check(self, t: &Term) -> Result<(), TermError> {
        t.validate()?;
        self.check_symbols(t)
    }

    /// Like [`Signature::check`] for the body of an indexed family.
    pub fn check_family_body(self, body: &Term) -> Result<(), TermError> {
        body.validate_in(Context::IndexedBody)?;
        self.check_symbols(body)
    }

    fn check_symbols(self, t: &Term) -> Result<(), TermError> {
        let mut err = None;
        t.visit(&mut |s| {
            if err.is_some() {
                return;
            }
            match s {
                Term::One if !self.has_unit() => err = Some(TermError::Symbol { symbol: "1", signature: self }),
                Term::Scalar(..) if !self.has_scalars() => {
                    err = Some(TermError::Symbol { symbol: "scalar multiple", signature: self })
                }
                _ => {}
            }
        });
        err.map_or(Ok(()), Err)
    }

    /// The smallest signature containing every constructor used by `t`.
    pub fn minimal_for(t: &Term) -> Signature {
        let (mut unit, mut scalars) = (false, false);
        t.visit(&mut |s| match s {
            Term::One => unit = true,
            Term::Scalar(..) => scalars = true,
            _ => {}
        });
        match (unit, scalars) {
            (false, false) => Signature::Lg,
            (true, false) => Signature::Lgu,
            (false, true) => Signature::Rs,
            (true, true) => Signature::Rsu,
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown signature `{0}` (expected lg, lgu, rs or rsu)")]
pub struct UnknownSignature(pub String);

impl FromStr for Signature {
    type Err = UnknownSignature;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "lg" => Ok(Signature::Lg),
            "lgu" => Ok(Signature::Lgu),
            "rs" => Ok(Signature::Rs),
            "rsu" => Ok(Signature::Rsu),
            _ => Err(UnknownSignature(s.to_string())),
        }
    }
}

/// The affine index expression `alpha·n + beta` with natural coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexExpr {
    pub alpha: u64,
    pub beta: u64,
}

impl IndexExpr {
    /// The index itself, `n`.
    pub const INDEX: IndexExpr = IndexExpr { alpha: 1, beta: 0 };

    /// Returns `None` unless `alpha + beta >= 1`.
    pub fn new(alpha: u64, beta: u64) -> Option<IndexExpr> {
        (alpha > 0 || beta > 0).then_some(IndexExpr { alpha, beta })
    }

    /// Value at index `n`.
    pub fn at(self, n: u64) -> u128 {
        self.alpha as u128 * n as u128 + self.beta as u128
    }

    /// Substitutes `n := n + k`.
    pub fn shifted(self, k: u64) -> IndexExpr {
        IndexExpr { alpha: self.alpha, beta: self.beta + self.alpha * k }
    }
}

/// A term. `Abs`, `PosPart` and `NegPart` are not constructors: see
/// [`Term::abs`], [`Term::pos`] and [`Term::neg_part`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Zero,
    One,
    Var(String),
    Neg(Box<Term>),
    Add(Box<Term>, Box<Term>),
    Meet(Box<Term>, Box<Term>),
    Join(Box<Term>, Box<Term>),
    Scalar(Q, Box<Term>),
    /// `e(n)·t`; only valid inside an indexed family body, `t` index-free.
    NatScale(IndexExpr, Box<Term>),
    /// `csup[bound](family)`, denoting `sup_{n≥1} {f_n ∧ bound}`.
    CSup(Box<Term>, Box<Family>),
}

/// A countable family `(f_n)_{n≥1}` in one of the finitely describable forms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Family {
    /// `f_n = prefix[n-1]` for `n <= prefix.len()`, `tail` afterwards.
    EventuallyConstant { prefix: Vec<Term>, tail: Term },
    /// `f_n = body(n)`, piecewise linear in `n` at every valuation.
    Indexed(Term),
    /// The family over pairs `(n, k)` with member `k·d_n`, where
    /// `d_n = head[n-1]` for `n <= head.len()` and `d_n = body(n - head.len())`
    /// afterwards. Produced by the quasi-equation compiler.
    DoubleIndexed { head: Vec<Term>, body: Term },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TermError {
    #[error("`{symbol}` is not an operation of signature {signature}")]
    Symbol { symbol: &'static str, signature: Signature },
    #[error("the family index `n` occurs outside an indexed family body")]
    IndexOutsideFamily,
    #[error("the operand of an index multiple must be index-free")]
    IndexDependentOperand,
    #[error("csup nested inside an indexed family body")]
    NestedCsup,
    #[error("cannot substitute index-dependent term for `{0}`")]
    IndexDependentSubstitution(String),
    #[error("family shape not supported here: {0}")]
    UnsupportedFamily(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Context {
    Free,
    IndexedBody,
    NatOperand,
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn scalar(q: Q, t: Term) -> Term {
        Term::Scalar(q, Box::new(t))
    }

    pub fn nat(e: IndexExpr, t: Term) -> Term {
        Term::NatScale(e, Box::new(t))
    }

    /// `n·t`
    pub fn index_times(t: Term) -> Term {
        Term::nat(IndexExpr::INDEX, t)
    }

    pub fn csup(bound: Term, family: Family) -> Term {
        Term::CSup(Box::new(bound), Box::new(family))
    }

    /// `|t| = t ∨ -t`
    pub fn abs(self) -> Term {
        let neg = -self.clone();
        self | neg
    }

    /// `t⁺ = t ∨ 0`
    pub fn pos(self) -> Term {
        self | Term::Zero
    }

    /// `t⁻ = -t ∨ 0`
    pub fn neg_part(self) -> Term {
        (-self) | Term::Zero
    }

    /// `t + t + ... + t` (`k` summands, `0` when `k = 0`).
    pub fn repeated_sum(&self, k: u128) -> Term {
        match k {
            0 => Term::Zero,
            _ => (1..k).fold(self.clone(), |acc, _| acc + self.clone()),
        }
    }

    /// Pre-order traversal, not descending into family bodies' binders
    /// specially: every subterm is visited.
    pub fn visit(&self, f: &mut impl FnMut(&Term)) {
        f(self);
        match self {
            Term::Zero | Term::One | Term::Var(_) => {}
            Term::Neg(a) | Term::Scalar(_, a) | Term::NatScale(_, a) => a.visit(f),
            Term::Add(a, b) | Term::Meet(a, b) | Term::Join(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Term::CSup(bound, fam) => {
                bound.visit(f);
                fam.terms().for_each(|t| t.visit(f));
            }
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |t| {
            if let Term::Var(x) = t {
                out.insert(x.clone());
            }
        });
        out
    }

    /// No `NatScale` outside a csup family, i.e. the term does not depend on
    /// an enclosing family index.
    pub fn is_index_free(&self) -> bool {
        match self {
            Term::Zero | Term::One | Term::Var(_) | Term::CSup(..) => true,
            Term::NatScale(..) => false,
            Term::Neg(a) | Term::Scalar(_, a) => a.is_index_free(),
            Term::Add(a, b) | Term::Meet(a, b) | Term::Join(a, b) => a.is_index_free() && b.is_index_free(),
        }
    }

    pub fn contains_csup(&self) -> bool {
        let mut found = false;
        self.visit(&mut |t| found |= matches!(t, Term::CSup(..)));
        found
    }

    /// Structural well-formedness of a standalone (index-free) term.
    pub fn validate(&self) -> Result<(), TermError> {
        self.validate_in(Context::Free)
    }

    fn validate_in(&self, ctx: Context) -> Result<(), TermError> {
        match self {
            Term::Zero | Term::One | Term::Var(_) => Ok(()),
            Term::Neg(a) | Term::Scalar(_, a) => a.validate_in(ctx),
            Term::Add(a, b) | Term::Meet(a, b) | Term::Join(a, b) => {
                a.validate_in(ctx)?;
                b.validate_in(ctx)
            }
            Term::NatScale(_, a) => match ctx {
                Context::Free => Err(TermError::IndexOutsideFamily),
                Context::NatOperand => Err(TermError::IndexDependentOperand),
                Context::IndexedBody => a.validate_in(Context::NatOperand),
            },
            Term::CSup(bound, fam) => {
                if ctx != Context::Free {
                    return Err(TermError::NestedCsup);
                }
                bound.validate_in(Context::Free)?;
                fam.validate()
            }
        }
    }

    /// Capture-free substitution of free variables. Replacement terms must be
    /// index-free; the family index is the only binder.
    pub fn substitute(&self, env: &BTreeMap<String, Term>) -> Result<Term, TermError> {
        for (x, t) in env {
            if !t.is_index_free() {
                return Err(TermError::IndexDependentSubstitution(x.clone()));
            }
        }
        Ok(self.subst_unchecked(env))
    }

    fn subst_unchecked(&self, env: &BTreeMap<String, Term>) -> Term {
        let s = |t: &Term| Box::new(t.subst_unchecked(env));
        match self {
            Term::Zero => Term::Zero,
            Term::One => Term::One,
            Term::Var(x) => env.get(x).cloned().unwrap_or_else(|| self.clone()),
            Term::Neg(a) => Term::Neg(s(a)),
            Term::Add(a, b) => Term::Add(s(a), s(b)),
            Term::Meet(a, b) => Term::Meet(s(a), s(b)),
            Term::Join(a, b) => Term::Join(s(a), s(b)),
            Term::Scalar(q, a) => Term::Scalar(q.clone(), s(a)),
            Term::NatScale(e, a) => Term::NatScale(*e, s(a)),
            Term::CSup(bound, fam) => Term::CSup(s(bound), Box::new(fam.map_terms(|t| t.subst_unchecked(env)))),
        }
    }

    /// Replaces every index multiple `e(n)·t` by the `e(k)`-fold sum of `t`,
    /// producing the index-free member at index `k`.
    pub fn instantiate_index(&self, k: u64) -> Term {
        match self {
            Term::NatScale(e, t) => t.repeated_sum(e.at(k)),
            Term::Zero | Term::One | Term::Var(_) | Term::CSup(..) => self.clone(),
            Term::Neg(a) => Term::Neg(Box::new(a.instantiate_index(k))),
            Term::Scalar(q, a) => Term::Scalar(q.clone(), Box::new(a.instantiate_index(k))),
            Term::Add(a, b) => Term::Add(Box::new(a.instantiate_index(k)), Box::new(b.instantiate_index(k))),
            Term::Meet(a, b) => Term::Meet(Box::new(a.instantiate_index(k)), Box::new(b.instantiate_index(k))),
            Term::Join(a, b) => Term::Join(Box::new(a.instantiate_index(k)), Box::new(b.instantiate_index(k))),
        }
    }

    /// Substitutes `n := n + k` in every index expression.
    pub fn shift_index(&self, k: u64) -> Term {
        match self {
            Term::NatScale(e, t) => Term::NatScale(e.shifted(k), t.clone()),
            Term::Zero | Term::One | Term::Var(_) | Term::CSup(..) => self.clone(),
            Term::Neg(a) => Term::Neg(Box::new(a.shift_index(k))),
            Term::Scalar(q, a) => Term::Scalar(q.clone(), Box::new(a.shift_index(k))),
            Term::Add(a, b) => Term::Add(Box::new(a.shift_index(k)), Box::new(b.shift_index(k))),
            Term::Meet(a, b) => Term::Meet(Box::new(a.shift_index(k)), Box::new(b.shift_index(k))),
            Term::Join(a, b) => Term::Join(Box::new(a.shift_index(k)), Box::new(b.shift_index(k))),
        }
    }

    /// Number of constructor nodes.
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }
}

impl ops::Add for Term {
    type Output = Term;
    fn add(self, rhs: Term) -> Term {
        Term::Add(Box::new(self), Box::new(rhs))
    }
}

impl ops::Sub for Term {
    type Output = Term;
    fn sub(self, rhs: Term) -> Term {
        self + (-rhs)
    }
}

impl ops::Neg for Term {
    type Output = Term;
    fn neg(self) -> Term {
        Term::Neg(Box::new(self))
    }
}

/// `a & b` is the meet `a ∧ b`.
impl ops::BitAnd for Term {
    type Output = Term;
    fn bitand(self, rhs: Term) -> Term {
        Term::Meet(Box::new(self), Box::new(rhs))
    }
}

/// `a | b` is the join `a ∨ b`.
impl ops::BitOr for Term {
    type Output = Term;
    fn bitor(self, rhs: Term) -> Term {
        Term::Join(Box::new(self), Box::new(rhs))
    }
}

impl Family {
    /// The constant family `(t)_n`.
    pub fn constant(t: Term) -> Family {
        Family::EventuallyConstant { prefix: Vec::new(), tail: t }
    }

    /// All immediate terms of the family description.
    pub fn terms(&self) -> Box<dyn Iterator<Item = &Term> + '_> {
        match self {
            Family::EventuallyConstant { prefix, tail } => Box::new(prefix.iter().chain(std::iter::once(tail))),
            Family::Indexed(body) => Box::new(std::iter::once(body)),
            Family::DoubleIndexed { head, body } => Box::new(head.iter().chain(std::iter::once(body))),
        }
    }

    pub fn map_terms(&self, mut f: impl FnMut(&Term) -> Term) -> Family {
        match self {
            Family::EventuallyConstant { prefix, tail } => {
                Family::EventuallyConstant { prefix: prefix.iter().map(&mut f).collect(), tail: f(tail) }
            }
            Family::Indexed(body) => Family::Indexed(f(body)),
            Family::DoubleIndexed { head, body } => {
                Family::DoubleIndexed { head: head.iter().map(&mut f).collect(), body: f(body) }
            }
        }
    }

    fn validate(&self) -> Result<(), TermError> {
        match self {
            Family::EventuallyConstant { prefix, tail } => {
                prefix.iter().chain(std::iter::once(tail)).try_for_each(|t| t.validate_in(Context::Free))
            }
            Family::Indexed(body) => body.validate_in(Context::IndexedBody),
            Family::DoubleIndexed { head, body } => {
                head.iter().try_for_each(|t| t.validate_in(Context::Free))?;
                body.validate_in(Context::IndexedBody)
            }
        }
    }

    /// The family `(f_{n+k})_{n≥1}`.
    pub fn shift(&self, k: u64) -> Family {
        match self {
            Family::EventuallyConstant { prefix, tail } => {
                let drop = (k as usize).min(prefix.len());
                Family::EventuallyConstant { prefix: prefix[drop..].to_vec(), tail: tail.clone() }
            }
            Family::Indexed(body) => Family::Indexed(body.shift_index(k)),
            Family::DoubleIndexed { head, body } => {
                let drop = (k as usize).min(head.len());
                let rest = k - drop as u64;
                Family::DoubleIndexed { head: head[drop..].to_vec(), body: body.shift_index(rest) }
            }
        }
    }

    /// The index-free member `f_n` (`n >= 1`). For a double-indexed family
    /// this is `d_n`, the member at `(n, 1)`.
    pub fn member(&self, n: u64) -> Term {
        assert!(n >= 1, "families are indexed from 1");
        match self {
            Family::EventuallyConstant { prefix, tail } => prefix.get((n - 1) as usize).unwrap_or(tail).clone(),
            Family::Indexed(body) => body.instantiate_index(n),
            Family::DoubleIndexed { head, body } => match head.get((n - 1) as usize) {
                Some(t) => t.clone(),
                None => body.instantiate_index(n - head.len() as u64),
            },
        }
    }
}

/// A universally quantified identity. An inequality `a <= b` is stored as
/// `a ∧ b = a`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
    pub signature: Signature,
}

impl Equation {
    pub fn new(lhs: Term, rhs: Term, signature: Signature) -> Result<Equation, TermError> {
        signature.check(&lhs)?;
        signature.check(&rhs)?;
        Ok(Equation { lhs, rhs, signature })
    }

    /// `a <= b`, stored as `a ∧ b = a`.
    pub fn inequality(a: Term, b: Term, signature: Signature) -> Result<Equation, TermError> {
        Equation::new(a.clone() & b, a, signature)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut v = self.lhs.free_vars();
        v.extend(self.rhs.free_vars());
        v
    }
}

/// `a ≤ b` rewritten as the equation `a ∧ b = a`.
pub fn ineq_to_eq(a: Term, b: Term, signature: Signature) -> Result<Equation, TermError> {
    Equation::inequality(a, b, signature)
}

/// A quasi-equation with countably many premises: finitely many plain
/// premises plus at most one indexed family of premises `lhs(n) = rhs(n)`
/// for all `n >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuasiEquation {
    pub finite_premises: Vec<(Term, Term)>,
    pub indexed_premise: Option<(Term, Term)>,
    pub conclusion: (Term, Term),
    pub signature: Signature,
}

impl QuasiEquation {
    pub fn new(
        finite_premises: Vec<(Term, Term)>,
        indexed_premise: Option<(Term, Term)>,
        conclusion: (Term, Term),
        signature: Signature,
    ) -> Result<QuasiEquation, TermError> {
        for (a, b) in finite_premises.iter().chain(std::iter::once(&conclusion)) {
            signature.check(a)?;
            signature.check(b)?;
        }
        if let Some((a, b)) = &indexed_premise {
            signature.check_family_body(a)?;
            signature.check_family_body(b)?;
        }
        Ok(QuasiEquation { finite_premises, indexed_premise, conclusion, signature })
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let pairs =
            self.finite_premises.iter().chain(self.indexed_premise.iter()).chain(std::iter::once(&self.conclusion));
        for (a, b) in pairs {
            out.extend(a.free_vars());
            out.extend(b.free_vars());
        }
        out
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::term_to_string(self))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::family_to_string(self))
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

impl fmt::Display for QuasiEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut premises: Vec<String> = self.finite_premises.iter().map(|(a, b)| format!("{a} = {b}")).collect();
        if let Some((a, b)) = &self.indexed_premise {
            premises.push(format!("forall n : {a} = {b}"));
        }
        if premises.is_empty() {
            write!(f, "=> {} = {}", self.conclusion.0, self.conclusion.1)
        } else {
            write!(f, "{} => {} = {}", premises.join("; "), self.conclusion.0, self.conclusion.1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn x() -> Term {
        Term::var("x")
    }
    fn y() -> Term {
        Term::var("y")
    }

    #[test]
    fn shift_eventually_constant_drops_prefix() {
        let fam = Family::EventuallyConstant {
            prefix: vec![Term::var("a"), Term::var("b"), Term::var("c")],
            tail: Term::var("d"),
        };
        assert_eq!(fam.shift(2), Family::EventuallyConstant { prefix: vec![Term::var("c")], tail: Term::var("d") });
        // saturates into the tail
        assert_eq!(fam.shift(7), Family::constant(Term::var("d")));
    }

    #[test]
    fn shift_indexed_is_affine_substitution() {
        let fam = Family::Indexed(Term::index_times(x()));
        let shifted = fam.shift(1);
        assert_eq!(shifted, Family::Indexed(Term::nat(IndexExpr { alpha: 1, beta: 1 }, x())));
    }

    #[test]
    fn shift_constant_family_is_invariant() {
        let fam = Family::constant(x());
        assert_eq!(fam.shift(5), fam);
    }

    #[test]
    fn substitute_replaces_free_occurrences() {
        let t = x() & y();
        let env = BTreeMap::from([("x".to_string(), Term::Zero)]);
        assert_eq!(t.substitute(&env).unwrap(), Term::Zero & y());
    }

    #[test]
    fn substitute_into_csup_bound() {
        let g = Term::var("g");
        let t = Term::csup(g, Family::Indexed(Term::index_times(Term::var("a"))));
        let replacement = (Term::var("a") - Term::var("b")).abs();
        let env = BTreeMap::from([("g".to_string(), replacement.clone())]);
        let out = t.substitute(&env).unwrap();
        match out {
            Term::CSup(bound, _) => assert_eq!(*bound, replacement),
            _ => panic!("expected csup"),
        }
    }

    #[test]
    fn substitute_rejects_index_dependent_replacement() {
        let env = BTreeMap::from([("x".to_string(), Term::index_times(y()))]);
        assert_eq!(x().substitute(&env), Err(TermError::IndexDependentSubstitution("x".into())));
    }

    #[test]
    fn free_vars_of_a3_left_side() {
        let (f1, f2, g, h) = (Term::var("f1"), Term::var("f2"), Term::var("g"), Term::var("h"));
        let fam = Family::EventuallyConstant { prefix: vec![f1 & h.clone()], tail: f2 & h };
        let t = Term::csup(g, fam);
        let vars: Vec<_> = t.free_vars().into_iter().collect();
        assert_eq!(vars, ["f1", "f2", "g", "h"]);
    }

    #[test]
    fn signature_checks() {
        assert!(Signature::Lg.check(&Term::One).is_err());
        assert!(Signature::Lgu.check(&Term::One).is_ok());
        let s = Term::scalar(int(2), x());
        assert!(Signature::Lgu.check(&s).is_err());
        assert!(Signature::Rs.check(&s).is_ok());
        assert_eq!(Signature::minimal_for(&(s.clone() + Term::One)), Signature::Rsu);
    }

    #[test]
    fn natscale_only_in_family_bodies() {
        assert_eq!(Term::index_times(x()).validate(), Err(TermError::IndexOutsideFamily));
        let nested = Term::csup(y(), Family::Indexed(Term::index_times(Term::index_times(x()))));
        assert_eq!(nested.validate(), Err(TermError::IndexDependentOperand));
        let inner = Term::csup(y(), Family::Indexed(Term::index_times(x())));
        let outer = Term::csup(y(), Family::Indexed(Term::index_times(x()) & inner));
        assert_eq!(outer.validate(), Err(TermError::NestedCsup));
    }

    #[test]
    fn member_instantiates_index() {
        let fam = Family::Indexed(Term::nat(IndexExpr { alpha: 2, beta: 1 }, x()) & y());
        assert_eq!(fam.member(1), (x() + x() + x()) & y());
        let dbl = Family::DoubleIndexed { head: vec![y()], body: Term::index_times(x()) };
        assert_eq!(dbl.member(1), y());
        assert_eq!(dbl.member(3), x() + x());
    }

    #[test]
    fn inequality_is_meet_form() {
        let eq = ineq_to_eq(x(), y(), Signature::Lg).unwrap();
        assert_eq!(eq.lhs, x() & y());
        assert_eq!(eq.rhs, x());
    }
}
