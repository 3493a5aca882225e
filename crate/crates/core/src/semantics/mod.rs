//! Exact evaluation of terms in ℝ at rational points.
//!
//! Finitary operations are evaluated pointwise. A countable supremum
//! `csup[g](f_n)` is computed exactly from its family form: a maximum for
//! eventually constant families, a piecewise-linear analysis in the index for
//! indexed families, and a positivity test for the double-indexed families
//! produced by the quasi-equation compiler.

pub mod pl;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::rational::{self, Q};
use crate::term::{Family, Term, TermError};

pub use pl::{exists_positive, sup_over_integers, sup_over_integers_attained, Affine, PLFunction1};

/// Assignment of rationals to variables.
pub type Valuation = BTreeMap<String, Q>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("variable `{0}` is unbound")]
    Unbound(String),
    #[error(transparent)]
    Malformed(#[from] TermError),
    #[error("double-indexed family member {n} is negative ({value})")]
    NegativeFamilyMember { n: BigInt, value: Q },
    #[error("bound of a double-indexed supremum is negative ({0})")]
    NegativeBound(Q),
    #[error("truncated supremum requested for a term that is not a csup")]
    NotCsup,
}

/// Valuation plus the real value of the constant `1` (which is `1` in ℝ and
/// the unit coordinate in a product model).
struct Evaluator<'a> {
    vars: &'a Valuation,
    unit: &'a Q,
}

impl Evaluator<'_> {
    /// Evaluates `t`; `index` is the family index when `t` is a family body.
    fn eval(&self, t: &Term, index: Option<u64>) -> Result<Q, EvalError> {
        Ok(match t {
            Term::Zero => rational::zero(),
            Term::One => self.unit.clone(),
            Term::Var(x) => self.vars.get(x).cloned().ok_or_else(|| EvalError::Unbound(x.clone()))?,
            Term::Neg(a) => -self.eval(a, index)?,
            Term::Add(a, b) => self.eval(a, index)? + self.eval(b, index)?,
            Term::Meet(a, b) => rational::min(&self.eval(a, index)?, &self.eval(b, index)?),
            Term::Join(a, b) => rational::max(&self.eval(a, index)?, &self.eval(b, index)?),
            Term::Scalar(q, a) => q * self.eval(a, index)?,
            Term::NatScale(e, a) => {
                let n = index.ok_or(TermError::IndexOutsideFamily)?;
                Q::from_integer(BigInt::from(e.at(n))) * self.eval(a, None)?
            }
            Term::CSup(bound, family) => {
                if index.is_some() {
                    return Err(TermError::NestedCsup.into());
                }
                self.csup(bound, family)?
            }
        })
    }

    fn csup(&self, bound: &Term, family: &Family) -> Result<Q, EvalError> {
        let cap = self.eval(bound, None)?;
        match family {
            Family::EventuallyConstant { prefix, tail } => {
                let mut best = rational::min(&self.eval(tail, None)?, &cap);
                for f in prefix {
                    best = rational::max(&best, &rational::min(&self.eval(f, None)?, &cap));
                }
                Ok(best)
            }
            Family::Indexed(body) => Ok(sup_over_integers(&self.pl(body)?, &cap)),
            Family::DoubleIndexed { head, body } => self.double_sup(head, body, cap),
        }
    }

    fn pl(&self, body: &Term) -> Result<PLFunction1, EvalError> {
        if body.is_index_free() {
            return Ok(PLFunction1::constant(self.eval(body, None)?));
        }
        Ok(match body {
            Term::Neg(a) => self.pl(a)?.neg(),
            Term::Add(a, b) => self.pl(a)?.add(&self.pl(b)?),
            Term::Meet(a, b) => self.pl(a)?.min(&self.pl(b)?),
            Term::Join(a, b) => self.pl(a)?.max(&self.pl(b)?),
            Term::Scalar(q, a) => self.pl(a)?.scale(q),
            Term::NatScale(e, a) => {
                if !a.is_index_free() {
                    return Err(TermError::IndexDependentOperand.into());
                }
                let c = self.eval(a, None)?;
                let alpha = Q::from_integer(BigInt::from(e.alpha));
                let beta = Q::from_integer(BigInt::from(e.beta));
                PLFunction1::affine(alpha * &c, beta * c)
            }
            Term::CSup(..) => return Err(TermError::NestedCsup.into()),
            Term::Zero | Term::One | Term::Var(_) => unreachable!("index-free"),
        })
    }

    fn double_sup(&self, head: &[Term], body: &Term, cap: Q) -> Result<Q, EvalError> {
        if cap.is_negative() {
            return Err(EvalError::NegativeBound(cap));
        }
        let mut positive = false;
        for (i, h) in head.iter().enumerate() {
            let value = self.eval(h, None)?;
            if value.is_negative() {
                return Err(EvalError::NegativeFamilyMember { n: BigInt::from(i + 1), value });
            }
            positive |= value.is_positive();
        }
        let p = self.pl(body)?;
        if let Some(n) = exists_positive(&p.neg()) {
            let value = p.at_int(&n);
            return Err(EvalError::NegativeFamilyMember { n: n + head.len(), value });
        }
        positive |= exists_positive(&p).is_some();
        // For c > 0, sup_k min(k·c, cap) = cap; for c = 0 every member is 0.
        Ok(if positive { cap } else { rational::zero() })
    }

    fn truncated(&self, t: &Term, n_max: u64) -> Result<Q, EvalError> {
        let Term::CSup(bound, family) = t else { return Err(EvalError::NotCsup) };
        let cap = self.eval(bound, None)?;
        let mut best: Option<Q> = None;
        let mut offer = |value: Q| {
            let value = rational::min(&value, &cap);
            if best.as_ref().is_none_or(|b| *b < value) {
                best = Some(value);
            }
        };
        for n in 1..=n_max.max(1) {
            match family.as_ref() {
                Family::EventuallyConstant { .. } => offer(self.eval(&family.member(n), None)?),
                Family::Indexed(body) => offer(self.eval(body, Some(n))?),
                Family::DoubleIndexed { head, body } => {
                    let d = match head.get((n - 1) as usize) {
                        Some(h) => self.eval(h, None)?,
                        None => self.eval(body, Some(n - head.len() as u64))?,
                    };
                    for k in 1..=n_max.max(1) {
                        offer(Q::from_integer(BigInt::from(k)) * &d);
                    }
                }
            }
        }
        Ok(best.expect("at least one member"))
    }
}

/// Evaluates `t` in ℝ at `v`.
pub fn eval(t: &Term, v: &Valuation) -> Result<Q, EvalError> {
    eval_with_unit(t, v, &rational::one())
}

/// Evaluates `t` in ℝ at `v`, interpreting the constant `1` as `unit`.
pub fn eval_with_unit(t: &Term, v: &Valuation, unit: &Q) -> Result<Q, EvalError> {
    Evaluator { vars: v, unit }.eval(t, None)
}

/// The function `ν ↦ body(ν)` at `v`, for real `ν >= 1`.
pub fn pl_of_index(body: &Term, v: &Valuation) -> Result<PLFunction1, EvalError> {
    pl_of_index_with_unit(body, v, &rational::one())
}

pub fn pl_of_index_with_unit(body: &Term, v: &Valuation, unit: &Q) -> Result<PLFunction1, EvalError> {
    Evaluator { vars: v, unit }.pl(body)
}

/// `sup_{n,k≥1} min(k·d_n, cap)` where `d_n` runs through `head` and then
/// `body(1), body(2), ...`. Requires the cap and every `d_n` to be
/// nonnegative; a violation is reported with the offending index.
pub fn double_sup(head: &[Term], body: &Term, cap_term: &Term, v: &Valuation) -> Result<Q, EvalError> {
    let unit = rational::one();
    let ev = Evaluator { vars: v, unit: &unit };
    let cap = ev.eval(cap_term, None)?;
    ev.double_sup(head, body, cap)
}

/// `max_{n ≤ n_max} (f_n ∧ g)` for `t = csup[g](f_n)`, evaluating members
/// one at a time without the piecewise-linear analysis. For double-indexed
/// families both indices range up to `n_max`.
pub fn truncated_sup(t: &Term, v: &Valuation, n_max: u64) -> Result<Q, EvalError> {
    truncated_sup_with_unit(t, v, &rational::one(), n_max)
}

pub fn truncated_sup_with_unit(t: &Term, v: &Valuation, unit: &Q, n_max: u64) -> Result<Q, EvalError> {
    Evaluator { vars: v, unit }.truncated(t, n_max)
}

/// An index `N` with `truncated_sup(t, v, N) = eval(t, v)`, for eventually
/// constant and indexed families.
pub fn stabilization_index(t: &Term, v: &Valuation) -> Result<Option<u64>, EvalError> {
    let Term::CSup(bound, family) = t else { return Err(EvalError::NotCsup) };
    let unit = rational::one();
    let ev = Evaluator { vars: v, unit: &unit };
    Ok(match family.as_ref() {
        Family::EventuallyConstant { prefix, .. } => Some(prefix.len() as u64 + 1),
        Family::Indexed(body) => {
            let cap = ev.eval(bound, None)?;
            let (_, n) = sup_over_integers_attained(&ev.pl(body)?, &cap);
            Some(rational::to_index(&n))
        }
        Family::DoubleIndexed { .. } => None,
    })
}

/// Builds a valuation from `(name, value)` pairs.
pub fn valuation<'a>(pairs: impl IntoIterator<Item = (&'a str, Q)>) -> Valuation {
    pairs.into_iter().map(|(k, q)| (k.to_string(), q)).collect()
}

/// `true` if `p(n) = 0` for every integer `n >= 1`.
pub fn vanishes_on_integers(p: &PLFunction1) -> bool {
    exists_positive(p).is_none() && exists_positive(&p.neg()).is_none()
}
