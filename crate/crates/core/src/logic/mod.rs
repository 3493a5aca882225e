//! Equation and quasi-equation checking over ℝ and finite models, and the
//! compiler from quasi-equations with countably many premises to equations.
//!
//! Checking samples valuations and compares exact values, so a counterexample
//! refutes an equation while its absence is only evidence. Validity in ℝ is
//! what matters: the varieties are generated by ℝ.

mod lemmas;
mod suite;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::models::{self, ModelElement, ModelError, QuotientModel};
use crate::rational::{self, Q};
use crate::sample::Sampler;
use crate::semantics::{self, EvalError, Valuation};
use crate::term::{Equation, Family, QuasiEquation, Signature, Term, TermError};

pub use lemmas::{archimedean, derived_lemmas, distributivity, NamedQuasi};
pub use suite::{axiom_suite, AxiomSuite, NamedEquation};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LogicError {
    #[error("evaluation failed at {valuation}: {source}")]
    Eval { valuation: String, source: EvalError },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Term(#[from] TermError),
}

/// Trials and seed of a randomized check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckConfig {
    pub trials: u64,
    pub seed: u64,
}

impl CheckConfig {
    pub fn new(trials: u64, seed: u64) -> CheckConfig {
        CheckConfig { trials, seed }
    }
}

/// Outcome of checking an identity. `E` is the element type of the algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<E = Q> {
    NoCounterexampleFound {
        trials: u64,
        seed: u64,
    },
    Counterexample {
        trial: u64,
        valuation: BTreeMap<String, E>,
        lhs: E,
        rhs: E,
    },
    /// Decided without sampling, e.g. an identity without variables.
    ExactlyVerified {
        note: String,
    },
}

impl<E> Verdict<E> {
    pub fn is_counterexample(&self) -> bool {
        matches!(self, Verdict::Counterexample { .. })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Verdict::NoCounterexampleFound { .. } => "no-counterexample-found",
            Verdict::Counterexample { .. } => "counterexample",
            Verdict::ExactlyVerified { .. } => "exactly-verified",
        }
    }
}

/// An algebra in which identities can be checked by sampling.
pub trait Algebra {
    type Element: Clone + PartialEq + fmt::Debug;

    fn evaluate(&self, t: &Term, v: &BTreeMap<String, Self::Element>) -> Result<Self::Element, LogicError>;

    /// The valuation used at `trial`; depends only on `(vars, seed, trial)`.
    fn valuation(&self, vars: &BTreeSet<String>, seed: u64, trial: u64) -> BTreeMap<String, Self::Element>;

    /// An index `n` with `lhs(n) ≠ rhs(n)`, or `None` if the family of
    /// premises holds for every `n >= 1`.
    fn indexed_failure(
        &self,
        lhs: &Term,
        rhs: &Term,
        v: &BTreeMap<String, Self::Element>,
    ) -> Result<Option<u64>, LogicError>;

    fn render(&self, e: &Self::Element) -> String;

    /// Whether valuations carry no information, so one evaluation decides.
    fn is_trivial(&self) -> bool {
        false
    }
}

/// ℝ with rational points.
#[derive(Debug, Clone, Copy, Default)]
pub struct Reals;

pub fn format_valuation(v: &Valuation) -> String {
    let parts: Vec<String> = v.iter().map(|(x, q)| format!("{x} = {}", rational::format(q))).collect();
    format!("{{{}}}", parts.join(", "))
}

fn indexed_difference(lhs: &Term, rhs: &Term) -> Term {
    (lhs.clone() - rhs.clone()).abs()
}

impl Algebra for Reals {
    type Element = Q;

    fn evaluate(&self, t: &Term, v: &Valuation) -> Result<Q, LogicError> {
        semantics::eval(t, v).map_err(|source| LogicError::Eval { valuation: format_valuation(v), source })
    }

    fn valuation(&self, vars: &BTreeSet<String>, seed: u64, trial: u64) -> Valuation {
        Sampler::new(seed, trial).valuation(vars, trial)
    }

    fn indexed_failure(&self, lhs: &Term, rhs: &Term, v: &Valuation) -> Result<Option<u64>, LogicError> {
        let p = semantics::pl_of_index(&indexed_difference(lhs, rhs), v)
            .map_err(|source| LogicError::Eval { valuation: format_valuation(v), source })?;
        Ok(semantics::exists_positive(&p).map(|n| rational::to_index(&n)))
    }

    fn render(&self, e: &Q) -> String {
        rational::format(e)
    }
}

impl Algebra for QuotientModel {
    type Element = ModelElement;

    fn evaluate(&self, t: &Term, v: &BTreeMap<String, ModelElement>) -> Result<ModelElement, LogicError> {
        Ok(models::eval_in_model(t, v, self)?)
    }

    fn valuation(&self, vars: &BTreeSet<String>, seed: u64, trial: u64) -> BTreeMap<String, ModelElement> {
        let mut s = Sampler::new(seed, trial);
        let mut out: BTreeMap<String, ModelElement> =
            vars.iter().map(|x| (x.clone(), ModelElement(Vec::with_capacity(self.dim())))).collect();
        for j in 0..self.dim() {
            // Boundary trials apply to the first coordinate only.
            let point = s.valuation(vars, if j == 0 { trial } else { trial.max(5) });
            for (x, q) in point {
                out.get_mut(&x).expect("same variables").0.push(q);
            }
        }
        out
    }

    fn indexed_failure(
        &self,
        lhs: &Term,
        rhs: &Term,
        v: &BTreeMap<String, ModelElement>,
    ) -> Result<Option<u64>, LogicError> {
        let diff = indexed_difference(lhs, rhs);
        let mut first: Option<u64> = None;
        for j in 0..self.dim() {
            let point: Valuation = v.iter().map(|(x, e)| (x.clone(), e.0[j].clone())).collect();
            let p = semantics::pl_of_index_with_unit(&diff, &point, &self.unit().0[j])
                .map_err(|source| LogicError::Eval { valuation: format_valuation(&point), source })?;
            if let Some(n) = semantics::exists_positive(&p) {
                let n = rational::to_index(&n);
                first = Some(first.map_or(n, |m| m.min(n)));
            }
        }
        Ok(first)
    }

    fn render(&self, e: &ModelElement) -> String {
        e.format()
    }

    fn is_trivial(&self) -> bool {
        self.dim() == 0
    }
}

/// Checks `lhs = rhs` in `alg`; the first counterexample by trial index wins.
pub fn check_in<A: Algebra>(
    alg: &A,
    lhs: &Term,
    rhs: &Term,
    config: CheckConfig,
) -> Result<Verdict<A::Element>, LogicError> {
    let mut vars = lhs.free_vars();
    vars.extend(rhs.free_vars());
    if vars.is_empty() || alg.is_trivial() {
        let v = alg.valuation(&vars, config.seed, 0);
        let (l, r) = (alg.evaluate(lhs, &v)?, alg.evaluate(rhs, &v)?);
        return Ok(if l == r {
            let note =
                if vars.is_empty() { "no variables: both sides evaluated exactly" } else { "one-element algebra" };
            Verdict::ExactlyVerified { note: note.to_string() }
        } else {
            Verdict::Counterexample { trial: 0, valuation: v, lhs: l, rhs: r }
        });
    }
    for trial in 0..config.trials {
        let v = alg.valuation(&vars, config.seed, trial);
        let (l, r) = (alg.evaluate(lhs, &v)?, alg.evaluate(rhs, &v)?);
        if l != r {
            return Ok(Verdict::Counterexample { trial, valuation: v, lhs: l, rhs: r });
        }
    }
    Ok(Verdict::NoCounterexampleFound { trials: config.trials, seed: config.seed })
}

/// Checks an equation in ℝ.
pub fn check_equation(eq: &Equation, config: CheckConfig) -> Result<Verdict, LogicError> {
    check_in(&Reals, &eq.lhs, &eq.rhs, config)
}

/// Checks an equation in a finite model.
pub fn check_equation_in_model(
    eq: &Equation,
    model: &QuotientModel,
    config: CheckConfig,
) -> Result<Verdict<ModelElement>, LogicError> {
    check_in(model, &eq.lhs, &eq.rhs, config)
}

/// Outcome of checking a quasi-equation directly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiOutcome<E = Q> {
    pub verdict: Verdict<E>,
    /// Number of sampled valuations at which every premise held.
    pub premises_held: u64,
}

/// Whether every premise of `qe` holds at `v`.
pub fn premises_hold<A: Algebra>(
    alg: &A,
    qe: &QuasiEquation,
    v: &BTreeMap<String, A::Element>,
) -> Result<bool, LogicError> {
    for (a, b) in &qe.finite_premises {
        if alg.evaluate(a, v)? != alg.evaluate(b, v)? {
            return Ok(false);
        }
    }
    match &qe.indexed_premise {
        Some((a, b)) => Ok(alg.indexed_failure(a, b, v)?.is_none()),
        None => Ok(true),
    }
}

/// Samples valuations and checks the conclusion wherever all premises hold.
pub fn check_quasi_in<A: Algebra>(
    alg: &A,
    qe: &QuasiEquation,
    config: CheckConfig,
) -> Result<QuasiOutcome<A::Element>, LogicError> {
    let vars = qe.free_vars();
    let (tau, rho) = &qe.conclusion;
    let exact = vars.is_empty() || alg.is_trivial();
    let trials = if exact { 1 } else { config.trials };
    let mut held = 0;
    for trial in 0..trials {
        let v = alg.valuation(&vars, config.seed, trial);
        if !premises_hold(alg, qe, &v)? {
            continue;
        }
        held += 1;
        let (l, r) = (alg.evaluate(tau, &v)?, alg.evaluate(rho, &v)?);
        if l != r {
            return Ok(QuasiOutcome {
                verdict: Verdict::Counterexample { trial, valuation: v, lhs: l, rhs: r },
                premises_held: held,
            });
        }
    }
    let verdict = if exact {
        Verdict::ExactlyVerified { note: "single valuation decides".to_string() }
    } else {
        Verdict::NoCounterexampleFound { trials, seed: config.seed }
    };
    Ok(QuasiOutcome { verdict, premises_held: held })
}

/// Checks a quasi-equation in ℝ by sampling, without compiling it.
pub fn check_quasi_direct(qe: &QuasiEquation, config: CheckConfig) -> Result<QuasiOutcome, LogicError> {
    check_quasi_in(&Reals, qe, config)
}

/// Compiles `[τ_1 = ρ_1, τ_2 = ρ_2, ...] ⇒ τ = ρ` into the equation
/// `csup[|τ-ρ|](n, k : k·|τ_n - ρ_n|) = |τ-ρ|`, which holds in ℝ exactly
/// when the quasi-equation does. The finite premises come first in the
/// enumeration, followed by the indexed family.
pub fn compile_quasi(qe: &QuasiEquation) -> Result<Equation, LogicError> {
    let (tau, rho) = &qe.conclusion;
    let bound = indexed_difference(tau, rho);
    let head = qe.finite_premises.iter().map(|(a, b)| indexed_difference(a, b)).collect();
    let body = match &qe.indexed_premise {
        Some((a, b)) => indexed_difference(a, b),
        None => Term::Zero,
    };
    let lhs = Term::csup(bound.clone(), Family::DoubleIndexed { head, body });
    Ok(Equation::new(lhs, bound, qe.signature)?)
}

/// `eq` as a quasi-equation without premises.
pub fn quasi_of_equation(eq: &Equation) -> QuasiEquation {
    QuasiEquation {
        finite_premises: Vec::new(),
        indexed_premise: None,
        conclusion: (eq.lhs.clone(), eq.rhs.clone()),
        signature: eq.signature,
    }
}

/// Re-evaluates both sides of an equation at a valuation.
pub fn replay(eq: &Equation, v: &Valuation) -> Result<(Q, Q), LogicError> {
    Ok((Reals.evaluate(&eq.lhs, v)?, Reals.evaluate(&eq.rhs, v)?))
}

/// Random quasi-equation with an indexed family of premises. Premises are
/// inequalities between small terms, so they hold at a fair share of
/// sampled valuations.
pub fn random_quasi(s: &mut Sampler, vars: &[String], sig: Signature) -> QuasiEquation {
    let finite = (0..s.below(3))
        .map(|_| {
            let a = s.term(vars, 1, sig);
            let b = s.term(vars, 1, sig);
            if s.chance(0.5) {
                (a.clone() & b, a)
            } else {
                (a.clone() | Term::Zero, a)
            }
        })
        .collect();
    let body = s.family_body(vars, 1, sig);
    let other = if s.chance(0.5) { s.term(vars, 1, sig) } else { s.family_body(vars, 1, sig) };
    let indexed = Some((body.clone() & other, body));
    let conclusion = if s.chance(0.5) {
        let a = s.term(vars, 1, sig);
        (a, Term::Zero)
    } else {
        (s.term(vars, 2, sig), s.term(vars, 2, sig))
    };
    QuasiEquation::new(finite, indexed, conclusion, sig).expect("generated terms are well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{FiniteIndexSet, IdealOfSubsets};
    use crate::rational::int;
    use crate::term::{parse_equation, parse_quasi};

    fn cfg(trials: u64) -> CheckConfig {
        CheckConfig::new(trials, 42)
    }

    #[test]
    fn bogus_constant_family_sup() {
        let eq = parse_equation("csup[g]([] ~ 0) = g", Signature::Lg).unwrap();
        let verdict = check_equation(&eq, cfg(100)).unwrap();
        let Verdict::Counterexample { valuation, lhs, rhs, .. } = verdict else { panic!("expected counterexample") };
        assert_ne!(lhs, rhs);
        assert_eq!(replay(&eq, &valuation).unwrap(), (lhs, rhs));
        assert!(check_equation(&eq, cfg(100)).unwrap().is_counterexample());
        let v = semantics::valuation([("g", int(1))]);
        assert_eq!(replay(&eq, &v).unwrap(), (int(0), int(1)));
    }

    #[test]
    fn inequality_through_meet() {
        let eq = parse_equation("a <= a", Signature::Lg).unwrap();
        assert!(!check_equation(&eq, cfg(50)).unwrap().is_counterexample());
        let eq = parse_equation("one <= 0", Signature::Lgu).unwrap();
        assert_eq!(
            check_equation(&eq, cfg(50)).unwrap(),
            Verdict::Counterexample { trial: 0, valuation: Valuation::new(), lhs: int(0), rhs: int(1) }
        );
    }

    #[test]
    fn false_equation_refuted() {
        let eq = parse_equation("x = 0", Signature::Lg).unwrap();
        let Verdict::Counterexample { valuation, .. } = check_equation(&eq, cfg(100)).unwrap() else { panic!() };
        assert_ne!(valuation["x"], int(0));
    }

    #[test]
    fn compiled_forms() {
        let qe = parse_quasi("0 = 0 => x = 0", Signature::Lg).unwrap();
        let eq = compile_quasi(&qe).unwrap();
        assert_eq!(eq.to_string(), "csup[abs(x - 0)](n, k : [abs(0 - 0)] ++ 0) = abs(x - 0)");
        let v = semantics::valuation([("x", int(1))]);
        assert_eq!(replay(&eq, &v).unwrap(), (int(0), int(1)));
        assert!(check_equation(&eq, cfg(100)).unwrap().is_counterexample());
        assert!(check_quasi_direct(&qe, cfg(100)).unwrap().verdict.is_counterexample());

        let qe = parse_quasi("a = b => a = b", Signature::Lg).unwrap();
        let eq = compile_quasi(&qe).unwrap();
        assert!(!check_equation(&eq, cfg(500)).unwrap().is_counterexample());
    }

    #[test]
    fn archimedean_samples() {
        let qe = archimedean();
        let zero = semantics::valuation([("a", int(0)), ("b", int(3))]);
        assert!(premises_hold(&Reals, &qe, &zero).unwrap());
        let v = semantics::valuation([("a", int(1)), ("b", int(5))]);
        let (l, r) = qe.indexed_premise.as_ref().unwrap();
        assert_eq!(Reals.indexed_failure(l, r, &v).unwrap(), Some(6));
        assert!(!premises_hold(&Reals, &qe, &v).unwrap());
    }

    #[test]
    fn verdicts_are_reproducible() {
        let eq = parse_equation("x /\\ y = y", Signature::Lg).unwrap();
        assert_eq!(check_equation(&eq, cfg(100)).unwrap(), check_equation(&eq, cfg(100)).unwrap());
    }

    #[test]
    fn one_point_zero_model() {
        let x = FiniteIndexSet::range(2);
        let model = QuotientModel::new(&x, &IdealOfSubsets::principal(&x, x.full()), true);
        let suite = axiom_suite(Signature::Lg);
        let eq =
            &suite.equations.iter().find(|e| e.name == "csup-bound-absorbed/eventually-constant").unwrap().equation;
        assert!(matches!(check_equation_in_model(eq, &model, cfg(10)).unwrap(), Verdict::ExactlyVerified { .. }));
    }

    /// ℝ with a wrong meet table (`∧` computed as `∨`).
    struct BrokenMeet;

    impl Algebra for BrokenMeet {
        type Element = Q;

        fn evaluate(&self, t: &Term, v: &Valuation) -> Result<Q, LogicError> {
            Reals.evaluate(&swap_meets(t), v)
        }

        fn valuation(&self, vars: &BTreeSet<String>, seed: u64, trial: u64) -> Valuation {
            Reals.valuation(vars, seed, trial)
        }

        fn indexed_failure(&self, lhs: &Term, rhs: &Term, v: &Valuation) -> Result<Option<u64>, LogicError> {
            Reals.indexed_failure(&swap_meets(lhs), &swap_meets(rhs), v)
        }

        fn render(&self, e: &Q) -> String {
            rational::format(e)
        }
    }

    fn swap_meets(t: &Term) -> Term {
        match t {
            Term::Meet(a, b) => swap_meets(a) | swap_meets(b),
            Term::Join(a, b) => Term::Join(Box::new(swap_meets(a)), Box::new(swap_meets(b))),
            Term::Add(a, b) => swap_meets(a) + swap_meets(b),
            Term::Neg(a) => -swap_meets(a),
            Term::Scalar(q, a) => Term::scalar(q.clone(), swap_meets(a)),
            Term::NatScale(e, a) => Term::nat(*e, swap_meets(a)),
            Term::CSup(g, f) => Term::csup(swap_meets(g), f.map_terms(swap_meets)),
            leaf => leaf.clone(),
        }
    }

    #[test]
    fn broken_operation_table_is_caught() {
        let suite = axiom_suite(Signature::Lg);
        let absorption = &suite.equations.iter().find(|e| e.name == "meet-absorbs-join").unwrap().equation;
        assert!(check_in(&BrokenMeet, &absorption.lhs, &absorption.rhs, cfg(200)).unwrap().is_counterexample());
        assert!(!check_equation(absorption, cfg(200)).unwrap().is_counterexample());
    }
}
