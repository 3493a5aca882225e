//! Consequences of the axioms, as named quasi-equations to be checked in ℝ
//! and in finite models.

use crate::term::{parse_quasi, Equation, Family, QuasiEquation, Signature, Term};

use super::quasi_of_equation;
use super::suite::sample_families;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedQuasi {
    pub name: String,
    pub quasi: QuasiEquation,
}

fn named(name: impl Into<String>, text: &str, sig: Signature) -> NamedQuasi {
    NamedQuasi { name: name.into(), quasi: parse_quasi(text, sig).expect("lemma text parses") }
}

/// If `a >= 0` and `n·a <= b` for every `n >= 1`, then `a = 0`.
pub fn archimedean() -> QuasiEquation {
    parse_quasi("a \\/ 0 = a; forall n : n*a <= b => a = 0", Signature::Lg).expect("parses")
}

/// If `g` is the supremum of `f_n = n·x ∧ y` (expressed as `g` being the
/// bounded supremum and an upper bound), then `a ∧ g` is the supremum of
/// `a ∧ f_n`.
pub fn distributivity() -> QuasiEquation {
    parse_quasi(
        "g = csup[g](n : n*x /\\ y); forall n : n*x /\\ y /\\ g = n*x /\\ y => a /\\ g = csup[a /\\ g](n : a /\\ (n*x /\\ y))",
        Signature::Lg,
    )
    .expect("parses")
}

/// Upper bound of the members: `f_k ∧ g <= csup[g](f)`.
fn members_below(out: &mut Vec<NamedQuasi>) {
    let g = Term::var("g");
    for (tag, fam) in sample_families().into_iter().take(2) {
        for k in 1..=5 {
            let eq = Equation::inequality(fam.member(k) & g.clone(), Term::csup(g.clone(), fam.clone()), Signature::Lg)
                .expect("well formed");
            out.push(NamedQuasi { name: format!("csup-above-members/{tag}/k={k}"), quasi: quasi_of_equation(&eq) });
        }
    }
}

/// `(n·a)⁻ = n·a⁻`
fn negative_part_of_multiples(out: &mut Vec<NamedQuasi>) {
    let a = Term::var("a");
    for n in 1..=20u128 {
        let eq = Equation::new(a.repeated_sum(n).neg_part(), a.clone().neg_part().repeated_sum(n), Signature::Lg)
            .expect("well formed");
        out.push(NamedQuasi { name: format!("negative-part-of-multiple/n={n}"), quasi: quasi_of_equation(&eq) });
    }
}

/// The derived laws: upper-bound and least-upper-bound properties of the
/// bounded supremum, bounded suprema being suprema, negative parts of
/// multiples, sums of disjoint elements, the unit being a positive weak unit
/// that approximates every positive element, and meets distributing over
/// finite suprema. Each comes with the signature it needs.
pub fn derived_lemmas() -> Vec<NamedQuasi> {
    let lg = Signature::Lg;
    let lgu = Signature::Lgu;
    let mut out = Vec::new();
    members_below(&mut out);
    out.push(named(
        "csup-least-upper-bound/indexed",
        "forall n : ((n*a /\\ b) \\/ (c - n*d)) /\\ g <= h => csup[g](n : (n*a /\\ b) \\/ (c - n*d)) <= h",
        lg,
    ));
    out.push(named(
        "csup-least-upper-bound/eventually-constant",
        "f1 /\\ g <= h; f2 /\\ g <= h; f3 /\\ g <= h => csup[g]([f1, f2] ~ f3) <= h",
        lg,
    ));
    out.push(named(
        "bounded-csup-is-sup",
        "f1 <= g; f2 <= g; f3 <= g => csup[g]([f1, f2] ~ f3) = f1 \\/ f2 \\/ f3",
        lg,
    ));
    out.push(named(
        "sup-characterization",
        "g = csup[g]([f1, f2] ~ f3); f1 /\\ g = f1; f2 /\\ g = f2; f3 /\\ g = f3 => g = f1 \\/ f2 \\/ f3",
        lg,
    ));
    negative_part_of_multiples(&mut out);
    out.push(named("disjoint-sum-stays-disjoint", "a /\\ c = 0; b /\\ c = 0 => (a + b) /\\ c = 0", lg));
    out.push(named("unit-is-positive", "0 <= one", lgu));
    out.push(named("unit-is-weak", "f /\\ one = 0 => f = 0", lgu));
    out.push(named("unit-approximates-positive", "f \\/ 0 = f => csup[f](n : f /\\ n*one) = f", lgu));
    out.push(named(
        "meet-distributes-over-finite-join",
        "a /\\ (x1 \\/ x2 \\/ x3) = a /\\ x1 \\/ a /\\ x2 \\/ a /\\ x3",
        lg,
    ));
    let fam = Family::EventuallyConstant { prefix: vec![Term::var("x1"), Term::var("x2")], tail: Term::var("x3") };
    let a = Term::var("a");
    let g = Term::var("g");
    let eq = Equation::new(
        a.clone() & Term::csup(g.clone(), fam.clone()),
        Term::csup(a.clone() & g, fam.map_terms(|t| a.clone() & t.clone())),
        lg,
    )
    .expect("well formed");
    out.push(NamedQuasi { name: "meet-distributes-over-csup".into(), quasi: quasi_of_equation(&eq) });
    out.push(NamedQuasi { name: "archimedean".into(), quasi: archimedean() });
    out.push(NamedQuasi { name: "sup-distributes-under-meet".into(), quasi: distributivity() });
    out
}
