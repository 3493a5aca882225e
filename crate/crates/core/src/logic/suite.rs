//! Axiom suites of the four varieties.

use crate::rational::{format, frac, int, Q};
use crate::term::{parse_equation, parse_family_body, parse_term, Equation, Family, Signature, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedEquation {
    pub name: String,
    pub equation: Equation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomSuite {
    pub variety: Signature,
    pub equations: Vec<NamedEquation>,
}

struct Builder {
    sig: Signature,
    out: Vec<NamedEquation>,
}

impl Builder {
    fn text(&mut self, name: &str, text: &str) {
        let equation = parse_equation(text, self.sig).expect("axiom text parses");
        self.out.push(NamedEquation { name: name.to_string(), equation });
    }

    fn eq(&mut self, name: String, lhs: Term, rhs: Term) {
        let equation = Equation::new(lhs, rhs, self.sig).expect("axiom is well formed");
        self.out.push(NamedEquation { name, equation });
    }

    fn le(&mut self, name: String, a: Term, b: Term) {
        let equation = Equation::inequality(a, b, self.sig).expect("axiom is well formed");
        self.out.push(NamedEquation { name, equation });
    }
}

/// Families at which the countable-supremum axioms are instantiated.
pub(super) fn sample_families() -> Vec<(&'static str, Family)> {
    let body = |text| Family::Indexed(parse_family_body(text, Signature::Lg).expect("family body parses"));
    let ec = parse_term("csup[g]([f1, f2, f3] ~ f4)", Signature::Lg).expect("parses");
    let Term::CSup(_, ec) = ec else { unreachable!() };
    vec![
        ("eventually-constant", *ec),
        ("indexed-1", body("(n*a /\\ b) \\/ (c - n*d)")),
        ("indexed-2", body("(2*n+1)*a /\\ (b + n*c)")),
    ]
}

fn group_and_lattice(b: &mut Builder) {
    b.text("add-associative", "(a + b) + c = a + (b + c)");
    b.text("add-commutative", "a + b = b + a");
    b.text("add-zero", "a + 0 = a");
    b.text("add-inverse", "a + -a = 0");
    b.text("meet-commutative", "a /\\ b = b /\\ a");
    b.text("join-commutative", "a \\/ b = b \\/ a");
    b.text("meet-associative", "(a /\\ b) /\\ c = a /\\ (b /\\ c)");
    b.text("join-associative", "(a \\/ b) \\/ c = a \\/ (b \\/ c)");
    b.text("meet-absorbs-join", "a /\\ (a \\/ b) = a");
    b.text("join-absorbs-meet", "a \\/ (a /\\ b) = a");
    b.text("meet-idempotent", "a /\\ a = a");
    b.text("join-idempotent", "a \\/ a = a");
    b.text("translation", "a + (b /\\ c) = (a + b) /\\ (a + c)");
}

fn countable_sup(b: &mut Builder) {
    let g = Term::var("g");
    let h = Term::var("h");
    for (tag, fam) in sample_families() {
        let capped = fam.map_terms(|t| t.clone() & g.clone());
        b.eq(format!("csup-bound-absorbed/{tag}"), Term::csup(g.clone(), fam.clone()), Term::csup(g.clone(), capped));
        let first = fam.member(1) & g.clone();
        b.eq(
            format!("csup-peels-first-member/{tag}"),
            Term::csup(g.clone(), fam.clone()),
            first | Term::csup(g.clone(), fam.shift(1)),
        );
        let below_h = fam.map_terms(|t| t.clone() & h.clone());
        b.le(format!("csup-below-common-bound/{tag}"), Term::csup(g.clone(), below_h), h.clone());
    }
}

fn weak_unit(b: &mut Builder) {
    b.text("weak-unit", "csup[abs(f)](n : abs(f) /\\ n*one) = abs(f)");
}

fn scalars(b: &mut Builder) {
    let (a, c) = (Term::var("a"), Term::var("b"));
    let s = |q: &Q, t: Term| Term::scalar(q.clone(), t);
    for q in [frac(1, 2), int(-3), frac(7, 4)] {
        b.eq(
            format!("scalar-distributes-over-sum[q={}]", format(&q)),
            s(&q, a.clone() + c.clone()),
            s(&q, a.clone()) + s(&q, c.clone()),
        );
    }
    for (p, q) in [(frac(1, 2), int(3)), (int(-2), frac(5, 3)), (frac(-3, 4), frac(-1, 2))] {
        let tag = format!("[p={},q={}]", format(&p), format(&q));
        b.eq(format!("scalar-sum-distributes{tag}"), s(&(&p + &q), a.clone()), s(&p, a.clone()) + s(&q, a.clone()));
        b.eq(format!("scalar-product-associates{tag}"), s(&(&p * &q), a.clone()), s(&p, s(&q, a.clone())));
    }
    b.text("scalar-one", "1*a = a");
    for q in [frac(1, 2), int(3), frac(7, 4)] {
        b.eq(
            format!("positive-scalar-preserves-join[q={}]", format(&q)),
            s(&q, a.clone() | c.clone()),
            s(&q, a.clone()) | s(&q, c.clone()),
        );
    }
}

/// The named axioms of `variety`: the abelian ℓ-group axioms, the three
/// countable-supremum axioms at sample families, and the weak-unit and
/// rational-scalar axioms where the signature has them.
pub fn axiom_suite(variety: Signature) -> AxiomSuite {
    let mut b = Builder { sig: variety, out: Vec::new() };
    group_and_lattice(&mut b);
    countable_sup(&mut b);
    if variety.has_scalars() {
        scalars(&mut b);
    }
    if variety.has_unit() {
        weak_unit(&mut b);
    }
    AxiomSuite { variety, equations: b.out }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(sig: Signature) -> Vec<String> {
        axiom_suite(sig).equations.into_iter().map(|e| e.name).collect()
    }

    #[test]
    fn suites_nest() {
        let lg = names(Signature::Lg);
        let lgu = names(Signature::Lgu);
        let rs = names(Signature::Rs);
        let rsu = names(Signature::Rsu);
        assert_eq!(lgu.len(), lg.len() + 1);
        assert_eq!(&lgu[..lg.len()], &lg[..]);
        assert!(lg.iter().all(|n| rs.contains(n)));
        assert!(rs.iter().all(|n| rsu.contains(n)));
        assert_eq!(rsu.len(), rs.len() + 1);
    }

    #[test]
    fn common_bound_axiom_in_meet_form() {
        let suite = axiom_suite(Signature::Lg);
        let eq =
            &suite.equations.iter().find(|e| e.name == "csup-below-common-bound/eventually-constant").unwrap().equation;
        assert_eq!(eq.to_string(), "csup[g]([f1 /\\ h, f2 /\\ h, f3 /\\ h] ~ f4 /\\ h) /\\ h = csup[g]([f1 /\\ h, f2 /\\ h, f3 /\\ h] ~ f4 /\\ h)");
    }

    #[test]
    fn peel_uses_shift() {
        let suite = axiom_suite(Signature::Lg);
        let eq = &suite.equations.iter().find(|e| e.name == "csup-peels-first-member/indexed-2").unwrap().equation;
        assert_eq!(eq.rhs.to_string(), "(a + a + a) /\\ (b + c) /\\ g \\/ csup[g](n : (2*n+3)*a /\\ (b + (n+1)*c))");
    }
}
