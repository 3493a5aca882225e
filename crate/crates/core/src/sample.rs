//! Seeded random valuations, elements and terms.
//!
//! Every trial draws from its own stream of a ChaCha generator keyed by the
//! run seed, so results depend only on `(seed, trial)` and never on the order
//! in which trials are run.

use std::collections::BTreeSet;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::rational::{frac, int, Q};
use crate::semantics::Valuation;
use crate::term::{Family, IndexExpr, Signature, Term};

/// Values at which lattice operations tie or change branch.
pub fn boundary_values() -> [Q; 5] {
    [int(0), int(1), int(-1), frac(1, 2), frac(-1, 2)]
}

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64, stream: u64) -> Sampler {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Sampler { rng }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.random_bool(p)
    }

    /// Numerator in `[-12, 12]`, denominator in `{1, 2, 3, 4}`.
    pub fn small_rational(&mut self) -> Q {
        frac(self.rng.random_range(-12..=12), self.rng.random_range(1..=4))
    }

    /// Mixture of small rationals, integers, zeros and boundary values.
    pub fn rational(&mut self) -> Q {
        match self.rng.random_range(0..10) {
            0..=3 => self.small_rational(),
            4 | 5 => int(self.rng.random_range(-12..=12)),
            6 => int(0),
            _ => boundary_values().choose(&mut self.rng).expect("nonempty").clone(),
        }
    }

    /// Nonnegative small rational.
    pub fn nonneg_rational(&mut self) -> Q {
        let q = self.rational();
        if q < int(0) {
            -q
        } else {
            q
        }
    }

    /// A valuation of `vars` for trial number `trial`. The first five trials
    /// set every variable to the same boundary value; later trials mix
    /// independent draws with forced equalities between pairs of variables.
    pub fn valuation(&mut self, vars: &BTreeSet<String>, trial: u64) -> Valuation {
        let boundary = boundary_values();
        if let Some(b) = boundary.get(trial as usize) {
            return vars.iter().map(|x| (x.clone(), b.clone())).collect();
        }
        let mut v: Valuation = vars.iter().map(|x| (x.clone(), self.rational())).collect();
        if vars.len() >= 2 && self.chance(0.25) {
            let names: Vec<&String> = vars.iter().collect();
            let i = self.below(names.len());
            let j = self.below(names.len());
            let value = v[names[i]].clone();
            v.insert(names[j].clone(), value);
        }
        v
    }

    /// Random index-free finitary term (no csup) over `vars`.
    pub fn term(&mut self, vars: &[String], depth: u32, sig: Signature) -> Term {
        if depth == 0 || self.chance(0.25) {
            return self.leaf(vars, sig);
        }
        let arity_one = if sig.has_scalars() { 3 } else { 2 };
        match self.below(3 + arity_one) {
            0 => self.term(vars, depth - 1, sig) + self.term(vars, depth - 1, sig),
            1 => self.term(vars, depth - 1, sig) & self.term(vars, depth - 1, sig),
            2 => self.term(vars, depth - 1, sig) | self.term(vars, depth - 1, sig),
            3 => -self.term(vars, depth - 1, sig),
            4 => self.term(vars, depth - 1, sig).abs(),
            _ => {
                let q = self.small_rational();
                Term::scalar(q, self.term(vars, depth - 1, sig))
            }
        }
    }

    fn leaf(&mut self, vars: &[String], sig: Signature) -> Term {
        let roll = self.below(10);
        if roll == 0 {
            Term::Zero
        } else if roll == 1 && sig.has_unit() {
            Term::One
        } else {
            Term::var(vars.choose(&mut self.rng).expect("at least one variable").clone())
        }
    }

    /// Random index expression `α·n + β` with small coefficients.
    pub fn index_expr(&mut self) -> IndexExpr {
        loop {
            let alpha = self.rng.random_range(0..=3);
            let beta = self.rng.random_range(0..=3);
            if let Some(e) = IndexExpr::new(alpha, beta) {
                if alpha > 0 || self.chance(0.2) {
                    return e;
                }
            }
        }
    }

    /// Random indexed family body: finitary combinations of index-free
    /// terms and index multiples of index-free terms.
    pub fn family_body(&mut self, vars: &[String], depth: u32, sig: Signature) -> Term {
        if depth == 0 || self.chance(0.2) {
            let e = self.index_expr();
            let operand = self.term(vars, 1, sig);
            return Term::nat(e, operand);
        }
        match self.below(6) {
            0 => self.family_body(vars, depth - 1, sig) + self.term(vars, 1, sig),
            1 => self.family_body(vars, depth - 1, sig) & self.family_body(vars, depth - 1, sig),
            2 => self.family_body(vars, depth - 1, sig) | self.term(vars, 1, sig),
            3 => -self.family_body(vars, depth - 1, sig),
            4 => self.family_body(vars, depth - 1, sig) & self.term(vars, 1, sig),
            _ => self.family_body(vars, depth - 1, sig) + self.family_body(vars, depth - 1, sig),
        }
    }

    /// Random eventually constant family.
    pub fn eventually_constant(&mut self, vars: &[String], sig: Signature) -> Family {
        let len = self.below(5);
        let prefix = (0..len).map(|_| self.term(vars, 2, sig)).collect();
        Family::EventuallyConstant { prefix, tail: self.term(vars, 2, sig) }
    }

    /// Random countable supremum with an eventually constant or indexed family.
    pub fn csup(&mut self, vars: &[String], sig: Signature) -> Term {
        let bound = self.term(vars, 2, sig);
        let family = if self.chance(0.5) {
            self.eventually_constant(vars, sig)
        } else {
            Family::Indexed(self.family_body(vars, 2, sig))
        };
        Term::csup(bound, family)
    }

    /// Random term possibly containing countable suprema at the top levels.
    pub fn term_with_csup(&mut self, vars: &[String], depth: u32, sig: Signature) -> Term {
        if depth == 0 || self.chance(0.4) {
            return self.csup(vars, sig);
        }
        match self.below(4) {
            0 => self.term_with_csup(vars, depth - 1, sig) + self.term(vars, 1, sig),
            1 => self.term_with_csup(vars, depth - 1, sig) & self.term_with_csup(vars, depth - 1, sig),
            2 => self.term_with_csup(vars, depth - 1, sig) | self.term(vars, 1, sig),
            _ => -self.term_with_csup(vars, depth - 1, sig),
        }
    }
}

/// Variable names `x0, x1, ...`.
pub fn var_names(count: usize) -> Vec<String> {
    (0..count).map(|i| format!("x{i}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible() {
        let mut a = Sampler::new(7, 3);
        let mut b = Sampler::new(7, 3);
        let mut c = Sampler::new(7, 4);
        let xa: Vec<Q> = (0..20).map(|_| a.rational()).collect();
        let xb: Vec<Q> = (0..20).map(|_| b.rational()).collect();
        let xc: Vec<Q> = (0..20).map(|_| c.rational()).collect();
        assert_eq!(xa, xb);
        assert_ne!(xa, xc);
    }

    #[test]
    fn rationals_in_range() {
        let mut s = Sampler::new(1, 0);
        for _ in 0..500 {
            let q = s.small_rational();
            assert!(q.numer().magnitude() <= &12u32.into());
            assert!(*q.denom() <= 4.into());
        }
    }

    #[test]
    fn generated_terms_validate() {
        let vars = var_names(3);
        let mut s = Sampler::new(5, 0);
        for sig in Signature::ALL {
            for _ in 0..50 {
                let t = s.term_with_csup(&vars, 3, sig);
                sig.check(&t).unwrap();
                let b = s.family_body(&vars, 3, sig);
                sig.check_family_body(&b).unwrap();
            }
        }
    }

    #[test]
    fn boundary_trials_first() {
        let vars: BTreeSet<String> = ["a", "b"].iter().map(|s| s.to_string()).collect();
        let mut s = Sampler::new(0, 2);
        let v = s.valuation(&vars, 2);
        assert!(v.values().all(|q| *q == int(-1)));
    }
}
