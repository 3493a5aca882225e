//! Continuous piecewise-linear functions of the family index on `[1, ∞)`.
//!
//! At a fixed valuation, every indexed family body is such a function of the
//! index: index multiples contribute affine pieces and `∧`/`∨` split them at
//! crossing points. Suprema and positivity over the integers `n >= 1` are then
//! decided exactly from finitely many candidate integers.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::rational::{self, Q};

/// `slope·ν + intercept`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Affine {
    pub slope: Q,
    pub intercept: Q,
}

impl Affine {
    pub fn new(slope: Q, intercept: Q) -> Affine {
        Affine { slope, intercept }
    }

    pub fn at(&self, x: &Q) -> Q {
        &self.slope * x + &self.intercept
    }

    /// Where `self` and `other` cross, if their slopes differ.
    fn crossing(&self, other: &Affine) -> Option<Q> {
        let ds = &self.slope - &other.slope;
        (!ds.is_zero()).then(|| (&other.intercept - &self.intercept) / ds)
    }
}

/// Piece `i` covers `[start(i), end(i)]` where `start(0) = 1`,
/// `start(i) = breakpoints[i-1]` and the last piece is unbounded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PLFunction1 {
    breakpoints: Vec<Q>,
    pieces: Vec<Affine>,
}

#[derive(Clone, Copy)]
enum Op {
    Add,
    Min,
    Max,
}

impl PLFunction1 {
    pub fn constant(c: Q) -> PLFunction1 {
        PLFunction1::affine(rational::zero(), c)
    }

    pub fn affine(slope: Q, intercept: Q) -> PLFunction1 {
        PLFunction1 { breakpoints: Vec::new(), pieces: vec![Affine::new(slope, intercept)] }
    }

    /// Builds a function from explicit pieces. Returns `None` unless the
    /// breakpoints are strictly increasing, greater than 1, one fewer than the
    /// pieces, and adjacent pieces agree at their common breakpoint.
    pub fn from_pieces(breakpoints: Vec<Q>, pieces: Vec<Affine>) -> Option<PLFunction1> {
        if pieces.len() != breakpoints.len() + 1 {
            return None;
        }
        let mut prev = rational::one();
        for (i, b) in breakpoints.iter().enumerate() {
            if *b <= prev || pieces[i].at(b) != pieces[i + 1].at(b) {
                return None;
            }
            prev = b.clone();
        }
        Some(PLFunction1 { breakpoints, pieces })
    }

    pub fn breakpoints(&self) -> &[Q] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Affine] {
        &self.pieces
    }

    fn start(&self, i: usize) -> Q {
        if i == 0 {
            rational::one()
        } else {
            self.breakpoints[i - 1].clone()
        }
    }

    fn end(&self, i: usize) -> Option<&Q> {
        self.breakpoints.get(i)
    }

    pub fn last(&self) -> &Affine {
        self.pieces.last().expect("at least one piece")
    }

    /// Value at a real point `x >= 1`.
    pub fn at(&self, x: &Q) -> Q {
        let i = self.breakpoints.partition_point(|b| b < x);
        self.pieces[i].at(x)
    }

    pub fn at_int(&self, n: &BigInt) -> Q {
        self.at(&Q::from_integer(n.clone()))
    }

    pub fn neg(&self) -> PLFunction1 {
        self.scale(&-rational::one())
    }

    pub fn scale(&self, q: &Q) -> PLFunction1 {
        let pieces = self.pieces.iter().map(|p| Affine::new(&p.slope * q, &p.intercept * q)).collect();
        PLFunction1 { breakpoints: self.breakpoints.clone(), pieces }.normalized()
    }

    pub fn add(&self, other: &PLFunction1) -> PLFunction1 {
        self.combine(other, Op::Add)
    }

    pub fn min(&self, other: &PLFunction1) -> PLFunction1 {
        self.combine(other, Op::Min)
    }

    pub fn max(&self, other: &PLFunction1) -> PLFunction1 {
        self.combine(other, Op::Max)
    }

    fn combine(&self, other: &PLFunction1, op: Op) -> PLFunction1 {
        let mut cuts: Vec<Q> = self.breakpoints.iter().chain(&other.breakpoints).cloned().collect();
        cuts.sort();
        cuts.dedup();

        let mut starts = Vec::new();
        let mut pieces = Vec::new();
        let (mut i, mut j) = (0, 0);
        for k in 0..=cuts.len() {
            let lo = if k == 0 { rational::one() } else { cuts[k - 1].clone() };
            let hi = cuts.get(k);
            while self.end(i).is_some_and(|e| *e <= lo) {
                i += 1;
            }
            while other.end(j).is_some_and(|e| *e <= lo) {
                j += 1;
            }
            let (f, g) = (&self.pieces[i], &other.pieces[j]);
            match op {
                Op::Add => {
                    starts.push(lo);
                    pieces.push(Affine::new(&f.slope + &g.slope, &f.intercept + &g.intercept));
                }
                Op::Min | Op::Max => {
                    let split = f.crossing(g).filter(|x| *x > lo && hi.is_none_or(|h| x < h));
                    let mut segment = |a: Q, b: Option<Q>| {
                        let probe = match &b {
                            Some(b) => (&a + b) / Q::from_integer(2.into()),
                            None => &a + rational::one(),
                        };
                        let f_below = f.at(&probe) <= g.at(&probe);
                        let pick = match op {
                            Op::Min if f_below => f,
                            Op::Max if !f_below => f,
                            _ => g,
                        };
                        starts.push(a);
                        pieces.push(pick.clone());
                    };
                    match split {
                        Some(x) => {
                            segment(lo, Some(x.clone()));
                            segment(x, hi.cloned());
                        }
                        None => segment(lo, hi.cloned()),
                    }
                }
            }
        }
        starts.remove(0);
        PLFunction1 { breakpoints: starts, pieces }.normalized()
    }

    /// Merges adjacent pieces carrying the same affine map.
    fn normalized(self) -> PLFunction1 {
        let mut breakpoints = Vec::with_capacity(self.breakpoints.len());
        let mut pieces: Vec<Affine> = Vec::with_capacity(self.pieces.len());
        for (k, p) in self.pieces.into_iter().enumerate() {
            if pieces.last() == Some(&p) {
                continue;
            }
            if k > 0 {
                breakpoints.push(self.breakpoints[k - 1].clone());
            }
            pieces.push(p);
        }
        PLFunction1 { breakpoints, pieces }
    }

    /// Integer range `[lo, hi]` of piece `i` intersected with `n >= 1`;
    /// `hi = None` for the unbounded last piece. `None` if empty.
    fn integer_range(&self, i: usize) -> Option<(BigInt, Option<BigInt>)> {
        let lo = rational::ceil(&self.start(i)).max(BigInt::one());
        let hi = self.end(i).map(rational::floor);
        match &hi {
            Some(h) if *h < lo => None,
            _ => Some((lo, hi)),
        }
    }
}

/// `sup_{n ∈ ℤ, n ≥ 1} min(p(n), cap)` together with the least index
/// attaining it. The supremum is always attained: capping turns an
/// increasing tail into the constant `cap`, and a non-increasing tail peaks
/// at its first integer.
pub fn sup_over_integers_attained(p: &PLFunction1, cap: &Q) -> (Q, BigInt) {
    let capped = p.min(&PLFunction1::constant(cap.clone()));
    let mut best: Option<(Q, BigInt)> = None;
    for i in 0..capped.pieces.len() {
        let Some((lo, hi)) = capped.integer_range(i) else { continue };
        let piece = &capped.pieces[i];
        // The capped function never increases on its last piece.
        let n = if piece.slope.is_positive() { hi.expect("bounded piece") } else { lo };
        let value = capped.at_int(&n);
        match &best {
            Some((b, _)) if *b >= value => {}
            _ => best = Some((value, n)),
        }
    }
    best.expect("the last piece always contains integers")
}

/// `sup_{n ∈ ℤ, n ≥ 1} min(p(n), cap)`, computed exactly.
pub fn sup_over_integers(p: &PLFunction1, cap: &Q) -> Q {
    sup_over_integers_attained(p, cap).0
}

/// The least integer `n >= 1` with `p(n) > 0`, if any.
pub fn exists_positive(p: &PLFunction1) -> Option<BigInt> {
    for i in 0..p.pieces.len() {
        let Some((lo, hi)) = p.integer_range(i) else { continue };
        let piece = &p.pieces[i];
        let candidate = if piece.slope.is_positive() {
            // slope·n + intercept > 0  ⟺  n > -intercept/slope
            let root = -&piece.intercept / &piece.slope;
            (rational::floor(&root) + BigInt::one()).max(lo)
        } else {
            lo
        };
        if hi.as_ref().is_some_and(|h| candidate > *h) {
            continue;
        }
        if p.at_int(&candidate).is_positive() {
            return Some(candidate);
        }
    }
    None
}
