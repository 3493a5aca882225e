//! Finite quotient-of-power models `ℝ^X/𝓘`.
//!
//! On a finite ground set every ideal of subsets is principal: it is the
//! powerset of `M`, the union of its members. Two tuples are identified
//! exactly when they agree off `M`, so the quotient is `ℝ^(X∖M)` and each
//! class is stored as its restriction to the support `X∖M`.

mod pipeline;

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_traits::{Signed, Zero};

use crate::rational::{self, Q};
use crate::sample::Sampler;
use crate::semantics::{self, EvalError, Valuation};
use crate::term::{Signature, Term};

pub use pipeline::{normalize_unit, PipelineResult};

/// Bitmask of ground elements.
pub type Subset = u64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("ground sets are limited to 63 elements")]
    TooLarge,
    #[error("expected {expected} coordinates, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("the family is not an ideal: {0}")]
    NotAnIdeal(&'static str),
    #[error("csup requires an enriched model")]
    NotEnriched,
    #[error("variable `{0}` is unbound")]
    Unbound(String),
    #[error("the class is not nonnegative: coordinate `{0}` is negative")]
    NegativeClass(String),
    #[error("recipe factors must be positive and indices in range")]
    BadRecipe,
    #[error("evaluation at coordinate `{label}`: {source}")]
    Eval { label: String, source: EvalError },
}

/// A finite set of distinct labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteIndexSet {
    labels: Vec<String>,
}

impl FiniteIndexSet {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<FiniteIndexSet, ModelError> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() > 63 {
            return Err(ModelError::TooLarge);
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l) {
                return Err(ModelError::DuplicateLabel(l.clone()));
            }
        }
        Ok(FiniteIndexSet { labels })
    }

    /// `{1, ..., n}` with decimal labels.
    pub fn range(n: usize) -> FiniteIndexSet {
        FiniteIndexSet::new((1..=n).map(|i| i.to_string())).expect("distinct labels")
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Result<usize, ModelError> {
        self.labels.iter().position(|l| l == label).ok_or_else(|| ModelError::UnknownLabel(label.to_string()))
    }

    pub fn full(&self) -> Subset {
        (1u64 << self.len()) - 1
    }

    pub fn subset<S: AsRef<str>>(&self, labels: &[S]) -> Result<Subset, ModelError> {
        labels.iter().try_fold(0, |m, l| Ok(m | 1 << self.index_of(l.as_ref())?))
    }

    pub fn subset_labels(&self, s: Subset) -> Vec<String> {
        (0..self.len()).filter(|i| s >> i & 1 == 1).map(|i| self.labels[i].clone()).collect()
    }
}

/// An ideal of subsets of a finite ground set, stored as the union `M` of
/// its members; the members are exactly the subsets of `M`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IdealOfSubsets {
    ground: FiniteIndexSet,
    top: Subset,
}

impl IdealOfSubsets {
    /// `{∅}`.
    pub fn trivial(ground: &FiniteIndexSet) -> IdealOfSubsets {
        IdealOfSubsets { ground: ground.clone(), top: 0 }
    }

    /// The powerset of `top`.
    pub fn principal(ground: &FiniteIndexSet, top: Subset) -> IdealOfSubsets {
        IdealOfSubsets { ground: ground.clone(), top: top & ground.full() }
    }

    /// Every ideal on `ground`, one per subset.
    pub fn all(ground: &FiniteIndexSet) -> impl Iterator<Item = IdealOfSubsets> + '_ {
        (0..=ground.full()).map(move |top| IdealOfSubsets::principal(ground, top))
    }

    /// Checks the ideal conditions on an explicit family of subsets.
    pub fn from_members(ground: &FiniteIndexSet, members: &[Subset]) -> Result<IdealOfSubsets, ModelError> {
        let set: HashSet<Subset> = members.iter().copied().collect();
        if set.iter().any(|m| m & !ground.full() != 0) {
            return Err(ModelError::NotAnIdeal("member outside the ground set"));
        }
        if !set.contains(&0) {
            return Err(ModelError::NotAnIdeal("missing the empty set"));
        }
        let top = set.iter().fold(0, |a, m| a | m);
        if !set.contains(&top) {
            return Err(ModelError::NotAnIdeal("not closed under union"));
        }
        let ideal = IdealOfSubsets { ground: ground.clone(), top };
        if set.len() != ideal.members().len() {
            return Err(ModelError::NotAnIdeal("not downward closed"));
        }
        Ok(ideal)
    }

    pub fn ground(&self) -> &FiniteIndexSet {
        &self.ground
    }

    /// Union of all members.
    pub fn top(&self) -> Subset {
        self.top
    }

    pub fn contains(&self, s: Subset) -> bool {
        s & !self.top == 0
    }

    /// All members, in increasing bitmask order.
    pub fn members(&self) -> Vec<Subset> {
        let mut out = Vec::with_capacity(1 << self.top.count_ones());
        let mut s: Subset = 0;
        loop {
            out.push(s);
            if s == self.top {
                break;
            }
            // next subset of `top` in increasing order
            s = (s.wrapping_sub(self.top)) & self.top;
        }
        out
    }

    pub fn member_labels(&self) -> Vec<Vec<String>> {
        self.members().into_iter().map(|m| self.ground.subset_labels(m)).collect()
    }
}

impl fmt::Display for IdealOfSubsets {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sets: Vec<String> = self.member_labels().iter().map(|m| format!("{{{}}}", m.join(","))).collect();
        write!(f, "{{{}}}", sets.join(", "))
    }
}

/// The smallest ideal containing `generators`.
pub fn ideal_closure<S: AsRef<str>>(
    ground: &FiniteIndexSet,
    generators: &[Vec<S>],
) -> Result<IdealOfSubsets, ModelError> {
    let top = generators.iter().try_fold(0, |m, g| Ok::<_, ModelError>(m | ground.subset(g)?))?;
    Ok(IdealOfSubsets::principal(ground, top))
}

/// An element of a model: one rational per support coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModelElement(pub Vec<Q>);

impl ModelElement {
    pub fn values(&self) -> &[Q] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    fn zip(&self, other: &ModelElement, f: impl Fn(&Q, &Q) -> Q) -> ModelElement {
        ModelElement(self.0.iter().zip(&other.0).map(|(a, b)| f(a, b)).collect())
    }

    pub fn add(&self, other: &ModelElement) -> ModelElement {
        self.zip(other, |a, b| a + b)
    }

    pub fn neg(&self) -> ModelElement {
        ModelElement(self.0.iter().map(|a| -a).collect())
    }

    pub fn meet(&self, other: &ModelElement) -> ModelElement {
        self.zip(other, rational::min)
    }

    pub fn join(&self, other: &ModelElement) -> ModelElement {
        self.zip(other, rational::max)
    }

    pub fn format(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(rational::format).collect();
        format!("({})", parts.join(", "))
    }
}

/// `ℝ^X/𝓘`, optionally enriched with the countable supremum, together with
/// the element interpreting the constant `1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientModel {
    ground: FiniteIndexSet,
    ideal: IdealOfSubsets,
    support: Vec<usize>,
    enriched: bool,
    unit: ModelElement,
}

impl QuotientModel {
    /// `ℝ^X/𝓘` with unit the class of the all-ones tuple.
    pub fn new(ground: &FiniteIndexSet, ideal: &IdealOfSubsets, enriched: bool) -> QuotientModel {
        let support: Vec<usize> = (0..ground.len()).filter(|i| ideal.top >> i & 1 == 0).collect();
        let unit = ModelElement(vec![rational::one(); support.len()]);
        QuotientModel { ground: ground.clone(), ideal: ideal.clone(), support, enriched, unit }
    }

    /// The power `ℝ^X`.
    pub fn power(ground: &FiniteIndexSet, enriched: bool) -> QuotientModel {
        QuotientModel::new(ground, &IdealOfSubsets::trivial(ground), enriched)
    }

    pub fn with_unit(mut self, unit: ModelElement) -> Result<QuotientModel, ModelError> {
        self.check_arity(&unit)?;
        self.unit = unit;
        Ok(self)
    }

    pub fn ground(&self) -> &FiniteIndexSet {
        &self.ground
    }

    pub fn ideal(&self) -> &IdealOfSubsets {
        &self.ideal
    }

    /// Ground indices of the support coordinates.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn support_labels(&self) -> Vec<String> {
        self.support.iter().map(|&i| self.ground.labels[i].clone()).collect()
    }

    pub fn dim(&self) -> usize {
        self.support.len()
    }

    pub fn is_enriched(&self) -> bool {
        self.enriched
    }

    pub fn unit(&self) -> &ModelElement {
        &self.unit
    }

    /// The same algebra with the countable supremum installed.
    pub fn enrich(&self) -> QuotientModel {
        QuotientModel { enriched: true, ..self.clone() }
    }

    /// The same algebra with the countable supremum removed.
    pub fn forget(&self) -> QuotientModel {
        QuotientModel { enriched: false, ..self.clone() }
    }

    pub fn zero(&self) -> ModelElement {
        ModelElement(vec![rational::zero(); self.dim()])
    }

    fn check_arity(&self, e: &ModelElement) -> Result<(), ModelError> {
        if e.0.len() == self.dim() {
            Ok(())
        } else {
            Err(ModelError::Arity { expected: self.dim(), got: e.0.len() })
        }
    }

    /// The class of a tuple over the whole ground set.
    pub fn class_of(&self, tuple: &[Q]) -> Result<ModelElement, ModelError> {
        if tuple.len() != self.ground.len() {
            return Err(ModelError::Arity { expected: self.ground.len(), got: tuple.len() });
        }
        Ok(ModelElement(self.support.iter().map(|&i| tuple[i].clone()).collect()))
    }

    /// Whether two ground tuples are identified: `{x : f(x) ≠ g(x)} ∈ 𝓘`.
    pub fn same_class(&self, f: &[Q], g: &[Q]) -> bool {
        let diff = f.iter().zip(g).enumerate().filter(|(_, (a, b))| a != b).fold(0, |m, (i, _)| m | 1 << i);
        self.ideal.contains(diff)
    }

    /// Random element with coordinates from the sampler's mixture.
    pub fn sample(&self, s: &mut Sampler) -> ModelElement {
        ModelElement((0..self.dim()).map(|_| s.rational()).collect())
    }
}

/// Assignment of model elements to variables.
pub type ModelValuation = BTreeMap<String, ModelElement>;

/// Evaluates `t` coordinatewise on the support.
pub fn eval_in_model(t: &Term, v: &ModelValuation, model: &QuotientModel) -> Result<ModelElement, ModelError> {
    if t.contains_csup() && !model.enriched {
        return Err(ModelError::NotEnriched);
    }
    for x in t.free_vars() {
        match v.get(&x) {
            None => return Err(ModelError::Unbound(x)),
            Some(e) => model.check_arity(e)?,
        }
    }
    let mut out = Vec::with_capacity(model.dim());
    for j in 0..model.dim() {
        let point: Valuation = v.iter().map(|(x, e)| (x.clone(), e.0[j].clone())).collect();
        let value = semantics::eval_with_unit(t, &point, &model.unit.0[j])
            .map_err(|source| ModelError::Eval { label: model.ground.labels[model.support[j]].clone(), source })?;
        out.push(value);
    }
    Ok(ModelElement(out))
}

/// A map between models that can be probed for lattice properties.
pub trait LatticeMap {
    fn source(&self) -> &QuotientModel;
    fn target(&self) -> &QuotientModel;
    fn apply(&self, e: &ModelElement) -> ModelElement;
}

/// A morphism given by a recipe: target coordinate `j` is
/// `factor_j · source[index_j]` with `factor_j > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelMorphism {
    source: QuotientModel,
    target: QuotientModel,
    recipe: Vec<(usize, Q)>,
}

impl ModelMorphism {
    pub fn new(
        source: QuotientModel,
        target: QuotientModel,
        recipe: Vec<(usize, Q)>,
    ) -> Result<ModelMorphism, ModelError> {
        let ok = recipe.len() == target.dim() && recipe.iter().all(|(i, q)| *i < source.dim() && q.is_positive());
        if !ok {
            return Err(ModelError::BadRecipe);
        }
        Ok(ModelMorphism { source, target, recipe })
    }

    pub fn identity(model: &QuotientModel) -> ModelMorphism {
        let recipe = (0..model.dim()).map(|i| (i, rational::one())).collect();
        ModelMorphism { source: model.clone(), target: model.clone(), recipe }
    }

    pub fn recipe(&self) -> &[(usize, Q)] {
        &self.recipe
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &ModelMorphism) -> Result<ModelMorphism, ModelError> {
        if then.source.dim() != self.target.dim() {
            return Err(ModelError::Arity { expected: self.target.dim(), got: then.source.dim() });
        }
        let recipe = then.recipe.iter().map(|(j, q)| (self.recipe[*j].0, q * &self.recipe[*j].1)).collect();
        Ok(ModelMorphism { source: self.source.clone(), target: then.target.clone(), recipe })
    }

    /// Human-readable recipe `target <- factor*source`.
    pub fn describe(&self) -> Vec<String> {
        let src = self.source.support_labels();
        let dst = self.target.support_labels();
        self.recipe
            .iter()
            .zip(dst)
            .map(|((i, q), d)| {
                if q == &rational::one() {
                    format!("{d} <- {}", src[*i])
                } else {
                    format!("{d} <- {}*{}", rational::format(q), src[*i])
                }
            })
            .collect()
    }
}

impl LatticeMap for ModelMorphism {
    fn source(&self) -> &QuotientModel {
        &self.source
    }

    fn target(&self) -> &QuotientModel {
        &self.target
    }

    fn apply(&self, e: &ModelElement) -> ModelElement {
        ModelElement(self.recipe.iter().map(|(i, q)| q * &e.0[*i]).collect())
    }
}

/// `ℝ^X/𝓘` with the quotient map `ℝ^X → ℝ^X/𝓘` (restriction to the support).
pub fn quotient_model(
    ground: &FiniteIndexSet,
    ideal: &IdealOfSubsets,
    enriched: bool,
) -> (QuotientModel, ModelMorphism) {
    let model = QuotientModel::new(ground, ideal, enriched);
    let power = QuotientModel::power(ground, enriched);
    let recipe = model.support.iter().map(|&i| (i, rational::one())).collect();
    let map = ModelMorphism { source: power, target: model.clone(), recipe };
    (model, map)
}

/// Outcome of a randomized or exact check on models.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Check<W> {
    Passed { trials: u64 },
    Failed(W),
}

impl<W> Check<W> {
    pub fn passed(&self) -> bool {
        matches!(self, Check::Passed { .. })
    }
}

/// Disagreement between the two routes of [`compare_enrichments`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discrepancy {
    pub trial: u64,
    pub term: Term,
    pub valuation: BTreeMap<String, Vec<Q>>,
    pub quotient_first: ModelElement,
    pub power_first: ModelElement,
}

/// Compares evaluating random csup terms in the enriched quotient with
/// evaluating them in the enriched power and then applying the quotient map.
pub fn compare_enrichments(
    ground: &FiniteIndexSet,
    ideal: &IdealOfSubsets,
    trials: u64,
    seed: u64,
) -> Check<Discrepancy> {
    let (quotient, map) = quotient_model(ground, ideal, true);
    let power = map.source().clone();
    let vars = crate::sample::var_names(3);
    for trial in 0..trials {
        let mut s = Sampler::new(seed, trial);
        let sig = if s.chance(0.5) { Signature::Rsu } else { Signature::Lgu };
        let term = s.term_with_csup(&vars, 2, sig);
        let tuples: BTreeMap<String, Vec<Q>> =
            vars.iter().map(|x| (x.clone(), (0..ground.len()).map(|_| s.rational()).collect())).collect();
        let in_power: ModelValuation = tuples.iter().map(|(x, t)| (x.clone(), ModelElement(t.clone()))).collect();
        let in_quotient: ModelValuation =
            tuples.iter().map(|(x, t)| (x.clone(), quotient.class_of(t).expect("ground arity"))).collect();
        let a = eval_in_model(&term, &in_quotient, &quotient).expect("generated terms evaluate");
        let b = map.apply(&eval_in_model(&term, &in_power, &power).expect("generated terms evaluate"));
        if a != b {
            return Check::Failed(Discrepancy { trial, term, valuation: tuples, quotient_first: a, power_first: b });
        }
    }
    Check::Passed { trials }
}

/// Why an element is not a weak unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotWeakUnit {
    pub coordinate: String,
    /// Nonzero `f` with `f ∧ e = 0`, when `e >= 0`.
    pub witness: Option<ModelElement>,
}

/// Decides whether `e` is a weak unit: `e >= 0` and `f ∧ e = 0 ⇒ f = 0`.
/// On a finite support this holds iff `e` is strictly positive everywhere;
/// `trials` random elements `f` corroborate the implication.
pub fn check_weak_unit(model: &QuotientModel, e: &ModelElement, trials: u64, seed: u64) -> Check<NotWeakUnit> {
    let label = |j: usize| model.ground.labels[model.support[j]].clone();
    if let Some(j) = e.0.iter().position(Signed::is_negative) {
        return Check::Failed(NotWeakUnit { coordinate: label(j), witness: None });
    }
    if let Some(j) = e.0.iter().position(Zero::is_zero) {
        let mut f = model.zero();
        f.0[j] = rational::one();
        return Check::Failed(NotWeakUnit { coordinate: label(j), witness: Some(f) });
    }
    for trial in 0..trials {
        let mut s = Sampler::new(seed, trial);
        let f = ModelElement(
            (0..model.dim()).map(|_| if s.chance(0.5) { rational::zero() } else { s.rational() }).collect(),
        );
        if f.meet(e).is_zero() && !f.is_zero() {
            let j = f.0.iter().position(|q| !q.is_zero()).expect("nonzero");
            return Check::Failed(NotWeakUnit { coordinate: label(j), witness: Some(f) });
        }
    }
    Check::Passed { trials }
}

/// A finite family whose supremum is not preserved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupFailure {
    pub family: Vec<ModelElement>,
    pub image_of_sup: ModelElement,
    pub sup_of_images: ModelElement,
}

fn sup(family: &[ModelElement]) -> ModelElement {
    family.iter().skip(1).fold(family[0].clone(), |a, b| a.join(b))
}

/// Checks `φ(sup S) = sup φ(S)` on random finite families `S`.
pub fn check_sigma_continuity(phi: &impl LatticeMap, samples: u64, seed: u64) -> Check<SupFailure> {
    for trial in 0..samples {
        let mut s = Sampler::new(seed, trial);
        let size = 1 + s.below(5);
        let family: Vec<ModelElement> = (0..size).map(|_| phi.source().sample(&mut s)).collect();
        let image_of_sup = phi.apply(&sup(&family));
        let images: Vec<ModelElement> = family.iter().map(|f| phi.apply(f)).collect();
        let sup_of_images = sup(&images);
        if image_of_sup != sup_of_images {
            return Check::Failed(SupFailure { family, image_of_sup, sup_of_images });
        }
    }
    Check::Passed { trials: samples }
}

/// An operation that a map fails to preserve, with the arguments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperationFailure {
    pub operation: &'static str,
    pub arguments: Vec<ModelElement>,
}

/// Checks that `φ` preserves `0`, `+`, `-`, `∨` and `∧` on random pairs.
pub fn check_homomorphism(phi: &impl LatticeMap, samples: u64, seed: u64) -> Check<OperationFailure> {
    if !phi.apply(&phi.source().zero()).is_zero() {
        return Check::Failed(OperationFailure { operation: "0", arguments: Vec::new() });
    }
    for trial in 0..samples {
        let mut s = Sampler::new(seed, trial);
        let a = phi.source().sample(&mut s);
        let b = phi.source().sample(&mut s);
        let (fa, fb) = (phi.apply(&a), phi.apply(&b));
        let checks: [(&'static str, ModelElement, ModelElement); 4] = [
            ("+", phi.apply(&a.add(&b)), fa.add(&fb)),
            ("-", phi.apply(&a.neg()), fa.neg()),
            ("\\/", phi.apply(&a.join(&b)), fa.join(&fb)),
            ("/\\", phi.apply(&a.meet(&b)), fa.meet(&fb)),
        ];
        for (operation, lhs, rhs) in checks {
            if lhs != rhs {
                return Check::Failed(OperationFailure { operation, arguments: vec![a, b] });
            }
        }
    }
    Check::Passed { trials: samples }
}

/// A coordinatewise nonnegative representative `f⁺` of the class of `f`,
/// which must be nonnegative in the quotient.
pub fn positive_representative(model: &QuotientModel, f: &[Q]) -> Result<Vec<Q>, ModelError> {
    let class = model.class_of(f)?;
    if let Some(j) = class.0.iter().position(Signed::is_negative) {
        return Err(ModelError::NegativeClass(model.ground.labels[model.support[j]].clone()));
    }
    Ok(f.iter().map(|q| rational::max(q, &rational::zero())).collect())
}
