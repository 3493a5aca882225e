//! Weak-unit normalization: given `ℝ^Y/𝒥` and a nonnegative class `[u]`,
//! build `ℝ^X/𝓘` with `X = {y : u(y) > 0}` and `𝓘 = {J ∩ X : J ∈ 𝒥}`, and the
//! map `φ = η ∘ ρ` sending `[u]` to the class of the all-ones tuple.

use num_traits::{Signed, Zero};

use super::{
    positive_representative, FiniteIndexSet, IdealOfSubsets, LatticeMap, ModelElement, ModelError, ModelMorphism,
    QuotientModel,
};
use crate::rational::{self, Q};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineResult {
    /// `{y : u(y) > 0}`
    pub x: FiniteIndexSet,
    pub ideal: IdealOfSubsets,
    /// Restriction `ℝ^Y/𝒥 → ℝ^X/𝓘`.
    pub rho: ModelMorphism,
    /// Rescaling `ℝ^X → ℝ^X` by `1/u`.
    pub m_iso: ModelMorphism,
    /// The rescaling induced on `ℝ^X/𝓘`.
    pub eta: ModelMorphism,
    pub phi: ModelMorphism,
    pub unit_image: ModelElement,
    pub injective: bool,
    pub explanation: String,
    /// Labels of `{u = 0} ∖ ⋃𝒥`; the kernel of `φ` is the classes supported there.
    pub kernel: Vec<String>,
}

pub fn normalize_unit(y: &FiniteIndexSet, j: &IdealOfSubsets, u: &[Q]) -> Result<PipelineResult, ModelError> {
    let source = QuotientModel::new(y, j, true);
    let u = positive_representative(&source, u)?;

    let kept: Vec<usize> = (0..y.len()).filter(|&i| u[i].is_positive()).collect();
    let x = FiniteIndexSet::new(kept.iter().map(|&i| y.labels()[i].clone()))?;
    let top = kept.iter().enumerate().filter(|(_, &i)| j.top() >> i & 1 == 1).fold(0, |m, (k, _)| m | 1 << k);
    let ideal = IdealOfSubsets::principal(&x, top);
    let target = QuotientModel::new(&x, &ideal, true);

    // Support coordinates of the target are kept points outside ⋃𝒥, which
    // are support coordinates of the source as well.
    let rho_recipe = target
        .support()
        .iter()
        .map(|&k| {
            let i = kept[k];
            (source.support().iter().position(|&s| s == i).expect("outside ⋃𝒥"), rational::one())
        })
        .collect();
    let rho = ModelMorphism::new(source.clone(), target.clone(), rho_recipe)?;

    let power = QuotientModel::power(&x, true);
    let inv = |k: usize| rational::one() / &u[kept[k]];
    let m_iso = ModelMorphism::new(power.clone(), power, (0..x.len()).map(|k| (k, inv(k))).collect())?;
    let eta_recipe = target.support().iter().enumerate().map(|(c, &k)| (c, inv(k))).collect();
    let eta = ModelMorphism::new(target.clone(), target, eta_recipe)?;
    let phi = rho.then(&eta)?;
    let unit_image = phi.apply(&source.class_of(&u)?);

    let zeros: u64 = (0..y.len()).filter(|&i| u[i].is_zero()).fold(0, |m, i| m | 1 << i);
    let injective = j.contains(zeros);
    let kernel = y.subset_labels(zeros & !j.top());
    let zero_set = format!("{{{}}}", y.subset_labels(zeros).join(","));
    let explanation = if injective {
        format!("{{u = 0}} = {zero_set} belongs to the ideal, so the kernel is trivial")
    } else {
        format!("{{u = 0}} = {zero_set} is not in the ideal; classes supported on {{{}}} map to 0", kernel.join(","))
    };
    Ok(PipelineResult { x, ideal, rho, m_iso, eta, phi, unit_image, injective, explanation, kernel })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{check_homomorphism, check_sigma_continuity, ideal_closure};
    use crate::rational::int;

    #[test]
    fn unit_with_zero_in_ideal() {
        let y = FiniteIndexSet::range(3);
        let j = ideal_closure(&y, &[vec!["2"]]).unwrap();
        let r = normalize_unit(&y, &j, &[int(2), int(0), int(5)]).unwrap();
        assert_eq!(r.x.labels(), ["1", "3"]);
        assert_eq!(r.ideal.members(), vec![0]);
        assert!(r.injective);
        assert_eq!(r.unit_image, ModelElement(vec![int(1), int(1)]));
        assert!(check_sigma_continuity(&r.phi, 100, 0).passed());
        assert!(check_homomorphism(&r.phi, 100, 0).passed());
    }

    #[test]
    fn unit_with_zero_outside_ideal() {
        let y = FiniteIndexSet::range(3);
        let j = IdealOfSubsets::trivial(&y);
        let r = normalize_unit(&y, &j, &[int(2), int(0), int(5)]).unwrap();
        assert!(!r.injective);
        assert_eq!(r.kernel, ["2"]);
        let source = r.phi.source();
        let f = source.class_of(&[int(0), int(1), int(0)]).unwrap();
        assert!(!f.is_zero());
        assert!(r.phi.apply(&f).is_zero());
    }

    #[test]
    fn strictly_positive_unit_rescales() {
        let y = FiniteIndexSet::range(2);
        let j = IdealOfSubsets::trivial(&y);
        let r = normalize_unit(&y, &j, &[int(2), int(5)]).unwrap();
        assert_eq!(r.x, y);
        assert_eq!(r.ideal.members(), vec![0]);
        assert!(r.injective);
        assert_eq!(r.phi.recipe(), [(0, rational::frac(1, 2)), (1, rational::frac(1, 5))]);
    }

    #[test]
    fn negative_class_rejected() {
        let y = FiniteIndexSet::range(2);
        let j = IdealOfSubsets::trivial(&y);
        assert!(matches!(normalize_unit(&y, &j, &[int(-1), int(1)]), Err(ModelError::NegativeClass(_))));
        // negative only inside ⋃𝒥: replaced by the positive part
        let j = ideal_closure(&y, &[vec!["1"]]).unwrap();
        let r = normalize_unit(&y, &j, &[int(-1), int(1)]).unwrap();
        assert_eq!(r.x.labels(), ["2"]);
        assert!(r.injective);
    }
}
