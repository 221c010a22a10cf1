//! Geometric predicates for the compactification attached to a subset
//! `T`: Q-factoriality (equivalently Q-Gorenstein-ness), descent of line
//! bundles along the good moduli morphism, and the factorization of the
//! contraction from the pseudostable space into divisorial steps
//! followed by a small contraction.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::divisor::{is_t_compatible, DivisorClass};
use crate::error::{DomainError, Result};
use crate::fcurve::BridgeType;
use crate::index_set::{check_ambient, BoundaryIndex, MarkedGenus, PairIndex, TSubset};

/// How the contraction attached to `T` factors through the divisorial
/// compactification.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct FactorizationDescriptor {
    /// One mark index per divisorial pair `{[0,{j}], [1,{j}]}` in the
    /// divisorial part, ascending, deduplicated by class pair.
    pub divisorial_steps: Vec<u32>,
    /// The bridges generating the relative cone of the remaining small
    /// contraction: minimal subsets of the admissible reduction not
    /// contained in the divisorial part. Empty when the small step is
    /// the identity.
    pub small_contraction_generators: Vec<BridgeType>,
    /// Whether the small contraction is the contraction of a
    /// canonically negative face: true exactly when `T` contains no
    /// triple `{[0,{j}], [1,{j}], [2,{j}]}`, or on the instances
    /// `(3,1)`, `(3,2)`, `(2,2)`.
    pub k_negative_small: bool,
}

fn check_not_two_zero(op: &'static str, ambient: MarkedGenus) -> Result<()> {
    if ambient.pair() == (2, 0) {
        return Err(DomainError::ExcludedInstance { op, g: 2, n: 0 });
    }
    Ok(())
}

/// Whether the compactification attached to `T` is Q-factorial, i.e.
/// whether the admissible reduction of `T` equals its divisorial part.
/// The same condition decides Q-Gorenstein-ness.
pub fn is_q_factorial(t: &TSubset) -> Result<bool> {
    check_not_two_zero("is_q_factorial", t.ambient())?;
    Ok(t.admissible_reduction() == t.divisorial_part())
}

/// Whether a class on the pseudostable space descends to the
/// compactification attached to `T`: compatibility with the admissible
/// reduction of `T`.
pub fn descends(l: &DivisorClass, t: &TSubset) -> Result<bool> {
    check_not_two_zero("descends", t.ambient())?;
    check_ambient(l.ambient(), t.ambient())?;
    is_t_compatible(l, &t.admissible_reduction())
}

/// Build the factorization descriptor of the contraction attached to `T`.
pub fn factorize(t: &TSubset) -> Result<FactorizationDescriptor> {
    let amb = t.ambient();
    check_not_two_zero("factorize", amb)?;
    let reduced = t.admissible_reduction();
    let divisorial = t.divisorial_part();

    let mut divisorial_steps = Vec::new();
    let mut seen_pairs: BTreeSet<(PairIndex, PairIndex)> = BTreeSet::new();
    for j in amb.marks() {
        let (a, b) = match (amb.pair_class(0, [j]), amb.pair_class(1, [j])) {
            (Ok(a), Ok(b)) => (a, b),
            _ => continue,
        };
        if divisorial.contains_pair(&a) && divisorial.contains_pair(&b) {
            let key = if a <= b { (a, b) } else { (b, a) };
            if seen_pairs.insert(key) {
                divisorial_steps.push(j);
            }
        }
    }

    let mut small_contraction_generators = Vec::new();
    for minimal in amb.minimal_subsets() {
        if minimal.is_subset(&reduced) && !minimal.is_subset(&divisorial) {
            small_contraction_generators.push(minimal_to_bridge(amb, &minimal));
        }
    }

    let k_negative_small = instance_is_special(amb) || !contains_triple(t);

    Ok(FactorizationDescriptor {
        divisorial_steps,
        small_contraction_generators,
        k_negative_small,
    })
}

fn instance_is_special(ambient: MarkedGenus) -> bool {
    [(3, 1), (3, 2), (2, 2)].contains(&ambient.pair())
}

/// Whether `T` contains `{[0,{j}], [1,{j}], [2,{j}]}` for some mark `j`.
fn contains_triple(t: &TSubset) -> bool {
    let amb = t.ambient();
    amb.marks().any(|j| {
        [0u32, 1, 2].iter().all(|&i| {
            amb.pair_class(i, [j])
                .map(|c| t.contains_pair(&c))
                .unwrap_or(false)
        })
    })
}

fn minimal_to_bridge(ambient: MarkedGenus, minimal: &TSubset) -> BridgeType {
    if minimal.contains(&BoundaryIndex::Irr) {
        return BridgeType::Irr;
    }
    let mut pairs = minimal.pair_members();
    let first = pairs.next().expect("minimal subsets are nonempty").clone();
    // the lower class of the pair carries an upward representative
    let low = match pairs.next() {
        Some(second) => {
            if first <= *second {
                first
            } else {
                second.clone()
            }
        }
        None => first,
    };
    BridgeType::pair(ambient, low.genus(), low.marks().iter().copied())
        .expect("minimal subsets are bridge types")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisor::{canonical_plus_psi, canonical_pullback, DivisorClass, Space};
    use crate::rat::int;

    fn mg(g: u32, n: u32) -> MarkedGenus {
        MarkedGenus::new(g, n)
    }

    fn tset(amb: MarkedGenus, pairs: &[(u32, &[u32])], irr: bool) -> TSubset {
        let mut t = TSubset::empty(amb);
        if irr {
            t.insert(BoundaryIndex::Irr).unwrap();
        }
        for (i, marks) in pairs {
            t.insert(amb.boundary_class(*i, marks.iter().copied()).unwrap())
                .unwrap();
        }
        t
    }

    #[test]
    fn q_factoriality_examples() {
        assert!(is_q_factorial(&TSubset::empty(mg(3, 1))).unwrap());
        // {irr} has admissible reduction {irr} but empty divisorial part
        assert!(!is_q_factorial(&tset(mg(4, 0), &[], true)).unwrap());
        // a divisorial pair is its own reduction and divisorial part
        assert!(is_q_factorial(&tset(mg(3, 2), &[(0, &[1]), (1, &[1])], false)).unwrap());
        assert!(is_q_factorial(&TSubset::empty(mg(2, 0))).is_err());
    }

    #[test]
    fn descent_examples() {
        let amb = mg(3, 1);
        // lambda does not descend once irr is contracted
        let mut lambda = DivisorClass::zero(Space::MgnPs, amb);
        lambda.set_lambda(int(1)).unwrap();
        assert!(descends(&lambda, &TSubset::empty(amb)).unwrap());
        assert!(!descends(&lambda, &tset(amb, &[], true)).unwrap());

        // the canonical-plus-psi class pairs to -7 with the irr bridge
        let k = canonical_plus_psi(Space::MgnPs, amb);
        assert!(!descends(&k, &tset(amb, &[], true)).unwrap());

        // the crepant pullback descends for its own subset
        let amb = mg(3, 2);
        let t = tset(amb, &[(0, &[1]), (1, &[1])], false);
        let k = canonical_pullback(&t).unwrap();
        assert!(descends(&k, &t).unwrap());
    }

    #[test]
    fn descent_sees_only_the_admissible_reduction() {
        let amb = mg(4, 1);
        let mut lambda = DivisorClass::zero(Space::MgnPs, amb);
        lambda.set_lambda(int(1)).unwrap();
        // an isolated class reduces away, so nothing is contracted
        let isolated = tset(amb, &[(2, &[])], false);
        assert!(descends(&lambda, &isolated).unwrap());
        assert_eq!(
            descends(&lambda, &isolated).unwrap(),
            descends(&lambda, &isolated.admissible_reduction()).unwrap()
        );
    }

    #[test]
    fn factorization_counts_divisorial_steps() {
        let amb = mg(3, 2);
        let t = tset(amb, &[(0, &[1]), (1, &[1])], false);
        let d = factorize(&t).unwrap();
        assert_eq!(d.divisorial_steps, vec![1]);
        assert!(d.small_contraction_generators.is_empty());
        assert!(d.k_negative_small);
        assert_eq!(d.divisorial_steps.len(), t.divisorial_part().len() / 2);

        // on (1, 2) the two mark pairs give one class pair, hence one step
        let amb = mg(1, 2);
        let t = tset(amb, &[(0, &[1]), (0, &[2])], false);
        let d = factorize(&t).unwrap();
        assert_eq!(d.divisorial_steps, vec![1]);
        assert_eq!(d.divisorial_steps.len(), t.divisorial_part().len() / 2);
    }

    #[test]
    fn factorization_generators() {
        // irr alone: one small-contraction generator, no divisorial step
        let amb = mg(4, 0);
        let d = factorize(&tset(amb, &[], true)).unwrap();
        assert!(d.divisorial_steps.is_empty());
        assert_eq!(d.small_contraction_generators, vec![BridgeType::Irr]);
        assert!(d.k_negative_small);

        // a divisorial pair plus irr: one step and one generator
        let amb = mg(3, 2);
        let t = tset(amb, &[(0, &[1]), (1, &[1])], true);
        let d = factorize(&t).unwrap();
        assert_eq!(d.divisorial_steps, vec![1]);
        assert_eq!(d.small_contraction_generators, vec![BridgeType::Irr]);
    }

    #[test]
    fn k_negativity_of_the_small_step() {
        // a triple over one mark makes the small step non-negative ...
        let amb = mg(4, 1);
        let t = tset(amb, &[(0, &[1]), (1, &[1]), (2, &[1])], false);
        let d = factorize(&t).unwrap();
        assert!(!d.k_negative_small);
        // the bad ray is the pair {[1,{1}],[2,{1}]}
        assert_eq!(
            d.small_contraction_generators,
            vec![BridgeType::pair(amb, 1, [1]).unwrap()]
        );

        // ... except on the special instances
        let amb = mg(2, 2);
        let t = tset(amb, &[(0, &[1]), (1, &[1]), (2, &[1])], false);
        let d = factorize(&t).unwrap();
        assert!(d.k_negative_small);
    }
}
