//! F-nef and F-ample testing.
//!
//! Two independent routes are implemented and cross-validated against
//! each other:
//!
//! - brute force: intersect a class with every enumerated F-curve and
//!   classify the sign pattern;
//! - closed forms: for adjoint divisors, evaluate the explicit
//!   inequality systems on the coefficients directly, including the
//!   equality branches that detect which bridge curves degenerate.
//!
//! On the pseudostable side the brute-force route pulls the class back
//! to the stable space and tests the zero set against the F-curves
//! spanning the face of a subset `T`, mirroring the reduction used to
//! characterize the associated contraction.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_traits::Zero;
use serde::Serialize;

use crate::divisor::{
    check_space, check_space_params, pullback_upsilon, AdjointParams, DivisorClass, Space,
};
use crate::error::{DomainError, Result};
use crate::fcurve::{
    bridge_curves, cached_fcurves, cached_vector_keys, fcurves_in_ne_upsilon_t, intersect,
    intersection_vector, BasisClass, BridgeType, FCurve,
};
use crate::index_set::{check_ambient, subsets, MarkedGenus, TSubset};
use crate::rat::{int, rat, Rat};

/// Outcome of a positivity scan over the F-curves.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum PositivityStatus {
    /// Strictly positive on every F-curve.
    FAmple,
    /// Nonnegative, vanishing exactly on the elliptic tail curve.
    FNefStrictExceptEll,
    /// Nonnegative, vanishing exactly on a prescribed curve set.
    FNefOnExactSet,
    /// Nonnegative everywhere.
    FNef,
    /// Negative somewhere.
    NotFNef,
}

/// A status together with the curves responsible for it: every zero or
/// negative intersection, with its exact value.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct PositivityVerdict {
    pub status: PositivityStatus,
    pub witnesses: Vec<(FCurve, String)>,
}

fn witness_list(values: &[(FCurve, Rat)]) -> Vec<(FCurve, String)> {
    let mut out: Vec<(FCurve, Rat)> = values
        .iter()
        .filter(|(_, v)| *v <= Rat::zero())
        .cloned()
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out.into_iter().map(|(c, v)| (c, v.to_string())).collect()
}

/// Intersect a class on the stable space with every F-curve and classify:
/// all positive means F-ample; nonnegative with zero set exactly the
/// elliptic tail curve is the strict-except-tail case; otherwise F-nef
/// or not, with witnesses.
pub fn brute_force_verdict(l: &DivisorClass) -> Result<PositivityVerdict> {
    check_space(l, Space::Mgn)?;
    let values: Vec<(FCurve, Rat)> = cached_fcurves(l.ambient())
        .iter()
        .map(|c| {
            let v = intersect(l, c).expect("enumerated curves are valid");
            (c.clone(), v)
        })
        .collect();
    let status = if values.iter().any(|(_, v)| *v < Rat::zero()) {
        PositivityStatus::NotFNef
    } else {
        let zeros: Vec<&FCurve> = values
            .iter()
            .filter(|(_, v)| v.is_zero())
            .map(|(c, _)| c)
            .collect();
        if zeros.is_empty() {
            PositivityStatus::FAmple
        } else if zeros == [&FCurve::Ell] {
            PositivityStatus::FNefStrictExceptEll
        } else {
            PositivityStatus::FNef
        }
    };
    Ok(PositivityVerdict {
        status,
        witnesses: witness_list(&values),
    })
}

/// Which question the stable-space closed form answers.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FnefMode {
    /// Strict positivity on every F-curve.
    Ample,
    /// Nonnegativity with the elliptic tail curve as the only zero.
    NefEllOnly,
}

/// Per-condition breakdown of the stable-space closed form for an
/// adjoint divisor.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FnefChecks {
    /// How `alpha_irr` compares to the elliptic-tail wall
    /// `(9 - a + alpha_(1,{})) / 12` (`None` for `g = 0`).
    pub ell_wall: Option<Ordering>,
    /// `alpha_irr < 1 + alpha_{i,I}/2` over the separating family.
    pub separating: bool,
    /// `alpha_{i,I} + alpha_{j,J} - alpha_{i+j,I+J} < 2` over the
    /// two-part family.
    pub two_part: bool,
    /// The three-part combination `< 2` over the three-part family.
    pub three_part: bool,
}

fn raw_parts(ambient: MarkedGenus) -> Vec<(u32, BTreeSet<u32>)> {
    let marks: Vec<u32> = ambient.marks().collect();
    let mut out = Vec::new();
    for i in 0..=ambient.g {
        for set in subsets(&marks) {
            if i == 0 && set.is_empty() {
                continue;
            }
            out.push((i, set));
        }
    }
    out
}

fn disjoint(a: &BTreeSet<u32>, b: &BTreeSet<u32>) -> bool {
    a.is_disjoint(b)
}

fn union2(a: &BTreeSet<u32>, b: &BTreeSet<u32>) -> Vec<u32> {
    a.union(b).copied().collect()
}

/// Evaluate the closed-form conditions on the coefficients of an adjoint
/// divisor on the stable space.
pub fn fnef_checks(p: &AdjointParams) -> Result<FnefChecks> {
    check_space_params(p, Space::Mgn)?;
    let amb = p.ambient();
    let g = amb.g;
    let two = int(2);

    let ell_wall = if g >= 1 {
        // with no [1,{}] class the tail term drops out of the wall
        let wall = match p.alpha_one_empty() {
            Some(alpha_one) => (int(9) - p.a() + alpha_one) / int(12),
            None => (int(11) - p.a()) / int(12),
        };
        Some(p.alpha_irr().cmp(&wall))
    } else {
        None
    };

    let mut separating = true;
    let marks: Vec<u32> = amb.marks().collect();
    'sep: for i in 1..g {
        for set in subsets(&marks) {
            let bound = int(1) + p.alpha_of(i, set)? / int(2);
            if *p.alpha_irr() >= bound {
                separating = false;
                break 'sep;
            }
        }
    }

    let parts = raw_parts(amb);
    let mut two_part = true;
    'two: for (pi, (i, set_i)) in parts.iter().enumerate() {
        for (j, set_j) in parts.iter().skip(pi) {
            if i + j + 1 > g || !disjoint(set_i, set_j) {
                continue;
            }
            let lhs = p.alpha_of(*i, set_i.iter().copied())?
                + p.alpha_of(*j, set_j.iter().copied())?
                - p.alpha_of(i + j, union2(set_i, set_j))?;
            if lhs >= two {
                two_part = false;
                break 'two;
            }
        }
    }

    let mut three_part = true;
    'three: for (pi, (i, set_i)) in parts.iter().enumerate() {
        for (pj, (j, set_j)) in parts.iter().enumerate().skip(pi) {
            if i + j > g || !disjoint(set_i, set_j) {
                continue;
            }
            for (k, set_k) in parts.iter().skip(pj) {
                if i + j + k > g || !disjoint(set_i, set_k) || !disjoint(set_j, set_k) {
                    continue;
                }
                // the residual fourth part must not be (0, {})
                let used: BTreeSet<u32> = set_i
                    .iter()
                    .chain(set_j.iter())
                    .chain(set_k.iter())
                    .copied()
                    .collect();
                if i + j + k == g && used.len() as u32 == amb.n {
                    continue;
                }
                let lhs = p.alpha_of(*i, set_i.iter().copied())?
                    + p.alpha_of(*j, set_j.iter().copied())?
                    + p.alpha_of(*k, set_k.iter().copied())?
                    - p.alpha_of(i + j, union2(set_i, set_j))?
                    - p.alpha_of(i + k, union2(set_i, set_k))?
                    - p.alpha_of(j + k, union2(set_j, set_k))?
                    + p.alpha_of(i + j + k, used.iter().copied())?;
                if lhs >= two {
                    three_part = false;
                    break 'three;
                }
            }
        }
    }

    Ok(FnefChecks {
        ell_wall,
        separating,
        two_part,
        three_part,
    })
}

/// The closed-form F-positivity test for adjoint divisors on the stable
/// space. With [`FnefMode::Ample`] it decides F-ampleness; with
/// [`FnefMode::NefEllOnly`] it decides F-nefness with the elliptic tail
/// curve as the only degenerate curve.
pub fn adjoint_fnef_closed_form(p: &AdjointParams, mode: FnefMode) -> Result<bool> {
    let checks = fnef_checks(p)?;
    let rest = checks.separating && checks.two_part && checks.three_part;
    Ok(match mode {
        FnefMode::Ample => {
            let ell = match checks.ell_wall {
                Some(ord) => ord == Ordering::Greater,
                None => true,
            };
            ell && rest
        }
        FnefMode::NefEllOnly => {
            let ell = match checks.ell_wall {
                Some(ord) => ord == Ordering::Equal,
                // without an elliptic tail curve the zero set cannot be it
                None => false,
            };
            ell && rest
        }
    })
}

fn check_ps_instance(op: &'static str, ambient: MarkedGenus) -> Result<()> {
    let (g, n) = ambient.pair();
    if g == 0 || [(1, 0), (1, 1), (2, 0), (1, 2)].contains(&(g, n)) {
        return Err(DomainError::ExcludedInstance { op, g, n });
    }
    Ok(())
}

/// Per-condition breakdown of the pseudostable closed form, evaluated
/// against a subset `T`. Names follow the condition numbering of the
/// inequality system.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PsFnefChecks {
    /// (i) `alpha_irr >= (7-a)/10` with equality exactly when `irr`
    /// survives in the admissible reduction of `T` (vacuous for `g < 2`).
    pub cond_i: bool,
    /// (ii)(a) two-part combinations away from `[1,{}]` stay below 2.
    pub cond_ii_a: bool,
    /// (ii)(b) `12 alpha_irr - 7 + a >= alpha_{t,I} + alpha_{t+1,I}` per
    /// bridge pair, with equality exactly on the pairs inside `T`.
    pub cond_ii_b: bool,
    /// (iii)(a) three-part combinations away from `[1,{}]` stay below 2.
    pub cond_iii_a: bool,
    /// (iii)(b) three-part curves through one `[1,{}]` part.
    pub cond_iii_b: bool,
    /// (iii)(c) three-part curves through two `[1,{}]` parts.
    pub cond_iii_c: bool,
    /// (iii)(d) the upper walls on `alpha_irr`, with dedicated branches
    /// for `(3,0)` and `(4,0)`.
    pub cond_iii_d: bool,
}

impl PsFnefChecks {
    pub fn all(&self) -> bool {
        self.cond_i
            && self.cond_ii_a
            && self.cond_ii_b
            && self.cond_iii_a
            && self.cond_iii_b
            && self.cond_iii_c
            && self.cond_iii_d
    }
}

/// Evaluate the pseudostable closed form for an adjoint divisor on the
/// pseudostable space against a subset `T`.
pub fn ps_fnef_checks(p: &AdjointParams, t: &TSubset) -> Result<PsFnefChecks> {
    check_space_params(p, Space::MgnPs)?;
    let amb = p.ambient();
    check_ambient(amb, t.ambient())?;
    check_ps_instance("ps_fnef_checks", amb)?;
    let g = amb.g;
    let instance = amb.pair();
    let reduced = t.admissible_reduction();
    let one_empty = amb.one_empty_class();
    let is_one_empty = |i: u32, marks: &BTreeSet<u32>| -> bool {
        amb.pair_class(i, marks.iter().copied()).ok().as_ref() == one_empty.as_ref()
    };
    let two = int(2);

    // (i): the contracted-irr wall
    let cond_i = if g >= 2 {
        let wall = (int(7) - p.a()) / int(10);
        match p.alpha_irr().cmp(&wall) {
            Ordering::Equal => reduced.contains_irr(),
            Ordering::Greater => !reduced.contains_irr(),
            Ordering::Less => false,
        }
    } else {
        true
    };

    // parts with class away from [1,{}], for the conditions that may not
    // mention its multiplier
    let parts = raw_parts(amb);
    let plain_parts: Vec<&(u32, BTreeSet<u32>)> = parts
        .iter()
        .filter(|(i, set)| !is_one_empty(*i, set))
        .collect();

    // (ii)(a): two-part curves with no index hitting [1,{}]
    let mut cond_ii_a = true;
    'iia: for (pi, (i, set_i)) in plain_parts.iter().enumerate() {
        for (j, set_j) in plain_parts.iter().skip(pi) {
            if i + j + 1 > g || !disjoint(set_i, set_j) {
                continue;
            }
            let union: BTreeSet<u32> = set_i.union(set_j).copied().collect();
            if is_one_empty(i + j, &union) {
                continue;
            }
            let lhs = p.alpha_of(*i, set_i.iter().copied())?
                + p.alpha_of(*j, set_j.iter().copied())?
                - p.alpha_of(i + j, union)?;
            if lhs >= two {
                cond_ii_a = false;
                break 'iia;
            }
        }
    }

    // (ii)(b): one wall per bridge pair, equality exactly inside T
    let mut cond_ii_b = true;
    let lhs_bridge = int(12) * p.alpha_irr() - int(7) + p.a();
    for bridge in bridge_curves(amb, None) {
        if let BridgeType::Pair { low, high } = &bridge {
            let rhs = p.alpha(low) + p.alpha(high);
            let ok = match lhs_bridge.cmp(&rhs) {
                Ordering::Equal => bridge.contained_in(&reduced),
                Ordering::Greater => !bridge.contained_in(&reduced),
                Ordering::Less => false,
            };
            if !ok {
                cond_ii_b = false;
                break;
            }
        }
    }

    // (iii)(a): three-part curves with all four parts away from [1,{}]
    let mut cond_iii_a = true;
    'iiia: for (pi, (i, set_i)) in plain_parts.iter().enumerate() {
        for (pj, (j, set_j)) in plain_parts.iter().enumerate().skip(pi) {
            if i + j > g || !disjoint(set_i, set_j) {
                continue;
            }
            for (k, set_k) in plain_parts.iter().skip(pj) {
                if i + j + k > g || !disjoint(set_i, set_k) || !disjoint(set_j, set_k) {
                    continue;
                }
                let used: BTreeSet<u32> = set_i
                    .iter()
                    .chain(set_j.iter())
                    .chain(set_k.iter())
                    .copied()
                    .collect();
                let rest_genus = g - i - j - k;
                let rest_marks: BTreeSet<u32> = amb.marks().filter(|m| !used.contains(m)).collect();
                if rest_genus == 0 && rest_marks.is_empty() {
                    continue;
                }
                if is_one_empty(rest_genus, &rest_marks) {
                    continue;
                }
                let lhs = p.alpha_of(*i, set_i.iter().copied())?
                    + p.alpha_of(*j, set_j.iter().copied())?
                    + p.alpha_of(*k, set_k.iter().copied())?
                    - p.alpha_of(i + j, union2(set_i, set_j))?
                    - p.alpha_of(i + k, union2(set_i, set_k))?
                    - p.alpha_of(j + k, union2(set_j, set_k))?
                    + p.alpha_of(i + j + k, used.iter().copied())?;
                if lhs >= two {
                    cond_iii_a = false;
                    break 'iiia;
                }
            }
        }
    }

    // (iii)(b): one part of class [1,{}] and two plain parts
    let mut cond_iii_b = true;
    let rhs_one = int(11) - int(12) * p.alpha_irr() - p.a();
    'iiib: for (pi, (i, set_i)) in plain_parts.iter().enumerate() {
        for (j, set_j) in plain_parts.iter().skip(pi) {
            if 1 + i + j > g || !disjoint(set_i, set_j) {
                continue;
            }
            let used: BTreeSet<u32> = set_i.iter().chain(set_j.iter()).copied().collect();
            let rest_genus = g - 1 - i - j;
            let rest_marks: BTreeSet<u32> = amb.marks().filter(|m| !used.contains(m)).collect();
            if rest_genus == 0 && rest_marks.is_empty() {
                continue;
            }
            if is_one_empty(rest_genus, &rest_marks) {
                continue;
            }
            let lhs = (p.alpha_of(*i, set_i.iter().copied())?
                - p.alpha_of(i + 1, set_i.iter().copied())?)
                + (p.alpha_of(*j, set_j.iter().copied())?
                    - p.alpha_of(j + 1, set_j.iter().copied())?)
                + (p.alpha_of(i + j + 1, used.iter().copied())?
                    - p.alpha_of(i + j, used.iter().copied())?);
            if lhs >= rhs_one {
                cond_iii_b = false;
                break 'iiib;
            }
        }
    }

    // (iii)(c): two parts of class [1,{}] and one plain part
    let mut cond_iii_c = true;
    if g >= 2 && !is_one_empty(2, &BTreeSet::new()) {
        let rhs_two = int(20) - int(2) * (int(12) * p.alpha_irr() + p.a());
        for (i, set_i) in &plain_parts {
            if 2 + i > g {
                continue;
            }
            let rest_genus = g - 2 - i;
            let rest_marks: BTreeSet<u32> = amb.marks().filter(|m| !set_i.contains(m)).collect();
            if rest_genus == 0 && rest_marks.is_empty() {
                continue;
            }
            if is_one_empty(rest_genus, &rest_marks) {
                continue;
            }
            let lhs = (p.alpha_of(*i, set_i.iter().copied())?
                - p.alpha_of(i + 1, set_i.iter().copied())?)
                + (p.alpha_of(i + 2, set_i.iter().copied())?
                    - p.alpha_of(i + 1, set_i.iter().copied())?)
                - p.alpha_of(2, [])?;
            if lhs >= rhs_two {
                cond_iii_c = false;
                break;
            }
        }
    }

    // (iii)(d): upper walls on alpha_irr
    let mut cond_iii_d = true;
    if instance == (3, 0) {
        let wall = (int(11) - p.a()) / int(12);
        cond_iii_d = p.alpha_irr() < &wall;
    } else if instance == (4, 0) {
        let wall = (rat(19, 2) - p.a() + rat(3, 4) * p.alpha_of(2, [])?) / int(12);
        cond_iii_d = p.alpha_irr() < &wall;
    } else if g >= 2 {
        // two-part curves pairing [1,{}] with a plain part
        for (i, set_i) in &plain_parts {
            if i + 2 > g {
                continue;
            }
            if is_one_empty(i + 1, set_i) {
                continue;
            }
            let wall = (int(11) - p.a() + p.alpha_of(i + 1, set_i.iter().copied())?
                - p.alpha_of(*i, set_i.iter().copied())?)
                / int(12);
            if p.alpha_irr() >= &wall {
                cond_iii_d = false;
                break;
            }
        }
        // the two-part curve with both parts of class [1,{}]
        if cond_iii_d && g >= 3 && !is_one_empty(2, &BTreeSet::new()) {
            let wall = (int(10) - p.a() + p.alpha_of(2, [])? / int(2)) / int(12);
            if p.alpha_irr() >= &wall {
                cond_iii_d = false;
            }
        }
        // the three-part curve with all three parts of class [1,{}]
        if cond_iii_d && g >= 3 {
            let rest_genus = g - 3;
            let rest_marks: BTreeSet<u32> = amb.marks().collect();
            let valid = !(rest_genus == 0 && rest_marks.is_empty());
            if valid && !is_one_empty(rest_genus, &rest_marks) {
                let wall = (rat(29, 3) - p.a() + p.alpha_of(2, [])? - p.alpha_of(3, [])? / int(3))
                    / int(12);
                if p.alpha_irr() >= &wall {
                    cond_iii_d = false;
                }
            }
        }
    }

    Ok(PsFnefChecks {
        cond_i,
        cond_ii_a,
        cond_ii_b,
        cond_iii_a,
        cond_iii_b,
        cond_iii_c,
        cond_iii_d,
    })
}

/// The closed-form test: the pullback of the adjoint divisor is F-nef
/// with zero set exactly the F-curves over the face of `T`.
pub fn ps_adjoint_fnef_for_t(p: &AdjointParams, t: &TSubset) -> Result<bool> {
    Ok(ps_fnef_checks(p, t)?.all())
}

type VectorKey = Vec<(BasisClass, Rat)>;

fn vector_key(curve: &FCurve, ambient: MarkedGenus) -> Result<VectorKey> {
    Ok(intersection_vector(curve, ambient)?.into_iter().collect())
}

/// Brute-force verdict for a class on the pseudostable space against a
/// subset `T`: pull back, intersect with every F-curve, and compare the
/// zero set (as numerical classes) with the F-curves over the face of
/// `T`.
pub fn ps_verdict(l: &DivisorClass, t: &TSubset) -> Result<PositivityVerdict> {
    check_space(l, Space::MgnPs)?;
    let amb = l.ambient();
    check_ambient(amb, t.ambient())?;
    check_ps_instance("ps_verdict", amb)?;
    let pulled = pullback_upsilon(l)?;
    let values: Vec<(FCurve, Rat)> = cached_fcurves(amb)
        .iter()
        .map(|c| {
            let v = intersect(&pulled, c).expect("enumerated curves are valid");
            (c.clone(), v)
        })
        .collect();
    let status = if values.iter().any(|(_, v)| *v < Rat::zero()) {
        PositivityStatus::NotFNef
    } else {
        let keys = cached_vector_keys(amb);
        let zero_keys: BTreeSet<&VectorKey> = values
            .iter()
            .filter(|(_, v)| v.is_zero())
            .map(|(c, _)| keys.get(c).expect("enumerated curves are keyed"))
            .collect();
        let expected_owned: Vec<VectorKey> = fcurves_in_ne_upsilon_t(amb, t)?
            .iter()
            .map(|c| match keys.get(c) {
                Some(key) => Ok(key.clone()),
                None => vector_key(c, amb),
            })
            .collect::<Result<_>>()?;
        let expected: BTreeSet<&VectorKey> = expected_owned.iter().collect();
        if zero_keys == expected {
            PositivityStatus::FNefOnExactSet
        } else {
            PositivityStatus::FNef
        }
    };
    Ok(PositivityVerdict {
        status,
        witnesses: witness_list(&values),
    })
}

/// Whether the pullback of `L` is F-nef and vanishes exactly on the
/// F-curves over the face of `T`.
pub fn verdict_matches_t(l: &DivisorClass, t: &TSubset) -> Result<bool> {
    Ok(ps_verdict(l, t)?.status == PositivityStatus::FNefOnExactSet)
}
