//! F-curves, elliptic bridge curves, and their intersection numbers.
//!
//! The F-curves are the one-dimensional strata of the stratification by
//! dual graphs. Up to numerical equivalence they fall into six families:
//! the elliptic tail curve, the irreducible four-point curve (`g >= 3`),
//! and the families parameterized by one, one, two, or three parts
//! `(i, I)` of `(g, [n])`. Numerical equivalence is decided by the
//! intersection vector against the spanning classes, which is exact.
//!
//! For a class `L = a*lambda - b_irr*delta_irr - sum b_{i,I} delta_{i,I}`
//! the intersections are
//!
//! 1. `L . Ell          = a - 12 b_irr + b_(1,{})`
//! 2. `L . FIrr         = b_irr`
//! 3. `L . F3(i,I)      = b_{i,I}`
//! 4. `L . Fs(i,I)      = 2 b_irr - b_{i,I}`
//! 5. `L . F5((i,I),(j,J))         = b_{i,I} + b_{j,J} - b_{i+j,I+J}`
//! 6. `L . F6((i,I),(j,J),(k,K))   = b_{i,I} + b_{j,J} + b_{k,K}
//!        - b_{i+j,I+J} - b_{i+k,I+K} - b_{j+k,J+K} + b_{i+j+k,I+J+K}`
//!
//! with all lookups canonicalized (so stabilization is absorbed by the
//! convention `delta_(0,{k}) = -psi_k`) and absent classes read as zero.
//!
//! On the pseudostable space the elliptic bridge curves of type `{irr}`
//! (for `g >= 2`) and `{[t,I],[t+1,I]}` (classes away from `[1,{}]`)
//! intersect `L = a*lambda + b_irr*delta_irr + sum b_{i,I} delta_{i,I}`
//! in `a + 10 b_irr` and `a + 12 b_irr - b_{t,I} - b_{t+1,I}`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::divisor::{check_space, DivisorClass, Space};
use crate::error::{DomainError, Result};
use crate::index_set::{subsets, MarkedGenus, PairIndex, TSubset};
use crate::rat::{int, Rat};

/// One raw part `(i, I)` of an F-curve parameterization. Unlike
/// [`PairIndex`] this is not taken modulo complementation.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CurvePart {
    pub genus: u32,
    pub marks: BTreeSet<u32>,
}

impl CurvePart {
    pub fn new(genus: u32, marks: impl IntoIterator<Item = u32>) -> Self {
        CurvePart {
            genus,
            marks: marks.into_iter().collect(),
        }
    }

    fn is_trivial(&self) -> bool {
        self.genus == 0 && self.marks.is_empty()
    }

    fn disjoint(&self, other: &CurvePart) -> bool {
        self.marks.is_disjoint(&other.marks)
    }
}

impl Ord for CurvePart {
    fn cmp(&self, other: &Self) -> Ordering {
        self.genus
            .cmp(&other.genus)
            .then(self.marks.len().cmp(&other.marks.len()))
            .then_with(|| self.marks.iter().cmp(other.marks.iter()))
    }
}

impl PartialOrd for CurvePart {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CurvePart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inner: Vec<String> = self.marks.iter().map(|m| m.to_string()).collect();
        write!(f, "({},{{{}}})", self.genus, inner.join(" "))
    }
}

/// An F-curve, identified by family and raw parts.
///
/// Structural equality compares parameters; numerical equivalence is
/// decided by [`intersection_vector`], and [`enumerate_fcurves`] returns
/// one representative per intersection vector.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum FCurve {
    Ell,
    FIrr,
    F3(CurvePart),
    Fs(CurvePart),
    F5(CurvePart, CurvePart),
    F6(CurvePart, CurvePart, CurvePart),
}

impl FCurve {
    pub fn family_name(&self) -> &'static str {
        match self {
            FCurve::Ell => "Ell",
            FCurve::FIrr => "FIrr",
            FCurve::F3(_) => "F3",
            FCurve::Fs(_) => "Fs",
            FCurve::F5(..) => "F5",
            FCurve::F6(..) => "F6",
        }
    }

    pub fn parts(&self) -> Vec<&CurvePart> {
        match self {
            FCurve::Ell | FCurve::FIrr => vec![],
            FCurve::F3(p) | FCurve::Fs(p) => vec![p],
            FCurve::F5(p, q) => vec![p, q],
            FCurve::F6(p, q, r) => vec![p, q, r],
        }
    }

    /// Check the family constraints against an ambient `(g, n)`.
    pub fn validate(&self, ambient: MarkedGenus) -> Result<()> {
        let g = ambient.g;
        let bad = |reason: String| DomainError::InvalidCurve {
            family: self.family_name(),
            reason,
        };
        for part in self.parts() {
            if let Some(&m) = part.marks.iter().find(|&&m| m == 0 || m > ambient.n) {
                return Err(DomainError::MarkOutOfRange {
                    mark: m,
                    n: ambient.n,
                });
            }
        }
        match self {
            FCurve::Ell => {
                if g < 1 {
                    return Err(bad("needs g >= 1".into()));
                }
            }
            FCurve::FIrr => {
                if g < 3 {
                    return Err(bad("needs g >= 3".into()));
                }
            }
            FCurve::F3(p) => {
                if p.genus + 2 > g {
                    return Err(bad(format!("needs {} <= g - 2", p.genus)));
                }
                if p.is_trivial() {
                    return Err(bad("part (0,{}) not allowed".into()));
                }
            }
            FCurve::Fs(p) => {
                if p.genus < 1 || p.genus + 1 > g {
                    return Err(bad(format!("needs 1 <= {} <= g - 1", p.genus)));
                }
            }
            FCurve::F5(p, q) => {
                if p.is_trivial() || q.is_trivial() {
                    return Err(bad("part (0,{}) not allowed".into()));
                }
                if !p.disjoint(q) {
                    return Err(bad("parts must carry disjoint marks".into()));
                }
                if p.genus + q.genus + 1 > g {
                    return Err(bad("needs i + j <= g - 1".into()));
                }
            }
            FCurve::F6(p, q, r) => {
                let parts = [p, q, r];
                if parts.iter().any(|x| x.is_trivial()) {
                    return Err(bad("part (0,{}) not allowed".into()));
                }
                if !(p.disjoint(q) && p.disjoint(r) && q.disjoint(r)) {
                    return Err(bad("parts must carry pairwise disjoint marks".into()));
                }
                let total = p.genus + q.genus + r.genus;
                if total > g {
                    return Err(bad("needs i + j + k <= g".into()));
                }
                if f6_fourth(ambient, p, q, r).is_trivial() {
                    return Err(bad("residual part (0,{}) not allowed".into()));
                }
            }
        }
        Ok(())
    }

    /// Sort the stored parts into canonical order. For the three-part
    /// family the derived fourth part participates in the sort and the
    /// three smallest parts are stored.
    pub fn canonicalize(self, ambient: MarkedGenus) -> Result<FCurve> {
        self.validate(ambient)?;
        Ok(match self {
            FCurve::F5(p, q) => {
                let (p, q) = if p <= q { (p, q) } else { (q, p) };
                FCurve::F5(p, q)
            }
            FCurve::F6(p, q, r) => {
                let fourth = f6_fourth(ambient, &p, &q, &r);
                let mut parts = vec![p, q, r, fourth];
                parts.sort();
                parts.truncate(3);
                let mut it = parts.into_iter();
                FCurve::F6(it.next().unwrap(), it.next().unwrap(), it.next().unwrap())
            }
            other => other,
        })
    }
}

impl fmt::Display for FCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.family_name())?;
        let parts = self.parts();
        if !parts.is_empty() {
            write!(f, "[")?;
            for (k, p) in parts.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

fn f6_fourth(ambient: MarkedGenus, p: &CurvePart, q: &CurvePart, r: &CurvePart) -> CurvePart {
    let genus = ambient.g - p.genus - q.genus - r.genus;
    let marks = ambient
        .marks()
        .filter(|m| !p.marks.contains(m) && !q.marks.contains(m) && !r.marks.contains(m))
        .collect();
    CurvePart { genus, marks }
}

/// Coefficient `b_{i,I}` of the normalized expansion
/// `L = a*lambda - b_irr*delta_irr - sum b_{i,I} delta_{i,I}`, i.e. the
/// negated stored coefficient of the canonical class of `(i, I)`.
/// Pairs outside the index set contribute zero.
fn b_of(l: &DivisorClass, i: u32, marks: impl IntoIterator<Item = u32>) -> Rat {
    match l.coeff_of(i, marks) {
        Ok(c) => -c,
        Err(_) => Rat::zero(),
    }
}

/// Intersection number of a class on the stable space with an F-curve.
pub fn intersect(l: &DivisorClass, curve: &FCurve) -> Result<Rat> {
    check_space(l, Space::Mgn)?;
    curve.validate(l.ambient())?;
    let b_irr = -l.irr_coeff();
    let value = match curve {
        FCurve::Ell => l.lambda_coeff() - int(12) * &b_irr + b_of(l, 1, []),
        FCurve::FIrr => b_irr,
        FCurve::F3(p) => b_of(l, p.genus, p.marks.iter().copied()),
        FCurve::Fs(p) => int(2) * b_irr - b_of(l, p.genus, p.marks.iter().copied()),
        FCurve::F5(p, q) => {
            b_of(l, p.genus, p.marks.iter().copied()) + b_of(l, q.genus, q.marks.iter().copied())
                - b_of(
                    l,
                    p.genus + q.genus,
                    p.marks.union(&q.marks).copied().collect::<Vec<_>>(),
                )
        }
        FCurve::F6(p, q, r) => {
            let pair = |x: &CurvePart, y: &CurvePart| {
                b_of(
                    l,
                    x.genus + y.genus,
                    x.marks.union(&y.marks).copied().collect::<Vec<_>>(),
                )
            };
            let triple_marks: Vec<u32> = p
                .marks
                .iter()
                .chain(q.marks.iter())
                .chain(r.marks.iter())
                .copied()
                .collect();
            b_of(l, p.genus, p.marks.iter().copied())
                + b_of(l, q.genus, q.marks.iter().copied())
                + b_of(l, r.genus, r.marks.iter().copied())
                - pair(p, q)
                - pair(p, r)
                - pair(q, r)
                + b_of(l, p.genus + q.genus + r.genus, triple_marks)
        }
    };
    Ok(value)
}

/// One coordinate of the spanning set, used to key intersection vectors.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum BasisClass {
    Lambda,
    Irr,
    Boundary(PairIndex),
}

/// The linear functional of a curve as a sparse vector over the spanning
/// set: `intersect(L, C) = sum v(e) * coeff_L(e)`. Computed by evaluating
/// the intersection on each basis class; used as the numerical-equivalence
/// key.
pub fn intersection_vector(
    curve: &FCurve,
    ambient: MarkedGenus,
) -> Result<BTreeMap<BasisClass, Rat>> {
    curve.validate(ambient)?;
    let mut v = BTreeMap::new();
    if ambient.g > 0 {
        let mut l = DivisorClass::zero(Space::Mgn, ambient);
        l.set_lambda(int(1))?;
        let val = intersect(&l, curve)?;
        if !val.is_zero() {
            v.insert(BasisClass::Lambda, val);
        }
        let mut l = DivisorClass::zero(Space::Mgn, ambient);
        l.set_irr(int(1))?;
        let val = intersect(&l, curve)?;
        if !val.is_zero() {
            v.insert(BasisClass::Irr, val);
        }
    }
    for idx in ambient.pair_classes() {
        let mut l = DivisorClass::zero(Space::Mgn, ambient);
        l.add_boundary_class(idx.clone(), int(1))?;
        let val = intersect(&l, curve)?;
        if !val.is_zero() {
            v.insert(BasisClass::Boundary(idx), val);
        }
    }
    Ok(v)
}

/// Every F-curve of the ambient space up to numerical equivalence:
/// families in catalogue order, parameters in lexicographic order, then
/// deduplicated by intersection vector keeping first occurrences.
///
/// Enumeration is pure, so results are memoized per ambient.
pub fn enumerate_fcurves(ambient: MarkedGenus) -> Vec<FCurve> {
    cached_fcurves(ambient).as_ref().clone()
}

pub(crate) fn cached_fcurves(ambient: MarkedGenus) -> Arc<Vec<FCurve>> {
    static CACHE: OnceLock<Mutex<BTreeMap<MarkedGenus, Arc<Vec<FCurve>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    let mut cache = cache.lock().expect("curve cache lock");
    cache
        .entry(ambient)
        .or_insert_with(|| Arc::new(compute_fcurves(ambient)))
        .clone()
}

/// Memoized intersection vectors of the enumerated curves.
pub(crate) fn cached_vector_keys(
    ambient: MarkedGenus,
) -> Arc<BTreeMap<FCurve, Vec<(BasisClass, Rat)>>> {
    type KeyMap = BTreeMap<FCurve, Vec<(BasisClass, Rat)>>;
    static CACHE: OnceLock<Mutex<BTreeMap<MarkedGenus, Arc<KeyMap>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    let mut cache = cache.lock().expect("vector cache lock");
    cache
        .entry(ambient)
        .or_insert_with(|| {
            let map = cached_fcurves(ambient)
                .iter()
                .map(|c| {
                    let key = intersection_vector(c, ambient)
                        .expect("enumerated curves are valid")
                        .into_iter()
                        .collect();
                    (c.clone(), key)
                })
                .collect();
            Arc::new(map)
        })
        .clone()
}

fn compute_fcurves(ambient: MarkedGenus) -> Vec<FCurve> {
    let g = ambient.g;
    let marks: Vec<u32> = ambient.marks().collect();
    let mut candidates: Vec<FCurve> = Vec::new();

    if g >= 1 {
        candidates.push(FCurve::Ell);
    }
    if g >= 3 {
        candidates.push(FCurve::FIrr);
    }

    let all_parts: Vec<CurvePart> = {
        let mut out = Vec::new();
        for i in 0..=g {
            for set in subsets(&marks) {
                out.push(CurvePart {
                    genus: i,
                    marks: set,
                });
            }
        }
        out.sort();
        out
    };

    let mut family: BTreeSet<FCurve> = BTreeSet::new();
    for p in &all_parts {
        if p.genus + 2 <= g && !p.is_trivial() {
            family.insert(FCurve::F3(p.clone()));
        }
    }
    candidates.extend(family);

    let mut family: BTreeSet<FCurve> = BTreeSet::new();
    for p in &all_parts {
        if p.genus >= 1 && p.genus < g {
            family.insert(FCurve::Fs(p.clone()));
        }
    }
    candidates.extend(family);

    let mut family: BTreeSet<FCurve> = BTreeSet::new();
    for p in &all_parts {
        for q in &all_parts {
            if q < p {
                continue;
            }
            if let Ok(c) = FCurve::F5(p.clone(), q.clone()).canonicalize(ambient) {
                family.insert(c);
            }
        }
    }
    candidates.extend(family);

    let mut family: BTreeSet<FCurve> = BTreeSet::new();
    for p in &all_parts {
        for q in &all_parts {
            if q < p {
                continue;
            }
            for r in &all_parts {
                if r < q {
                    continue;
                }
                if let Ok(c) = FCurve::F6(p.clone(), q.clone(), r.clone()).canonicalize(ambient) {
                    family.insert(c);
                }
            }
        }
    }
    candidates.extend(family);

    let mut seen: BTreeSet<Vec<(BasisClass, Rat)>> = BTreeSet::new();
    let mut out = Vec::new();
    for c in candidates {
        let key: Vec<(BasisClass, Rat)> = intersection_vector(&c, ambient)
            .expect("enumerated curves are valid")
            .into_iter()
            .collect();
        if seen.insert(key) {
            out.push(c);
        }
    }
    out
}

/// An elliptic bridge curve on the pseudostable space, identified by its
/// type: `{irr}`, or the class set `{[t, I], [t+1, I]}` stored sorted.
/// For `n = 0` and odd `g` the middle pair collapses to a single class.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum BridgeType {
    Irr,
    Pair { low: PairIndex, high: PairIndex },
}

impl BridgeType {
    /// The bridge of type `{[t, I], [t+1, I]}` from a raw `(t, I)`.
    /// Both classes must exist and differ from `[1, {}]`.
    pub fn pair(
        ambient: MarkedGenus,
        tau: u32,
        marks: impl IntoIterator<Item = u32> + Clone,
    ) -> Result<BridgeType> {
        let a = ambient.pair_class(tau, marks.clone())?;
        let b = ambient.pair_class(tau + 1, marks)?;
        let one_empty = ambient.one_empty_class();
        if Some(&a) == one_empty.as_ref() || Some(&b) == one_empty.as_ref() {
            return Err(DomainError::InvalidCurve {
                family: "bridge",
                reason: "type may not contain [1,{}]".into(),
            });
        }
        let (low, high) = if a <= b { (a, b) } else { (b, a) };
        Ok(BridgeType::Pair { low, high })
    }

    /// The classes in the type (one entry when the pair collapses).
    pub fn type_classes(&self) -> Vec<&PairIndex> {
        match self {
            BridgeType::Irr => vec![],
            BridgeType::Pair { low, high } => {
                if low == high {
                    vec![low]
                } else {
                    vec![low, high]
                }
            }
        }
    }

    /// How often a class occurs among the two ends of the pair.
    fn multiplicity(&self, idx: &PairIndex) -> u32 {
        match self {
            BridgeType::Irr => 0,
            BridgeType::Pair { low, high } => u32::from(low == idx) + u32::from(high == idx),
        }
    }

    /// Whether the type is contained in a subset.
    pub fn contained_in(&self, t: &TSubset) -> bool {
        match self {
            BridgeType::Irr => t.contains_irr(),
            BridgeType::Pair { low, high } => t.contains_pair(low) && t.contains_pair(high),
        }
    }
}

impl fmt::Display for BridgeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BridgeType::Irr => write!(f, "C(irr)"),
            BridgeType::Pair { low, high } => write!(f, "C({low},{high})"),
        }
    }
}

impl Serialize for BridgeType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire {
            bridge: &'static str,
            #[serde(skip_serializing_if = "Vec::is_empty")]
            classes: Vec<(u32, Vec<u32>)>,
        }
        let wire = match self {
            BridgeType::Irr => Wire {
                bridge: "irr",
                classes: Vec::new(),
            },
            BridgeType::Pair { .. } => Wire {
                bridge: "pair",
                classes: self
                    .type_classes()
                    .into_iter()
                    .map(|c| (c.genus(), c.marks().iter().copied().collect()))
                    .collect(),
            },
        };
        wire.serialize(s)
    }
}

/// The elliptic bridge curves of the ambient space, optionally filtered
/// by type containment in `T`: `C(irr)` for `g >= 2`, and one bridge per
/// consecutive class pair avoiding `[1, {}]`.
pub fn bridge_curves(ambient: MarkedGenus, filter: Option<&TSubset>) -> Vec<BridgeType> {
    let mut out = Vec::new();
    if ambient.g >= 2 && filter.is_none_or(|t| t.contains_irr()) {
        out.push(BridgeType::Irr);
    }
    let marks: Vec<u32> = ambient.marks().collect();
    let mut seen: BTreeSet<BridgeType> = BTreeSet::new();
    for tau in 0..ambient.g {
        for set in subsets(&marks) {
            if let Ok(b) = BridgeType::pair(ambient, tau, set.iter().copied()) {
                if filter.is_none_or(|t| b.contained_in(t)) {
                    seen.insert(b);
                }
            }
        }
    }
    out.extend(seen);
    out
}

/// Intersection of a class on the pseudostable space with a bridge:
/// `a + 10 b_irr` for `C(irr)`, `a + 12 b_irr - b_{t,I} - b_{t+1,I}` for
/// a pair (coefficients as stored, `[1,{}]` reading as zero).
pub fn intersect_bridge(l: &DivisorClass, bridge: &BridgeType) -> Result<Rat> {
    check_space(l, Space::MgnPs)?;
    Ok(match bridge {
        BridgeType::Irr => l.lambda_coeff() + int(10) * l.irr_coeff(),
        BridgeType::Pair { low, high } => {
            l.lambda_coeff() + int(12) * l.irr_coeff() - l.coeff(low) - l.coeff(high)
        }
    })
}

/// The one-parameter-subgroup weight of a class against a tacnodal
/// bridge, extended linearly from the basis weights: `lambda` weighs 1,
/// `delta_irr` weighs 10 against `C(irr)` and 12 against pairs, and a
/// boundary class weighs `-1` per occurrence in the bridge type (so the
/// collapsed middle class of a pair weighs `-2`).
///
/// On the basis this is the same linear functional as
/// [`intersect_bridge`].
pub fn weight(l: &DivisorClass, bridge: &BridgeType) -> Rat {
    let irr_weight = match bridge {
        BridgeType::Irr => int(10),
        BridgeType::Pair { .. } => int(12),
    };
    let mut total = l.lambda_coeff() + irr_weight * l.irr_coeff();
    for (idx, c) in l.boundary_terms() {
        let mult = bridge.multiplicity(idx);
        if mult > 0 {
            total -= int(i64::from(mult)) * c;
        }
    }
    total
}

/// The F-curves whose images under the contraction of elliptic tails
/// span the face attached to `T`: the elliptic tail curve, `Fs(1, {})`
/// when `irr` is in `T` (and `g >= 2`), and the two-part curve
/// `F5((t, I), (g-t-1, I^c))` for each consecutive pair in `T`.
pub fn fcurves_in_ne_upsilon_t(ambient: MarkedGenus, t: &TSubset) -> Result<Vec<FCurve>> {
    let (g, n) = ambient.pair();
    if g == 0 || [(1, 1), (2, 0), (1, 2)].contains(&(g, n)) {
        return Err(DomainError::ExcludedInstance {
            op: "fcurves_in_ne_upsilon_t",
            g,
            n,
        });
    }
    let mut out = vec![FCurve::Ell];
    for bridge in bridge_curves(ambient, Some(t)) {
        out.push(bridge_image_curve(ambient, &bridge)?);
    }
    Ok(out)
}

/// The F-curve whose image under the elliptic-tail contraction is a given
/// bridge: `Fs(1, {})` for `C(irr)`, and `F5((t, I), (g-t-1, I^c))` for a
/// pair of type `{[t, I], [t+1, I]}`.
pub fn bridge_image_curve(ambient: MarkedGenus, bridge: &BridgeType) -> Result<FCurve> {
    match bridge {
        BridgeType::Irr => FCurve::Fs(CurvePart::new(1, [])).canonicalize(ambient),
        BridgeType::Pair { low, .. } => {
            // the smaller class of a consecutive pair is always written
            // with an upward representative, so (t + 1, I) is the partner
            let tau = low.genus();
            let marks = low.marks().clone();
            let comp: BTreeSet<u32> = ambient.marks().filter(|m| !marks.contains(m)).collect();
            let p = CurvePart { genus: tau, marks };
            let q = CurvePart {
                genus: ambient.g - tau - 1,
                marks: comp,
            };
            FCurve::F5(p, q).canonicalize(ambient)
        }
    }
}

// ---------------------------------------------------------------------------
// Wire format
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct FCurveWire {
    family: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    parts: Vec<(u32, Vec<u32>)>,
}

impl Serialize for FCurve {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let wire = FCurveWire {
            family: self.family_name().to_string(),
            parts: self
                .parts()
                .into_iter()
                .map(|p| (p.genus, p.marks.iter().copied().collect()))
                .collect(),
        };
        wire.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FCurve {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let wire = FCurveWire::deserialize(d)?;
        let mut parts = wire
            .parts
            .into_iter()
            .map(|(genus, marks)| CurvePart::new(genus, marks));
        let arity =
            |want: usize, got: &str| D::Error::custom(format!("family {got} expects {want} parts"));
        let curve = match wire.family.as_str() {
            "Ell" => FCurve::Ell,
            "FIrr" => FCurve::FIrr,
            "F3" => FCurve::F3(parts.next().ok_or_else(|| arity(1, "F3"))?),
            "Fs" => FCurve::Fs(parts.next().ok_or_else(|| arity(1, "Fs"))?),
            "F5" => FCurve::F5(
                parts.next().ok_or_else(|| arity(2, "F5"))?,
                parts.next().ok_or_else(|| arity(2, "F5"))?,
            ),
            "F6" => FCurve::F6(
                parts.next().ok_or_else(|| arity(3, "F6"))?,
                parts.next().ok_or_else(|| arity(3, "F6"))?,
                parts.next().ok_or_else(|| arity(3, "F6"))?,
            ),
            other => return Err(D::Error::custom(format!("unknown curve family {other:?}"))),
        };
        if parts.next().is_some() {
            return Err(D::Error::custom("too many parts for the curve family"));
        }
        Ok(curve)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index_set::BoundaryIndex;
    use crate::rat::rat;

    fn mg(g: u32, n: u32) -> MarkedGenus {
        MarkedGenus::new(g, n)
    }

    fn part(genus: u32, marks: &[u32]) -> CurvePart {
        CurvePart::new(genus, marks.iter().copied())
    }

    #[test]
    fn enumerate_small_instances() {
        assert_eq!(
            enumerate_fcurves(mg(2, 0)),
            vec![FCurve::Ell, FCurve::Fs(part(1, &[]))]
        );
        assert_eq!(
            enumerate_fcurves(mg(1, 2)),
            vec![FCurve::Ell, FCurve::F5(part(0, &[1]), part(0, &[2]))]
        );
        // (0, 4): a single three-part class made of singletons
        let curves = enumerate_fcurves(mg(0, 4));
        assert_eq!(
            curves,
            vec![FCurve::F6(part(0, &[1]), part(0, &[2]), part(0, &[3]))]
        );
    }

    #[test]
    fn enumerate_has_distinct_vectors() {
        for (g, n) in [(2u32, 0u32), (3, 0), (2, 1), (3, 1), (2, 2), (1, 3), (4, 0)] {
            let amb = mg(g, n);
            let curves = enumerate_fcurves(amb);
            let mut seen = BTreeSet::new();
            for c in &curves {
                let v: Vec<_> = intersection_vector(c, amb).unwrap().into_iter().collect();
                assert!(seen.insert(v), "duplicate vector for {c} on ({g},{n})");
            }
        }
    }

    #[test]
    fn intersect_examples() {
        let amb = mg(2, 0);
        let mut lambda = DivisorClass::zero(Space::Mgn, amb);
        lambda.set_lambda(int(1)).unwrap();
        assert_eq!(intersect(&lambda, &FCurve::Ell).unwrap(), int(1));

        // stored +1 on delta_irr means b_irr = -1
        let amb = mg(3, 0);
        let mut irr = DivisorClass::zero(Space::Mgn, amb);
        irr.set_irr(int(1)).unwrap();
        assert_eq!(intersect(&irr, &FCurve::FIrr).unwrap(), int(-1));

        // the canonical-plus-psi expansion meets Ell in -9 on (2, 0)
        let k = crate::divisor::canonical_plus_psi(Space::Mgn, mg(2, 0));
        assert_eq!(intersect(&k, &FCurve::Ell).unwrap(), int(-9));
    }

    #[test]
    fn intersection_vector_examples() {
        let amb = mg(3, 1);
        let v = intersection_vector(&FCurve::Ell, amb).unwrap();
        assert_eq!(v.get(&BasisClass::Lambda), Some(&int(1)));
        assert_eq!(v.get(&BasisClass::Irr), Some(&int(12)));
        let one_empty = amb.one_empty_class().unwrap();
        assert_eq!(v.get(&BasisClass::Boundary(one_empty)), Some(&int(-1)));

        let v = intersection_vector(&FCurve::FIrr, amb).unwrap();
        assert_eq!(v.get(&BasisClass::Lambda), None);
        assert_eq!(v.get(&BasisClass::Irr), Some(&int(-1)));

        // F3 touches only its own class
        let v = intersection_vector(&FCurve::F3(part(0, &[1])), amb).unwrap();
        let own = amb.pair_class(0, [1]).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v.get(&BasisClass::Boundary(own)), Some(&int(-1)));
    }

    #[test]
    fn f5_and_f6_are_symmetric() {
        let amb = mg(2, 2);
        let a = FCurve::F5(part(0, &[1]), part(1, &[2]))
            .canonicalize(amb)
            .unwrap();
        let b = FCurve::F5(part(1, &[2]), part(0, &[1]))
            .canonicalize(amb)
            .unwrap();
        assert_eq!(a, b);

        let amb = mg(3, 3);
        let parts = [part(1, &[]), part(0, &[1, 2]), part(0, &[3])];
        let base = FCurve::F6(parts[0].clone(), parts[1].clone(), parts[2].clone())
            .canonicalize(amb)
            .unwrap();
        let perms = [[1usize, 0, 2], [2, 1, 0], [1, 2, 0]];
        for perm in perms {
            let c = FCurve::F6(
                parts[perm[0]].clone(),
                parts[perm[1]].clone(),
                parts[perm[2]].clone(),
            )
            .canonicalize(amb)
            .unwrap();
            assert_eq!(c, base);
        }
        // swapping a stored part with the derived fourth part also lands
        // on the same canonical curve
        let swapped = FCurve::F6(part(1, &[]), part(0, &[1, 2]), part(2, &[]))
            .canonicalize(amb)
            .unwrap();
        assert_eq!(
            intersection_vector(&swapped, amb).unwrap(),
            intersection_vector(&base, amb).unwrap()
        );
        assert_eq!(swapped, base);
    }

    #[test]
    fn bridge_enumeration() {
        assert_eq!(bridge_curves(mg(2, 0), None), vec![BridgeType::Irr]);
        assert!(bridge_curves(mg(1, 0), None).is_empty());

        // on (3, 1) the shifted pair {[1,{1}],[2,{1}]} hits [1,{}] and
        // is not a bridge; only {[0,{1}],[1,{1}]} survives
        let amb = mg(3, 1);
        let bridges = bridge_curves(amb, None);
        assert_eq!(
            bridges,
            vec![BridgeType::Irr, BridgeType::pair(amb, 0, [1]).unwrap()]
        );

        // (5, 0): the middle pair collapses to a single class
        let amb = mg(5, 0);
        let bridges = bridge_curves(amb, None);
        assert_eq!(bridges.len(), 2);
        match &bridges[1] {
            BridgeType::Pair { low, high } => assert_eq!(low, high),
            _ => panic!("expected a pair bridge"),
        }
    }

    #[test]
    fn bridge_filtering() {
        let amb = mg(3, 1);
        let mut t = TSubset::empty(amb);
        t.insert(BoundaryIndex::Irr).unwrap();
        assert_eq!(bridge_curves(amb, Some(&t)), vec![BridgeType::Irr]);
        assert!(bridge_curves(amb, Some(&TSubset::empty(amb))).is_empty());
    }

    #[test]
    fn bridge_intersections_on_canonical_class() {
        // C(irr) meets 13 lambda - 2 delta + psi in -7; so does every pair
        // bridge except the divisorial ones C([0,{j}],[1,{j}]), whose
        // cotangent end shifts the value to -8
        for (g, n) in [(3u32, 1u32), (2, 2), (4, 0), (3, 2), (1, 3), (5, 0)] {
            let amb = mg(g, n);
            let k = crate::divisor::canonical_plus_psi(Space::MgnPs, amb);
            for bridge in bridge_curves(amb, None) {
                let expected = match &bridge {
                    BridgeType::Irr => int(-7),
                    BridgeType::Pair { low, .. } => {
                        if crate::divisor::is_psi_class(low) {
                            int(-8)
                        } else {
                            int(-7)
                        }
                    }
                };
                assert_eq!(
                    intersect_bridge(&k, &bridge).unwrap(),
                    expected,
                    "bridge {bridge} on ({g},{n})"
                );
            }
        }
    }

    #[test]
    fn bridge_intersection_zero_example() {
        let amb = mg(3, 1);
        let mut l = DivisorClass::zero(Space::MgnPs, amb);
        l.set_lambda(int(1)).unwrap();
        l.set_irr(rat(-1, 10)).unwrap();
        assert_eq!(intersect_bridge(&l, &BridgeType::Irr).unwrap(), int(0));
    }

    #[test]
    fn weight_reproduces_table() {
        let amb = mg(3, 1);
        let bridges = bridge_curves(amb, None);
        let mut lambda = DivisorClass::zero(Space::MgnPs, amb);
        lambda.set_lambda(int(1)).unwrap();
        let mut irr = DivisorClass::zero(Space::MgnPs, amb);
        irr.set_irr(int(1)).unwrap();
        for bridge in &bridges {
            assert_eq!(weight(&lambda, bridge), int(1));
            let expected = match bridge {
                BridgeType::Irr => int(10),
                BridgeType::Pair { .. } => int(12),
            };
            assert_eq!(weight(&irr, bridge), expected);
        }
        // a class in the type weighs -1, others weigh 0
        let amb = mg(4, 1);
        let pair = BridgeType::pair(amb, 0, [1]).unwrap();
        let mut in_type = DivisorClass::zero(Space::MgnPs, amb);
        in_type.set_boundary(0, [1], int(1)).unwrap();
        assert_eq!(weight(&in_type, &pair), int(-1));
        let mut in_type = DivisorClass::zero(Space::MgnPs, amb);
        in_type.set_boundary(1, [1], int(1)).unwrap();
        assert_eq!(weight(&in_type, &pair), int(-1));
        let mut off_type = DivisorClass::zero(Space::MgnPs, amb);
        off_type.set_boundary(2, [], int(1)).unwrap();
        assert_eq!(weight(&off_type, &pair), int(0));
    }

    #[test]
    fn weight_equals_bridge_intersection_on_basis() {
        for (g, n) in [(3u32, 1u32), (2, 2), (4, 1), (5, 0), (3, 0)] {
            let amb = mg(g, n);
            let one_empty = amb.one_empty_class();
            for bridge in bridge_curves(amb, None) {
                let mut basis: Vec<DivisorClass> = Vec::new();
                let mut l = DivisorClass::zero(Space::MgnPs, amb);
                l.set_lambda(int(1)).unwrap();
                basis.push(l);
                let mut l = DivisorClass::zero(Space::MgnPs, amb);
                l.set_irr(int(1)).unwrap();
                basis.push(l);
                for idx in amb.pair_classes() {
                    if Some(&idx) == one_empty.as_ref() {
                        continue;
                    }
                    let mut l = DivisorClass::zero(Space::MgnPs, amb);
                    l.add_boundary_class(idx, int(1)).unwrap();
                    basis.push(l);
                }
                for l in &basis {
                    assert_eq!(
                        weight(l, &bridge),
                        intersect_bridge(l, &bridge).unwrap(),
                        "bridge {bridge} on ({g},{n})"
                    );
                }
            }
        }
    }

    #[test]
    fn collapsed_bridge_weighs_minus_two() {
        // (5, 0): the type of the middle bridge is the single class
        // [2, {}], which both ends of the pair hit
        let amb = mg(5, 0);
        let bridge = BridgeType::pair(amb, 2, []).unwrap();
        let mut l = DivisorClass::zero(Space::MgnPs, amb);
        l.set_boundary(2, [], int(1)).unwrap();
        assert_eq!(weight(&l, &bridge), int(-2));
        assert_eq!(intersect_bridge(&l, &bridge).unwrap(), int(-2));
    }

    #[test]
    fn ne_face_curves() {
        let amb = mg(3, 1);
        assert_eq!(
            fcurves_in_ne_upsilon_t(amb, &TSubset::empty(amb)).unwrap(),
            vec![FCurve::Ell]
        );

        let mut irr_only = TSubset::empty(amb);
        irr_only.insert(BoundaryIndex::Irr).unwrap();
        assert_eq!(
            fcurves_in_ne_upsilon_t(amb, &irr_only).unwrap(),
            vec![FCurve::Ell, FCurve::Fs(part(1, &[]))]
        );

        let t = TSubset::from_members(
            amb,
            [
                amb.boundary_class(0, [1]).unwrap(),
                amb.boundary_class(1, [1]).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(
            fcurves_in_ne_upsilon_t(amb, &t).unwrap(),
            vec![FCurve::Ell, FCurve::F5(part(0, &[1]), part(2, &[]))]
        );

        assert!(fcurves_in_ne_upsilon_t(mg(1, 2), &TSubset::empty(mg(1, 2))).is_err());
    }

    #[test]
    fn bridge_image_matches_bridge_intersection() {
        // projection-formula consistency: pulling back and meeting the
        // bridge-shaped F-curve equals meeting the bridge downstairs
        for (g, n) in [(3u32, 1u32), (2, 2), (4, 1), (5, 0)] {
            let amb = mg(g, n);
            let mut l = DivisorClass::zero(Space::MgnPs, amb);
            l.set_lambda(rat(5, 7)).unwrap();
            l.set_irr(rat(-2, 3)).unwrap();
            for (k, idx) in amb.pair_classes().into_iter().enumerate() {
                if Some(&idx) == amb.one_empty_class().as_ref() {
                    continue;
                }
                l.add_boundary_class(idx, rat(k as i64 + 1, 5)).unwrap();
            }
            let pulled = crate::divisor::pullback_upsilon(&l).unwrap();
            for bridge in bridge_curves(amb, None) {
                let curve = bridge_image_curve(amb, &bridge).unwrap();
                assert_eq!(
                    intersect(&pulled, &curve).unwrap(),
                    intersect_bridge(&l, &bridge).unwrap(),
                    "bridge {bridge} on ({g},{n})"
                );
            }
            // the elliptic tail curve dies on every pullback
            assert_eq!(intersect(&pulled, &FCurve::Ell).unwrap(), int(0));
        }
    }

    #[test]
    fn curve_json_round_trip() {
        for amb in [mg(3, 1), mg(2, 2), mg(0, 4)] {
            for c in enumerate_fcurves(amb) {
                let text = serde_json::to_string(&c).unwrap();
                let back: FCurve = serde_json::from_str(&text).unwrap();
                assert_eq!(back, c);
            }
        }
    }
}
