//! The index set of boundary classes of the moduli space of stable
//! `n`-pointed genus-`g` curves, and its admissible subsets.
//!
//! A boundary class is either `irr` or a class `[i, I]` of pairs
//! `(i, I)` with `0 <= i <= g`, `I` a subset of the marks `{1, ..., n}`,
//! `(i, I)` different from `(0, {})` and `(g, {1..n})`, taken modulo the
//! involution `(i, I) ~ (g - i, I^c)`. Canonical representatives are the
//! lexicographically minimal pairs under the key `(i, |I|, sorted I)`.
//!
//! A subset `T` of classes is admissible when it avoids `[1, {}]` (and
//! `irr` for `g <= 1`) and every `[i, I]` in `T` has a neighbor `[i - 1, I]`
//! or `[i + 1, I]` in `T`, neighbors being taken as classes. Admissible
//! subsets are exactly the unions of the minimal subsets, which classify
//! the distinct modular compactifications sitting under the pseudostable
//! space.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{DomainError, Result};

/// The ambient pair `(g, n)`: genus and number of marked points.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct MarkedGenus {
    pub g: u32,
    pub n: u32,
}

impl MarkedGenus {
    pub fn new(g: u32, n: u32) -> Self {
        MarkedGenus { g, n }
    }

    pub fn pair(&self) -> (u32, u32) {
        (self.g, self.n)
    }

    /// The marks `1, ..., n`.
    pub fn marks(&self) -> impl Iterator<Item = u32> {
        1..=self.n
    }

    pub fn all_marks(&self) -> BTreeSet<u32> {
        self.marks().collect()
    }

    fn check_raw(&self, i: u32, marks: &BTreeSet<u32>) -> Result<()> {
        if i > self.g {
            return Err(DomainError::GenusOutOfRange { i, g: self.g });
        }
        if let Some(&m) = marks.iter().find(|&&m| m == 0 || m > self.n) {
            return Err(DomainError::MarkOutOfRange { mark: m, n: self.n });
        }
        let full = marks.len() as u32 == self.n;
        if (i == 0 && marks.is_empty()) || (i == self.g && full) {
            return Err(DomainError::ForbiddenPair {
                i,
                marks: fmt_marks(marks),
                g: self.g,
                n: self.n,
            });
        }
        Ok(())
    }

    /// Canonical class of the pair `(i, I)`.
    ///
    /// Errors on out-of-range data and on the forbidden pairs `(0, {})`
    /// and `(g, {1..n})`.
    pub fn pair_class(&self, i: u32, marks: impl IntoIterator<Item = u32>) -> Result<PairIndex> {
        let marks: BTreeSet<u32> = marks.into_iter().collect();
        self.check_raw(i, &marks)?;
        let comp_i = self.g - i;
        let comp_marks: BTreeSet<u32> = self.marks().filter(|m| !marks.contains(m)).collect();
        let a = PairIndex { genus: i, marks };
        let b = PairIndex {
            genus: comp_i,
            marks: comp_marks,
        };
        Ok(if a <= b { a } else { b })
    }

    /// Canonical class of `(i, I)` as a [`BoundaryIndex`].
    pub fn boundary_class(
        &self,
        i: u32,
        marks: impl IntoIterator<Item = u32>,
    ) -> Result<BoundaryIndex> {
        Ok(BoundaryIndex::Pair(self.pair_class(i, marks)?))
    }

    /// The class `[1, {}]` when it exists in this index set.
    ///
    /// It is absent exactly when `(1, {})` is out of range (`g = 0`) or
    /// forbidden (`(g, n) = (1, 0)`).
    pub fn one_empty_class(&self) -> Option<PairIndex> {
        self.pair_class(1, []).ok()
    }

    /// All distinct boundary classes, `irr` first, pair classes in
    /// canonical order.
    pub fn classes(&self) -> Vec<BoundaryIndex> {
        let mut out = vec![BoundaryIndex::Irr];
        out.extend(self.pair_classes().into_iter().map(BoundaryIndex::Pair));
        out
    }

    /// All distinct pair classes `[i, I]` (the index set minus `irr`),
    /// deduplicated by brute force over raw pairs.
    pub fn pair_classes(&self) -> Vec<PairIndex> {
        let mut seen = BTreeSet::new();
        for i in 0..=self.g {
            for marks in subsets(&self.marks().collect::<Vec<_>>()) {
                if let Ok(c) = self.pair_class(i, marks) {
                    seen.insert(c);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// Neighbor classes `[i - 1, I]` and `[i + 1, I]` of a class, computed
    /// from its canonical representative. The result does not depend on
    /// the representative chosen.
    pub fn neighbors(&self, idx: &PairIndex) -> Vec<PairIndex> {
        let mut out = Vec::new();
        if idx.genus > 0 {
            if let Ok(c) = self.pair_class(idx.genus - 1, idx.marks.iter().copied()) {
                out.push(c);
            }
        }
        if let Ok(c) = self.pair_class(idx.genus + 1, idx.marks.iter().copied()) {
            out.push(c);
        }
        out.sort();
        out.dedup();
        out
    }

    /// The minimal subsets: `{irr}` for `g >= 2`, and every set
    /// `{[i, I], [i + 1, I]}` of classes avoiding `[1, {}]`.
    ///
    /// For `n = 0` and odd `g` the middle pair collapses to a singleton
    /// class, which is still a minimal subset.
    pub fn minimal_subsets(&self) -> Vec<TSubset> {
        let mut seen: BTreeSet<TSubset> = BTreeSet::new();
        if self.g >= 2 {
            let mut t = TSubset::empty(*self);
            t.members.insert(BoundaryIndex::Irr);
            seen.insert(t);
        }
        let one_empty = self.one_empty_class();
        for i in 0..self.g {
            for marks in subsets(&self.marks().collect::<Vec<_>>()) {
                let (a, b) = match (
                    self.pair_class(i, marks.iter().copied()),
                    self.pair_class(i + 1, marks.iter().copied()),
                ) {
                    (Ok(a), Ok(b)) => (a, b),
                    _ => continue,
                };
                if one_empty.as_ref() == Some(&a) || one_empty.as_ref() == Some(&b) {
                    continue;
                }
                let mut t = TSubset::empty(*self);
                t.members.insert(BoundaryIndex::Pair(a));
                t.members.insert(BoundaryIndex::Pair(b));
                seen.insert(t);
            }
        }
        seen.into_iter().collect()
    }

    /// Closed-form number of admissible subsets.
    ///
    /// This equals the number of subsets of minimal subsets; see
    /// [`MarkedGenus::enumerate_admissible`] for the enumerated sets
    /// themselves.
    pub fn count_admissible(&self) -> Result<BigUint> {
        let exponent: u64 = match (self.g, self.n) {
            (0, _) => return Ok(BigUint::one()),
            (1, 0) => return Ok(BigUint::one()),
            (2, 0) => 1,
            (g, 0) if g % 2 == 1 => u64::from((g - 1) / 2),
            (g, 0) => u64::from(g / 2 - 1),
            (g, n) => {
                let half = 1u64
                    .checked_shl(n - 1)
                    .ok_or(DomainError::CountTooLarge { exponent: 64 })?;
                u64::from(g)
                    .checked_mul(half)
                    .and_then(|v| v.checked_sub(1))
                    .ok_or(DomainError::CountTooLarge { exponent: 64 })?
            }
        };
        if exponent > 1 << 24 {
            return Err(DomainError::CountTooLarge { exponent });
        }
        Ok(BigUint::one() << exponent)
    }

    /// All admissible subsets, as deduplicated unions of minimal subsets,
    /// in canonical order.
    ///
    /// Errors when `2^(number of minimal subsets)` exceeds `cap`.
    pub fn enumerate_admissible(&self, cap: u64) -> Result<Vec<TSubset>> {
        let minimal = self.minimal_subsets();
        if minimal.len() >= 63 || (1u64 << minimal.len()) > cap {
            return Err(DomainError::EnumerationCapExceeded { cap });
        }
        let mut seen: BTreeSet<TSubset> = BTreeSet::new();
        for mask in 0u64..(1 << minimal.len()) {
            let mut t = TSubset::empty(*self);
            for (k, m) in minimal.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    t.members.extend(m.members.iter().cloned());
                }
            }
            seen.insert(t);
        }
        Ok(seen.into_iter().collect())
    }
}

/// Canonical representative of a boundary class `[i, I]`.
///
/// Instances are produced by [`MarkedGenus::pair_class`], so two values
/// compare equal exactly when they denote the same class.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PairIndex {
    genus: u32,
    marks: BTreeSet<u32>,
}

impl PairIndex {
    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn marks(&self) -> &BTreeSet<u32> {
        &self.marks
    }
}

impl Ord for PairIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.genus
            .cmp(&other.genus)
            .then(self.marks.len().cmp(&other.marks.len()))
            .then_with(|| self.marks.iter().cmp(other.marks.iter()))
    }
}

impl PartialOrd for PairIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PairIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.genus, fmt_marks(&self.marks))
    }
}

/// A boundary class: `irr` or a pair class.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum BoundaryIndex {
    Irr,
    Pair(PairIndex),
}

impl BoundaryIndex {
    pub fn as_pair(&self) -> Option<&PairIndex> {
        match self {
            BoundaryIndex::Irr => None,
            BoundaryIndex::Pair(p) => Some(p),
        }
    }
}

impl fmt::Display for BoundaryIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryIndex::Irr => write!(f, "irr"),
            BoundaryIndex::Pair(p) => write!(f, "{p}"),
        }
    }
}

/// A subset of the boundary index set of a fixed ambient `(g, n)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct TSubset {
    ambient: MarkedGenus,
    members: BTreeSet<BoundaryIndex>,
}

/// How two subsets compare through their admissible reductions, i.e. how
/// the corresponding compactified moduli spaces compare as open
/// substacks.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum StackRelation {
    Subset,
    Equal,
    Superset,
    Incomparable,
}

impl TSubset {
    pub fn empty(ambient: MarkedGenus) -> Self {
        TSubset {
            ambient,
            members: BTreeSet::new(),
        }
    }

    /// Build a subset from members, validating that each one is a
    /// canonical class of the ambient index set.
    pub fn from_members(
        ambient: MarkedGenus,
        members: impl IntoIterator<Item = BoundaryIndex>,
    ) -> Result<Self> {
        let mut t = TSubset::empty(ambient);
        for m in members {
            t.insert(m)?;
        }
        Ok(t)
    }

    pub fn insert(&mut self, member: BoundaryIndex) -> Result<()> {
        if let BoundaryIndex::Pair(p) = &member {
            let canon = self
                .ambient
                .pair_class(p.genus, p.marks.iter().copied())
                .map_err(|_| DomainError::NotInIndexSet {
                    index: p.to_string(),
                    g: self.ambient.g,
                    n: self.ambient.n,
                })?;
            if &canon != p {
                return Err(DomainError::NotInIndexSet {
                    index: p.to_string(),
                    g: self.ambient.g,
                    n: self.ambient.n,
                });
            }
        }
        self.members.insert(member);
        Ok(())
    }

    pub fn ambient(&self) -> MarkedGenus {
        self.ambient
    }

    pub fn members(&self) -> impl Iterator<Item = &BoundaryIndex> {
        self.members.iter()
    }

    pub fn pair_members(&self) -> impl Iterator<Item = &PairIndex> {
        self.members.iter().filter_map(BoundaryIndex::as_pair)
    }

    pub fn contains(&self, m: &BoundaryIndex) -> bool {
        self.members.contains(m)
    }

    pub fn contains_irr(&self) -> bool {
        self.members.contains(&BoundaryIndex::Irr)
    }

    pub fn contains_pair(&self, p: &PairIndex) -> bool {
        self.members.contains(&BoundaryIndex::Pair(p.clone()))
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_subset(&self, other: &TSubset) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn union(&self, other: &TSubset) -> Result<TSubset> {
        check_ambient(self.ambient, other.ambient)?;
        let mut t = self.clone();
        t.members.extend(other.members.iter().cloned());
        Ok(t)
    }

    /// Whether this subset is admissible.
    ///
    /// For `g = 0` only the empty set is admissible; this is pinned
    /// directly rather than derived from the neighbor clauses.
    pub fn is_admissible(&self) -> bool {
        let amb = self.ambient;
        if amb.g == 0 {
            return self.is_empty();
        }
        if let Some(oe) = amb.one_empty_class() {
            if self.contains_pair(&oe) {
                return false;
            }
        }
        if amb.g == 1 && self.contains_irr() {
            return false;
        }
        self.pair_members()
            .all(|p| amb.neighbors(p).iter().any(|nb| self.contains_pair(nb)))
    }

    /// The admissible reduction: drop `[1, {}]` (and `irr` for `g <= 1`),
    /// then drop every pair class with both neighbors absent. One
    /// simultaneous pass reaches the fixpoint, so the map is idempotent.
    pub fn admissible_reduction(&self) -> TSubset {
        let amb = self.ambient;
        let one_empty = amb.one_empty_class();
        let step1: BTreeSet<BoundaryIndex> = self
            .members
            .iter()
            .filter(|m| match m {
                BoundaryIndex::Irr => amb.g >= 2,
                BoundaryIndex::Pair(p) => one_empty.as_ref() != Some(p),
            })
            .cloned()
            .collect();
        let members = step1
            .iter()
            .filter(|m| match m {
                BoundaryIndex::Irr => true,
                BoundaryIndex::Pair(p) => amb
                    .neighbors(p)
                    .iter()
                    .any(|nb| step1.contains(&BoundaryIndex::Pair(nb.clone()))),
            })
            .cloned()
            .collect();
        TSubset {
            ambient: amb,
            members,
        }
    }

    /// The divisorial part: the union of the class pairs
    /// `{[0, {j}], [1, {j}]}` contained in this subset, and the empty set
    /// for `(g, n) = (1, 1)` or `(2, 1)` where those pairs would touch
    /// `[1, {}]`.
    pub fn divisorial_part(&self) -> TSubset {
        let amb = self.ambient;
        let mut out = TSubset::empty(amb);
        if amb.pair() == (1, 1) || amb.pair() == (2, 1) {
            return out;
        }
        for j in amb.marks() {
            let (a, b) = match (amb.pair_class(0, [j]), amb.pair_class(1, [j])) {
                (Ok(a), Ok(b)) => (a, b),
                _ => continue,
            };
            if self.contains_pair(&a) && self.contains_pair(&b) {
                out.members.insert(BoundaryIndex::Pair(a));
                out.members.insert(BoundaryIndex::Pair(b));
            }
        }
        out
    }

    /// Compare the compactifications attached to two subsets via their
    /// admissible reductions.
    pub fn compare_stacks(&self, other: &TSubset) -> Result<StackRelation> {
        check_ambient(self.ambient, other.ambient)?;
        let a = self.admissible_reduction();
        let b = other.admissible_reduction();
        Ok(match (a.is_subset(&b), b.is_subset(&a)) {
            (true, true) => StackRelation::Equal,
            (true, false) => StackRelation::Subset,
            (false, true) => StackRelation::Superset,
            (false, false) => StackRelation::Incomparable,
        })
    }
}

/// The JSON shape of a subset: `{"irr": bool, "pairs": [[i, [marks]], ...]}`
/// with canonical pairs on output. The ambient `(g, n)` travels
/// separately.
#[derive(Clone, Default, Serialize, Deserialize)]
pub struct TSubsetWire {
    #[serde(default)]
    pub irr: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pairs: Vec<(u32, Vec<u32>)>,
}

impl TSubset {
    pub fn to_wire(&self) -> TSubsetWire {
        TSubsetWire {
            irr: self.contains_irr(),
            pairs: self
                .pair_members()
                .map(|p| (p.genus(), p.marks().iter().copied().collect()))
                .collect(),
        }
    }

    /// Rebuild from the wire shape, canonicalizing raw pairs.
    pub fn from_wire(ambient: MarkedGenus, wire: &TSubsetWire) -> Result<Self> {
        let mut t = TSubset::empty(ambient);
        if wire.irr {
            t.insert(BoundaryIndex::Irr)?;
        }
        for (i, marks) in &wire.pairs {
            let idx = ambient.pair_class(*i, marks.iter().copied())?;
            t.insert(BoundaryIndex::Pair(idx))?;
        }
        Ok(t)
    }
}

impl Serialize for TSubset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_wire().serialize(s)
    }
}

impl fmt::Display for TSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, m) in self.members.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "}}")
    }
}

pub(crate) fn check_ambient(a: MarkedGenus, b: MarkedGenus) -> Result<()> {
    if a != b {
        return Err(DomainError::AmbientMismatch {
            g1: a.g,
            n1: a.n,
            g2: b.g,
            n2: b.n,
        });
    }
    Ok(())
}

fn fmt_marks(marks: &BTreeSet<u32>) -> String {
    let inner: Vec<String> = marks.iter().map(|m| m.to_string()).collect();
    format!("{{{}}}", inner.join(" "))
}

/// All subsets of `items`, in mask order. Intended for small mark sets.
pub(crate) fn subsets(items: &[u32]) -> Vec<BTreeSet<u32>> {
    assert!(items.len() < 24, "subset enumeration limited to small sets");
    (0u32..(1 << items.len()))
        .map(|mask| {
            items
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, &m)| m)
                .collect()
        })
        .collect()
}

/// All subsets of `items` with exactly `k` elements.
pub(crate) fn k_subsets(items: &[u32], k: usize) -> Vec<BTreeSet<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(
        items: &[u32],
        k: usize,
        start: usize,
        cur: &mut Vec<u32>,
        out: &mut Vec<BTreeSet<u32>>,
    ) {
        if cur.len() == k {
            out.push(cur.iter().copied().collect());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut cur, &mut out);
    out
}
