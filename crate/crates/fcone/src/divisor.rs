//! Exact divisor-class arithmetic in the tautological basis.
//!
//! A class lives on one of two spaces: the moduli space of stable curves
//! (`Mgn`) or its pseudostable contraction (`MgnPs`), where the class
//! `delta_(1, {})` vanishes. Coefficients are exact rationals over the
//! spanning set `lambda`, `delta_irr`, `delta_{i,I}`; the cotangent
//! classes are derived (`psi_k = -delta_(0,{k})`) and never stored, and
//! neither are the totals `psi` and `delta`.
//!
//! Adjoint divisors are the classes `K + psi + a*lambda + Delta` with
//! `a >= 0` and boundary multipliers in `[0, 1]`; written in the basis
//! they read `(13+a) lambda - (2-alpha_irr) delta_irr -
//! sum (2-alpha_{i,I}) delta_{i,I}`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{DomainError, Result};
use crate::index_set::{check_ambient, k_subsets, MarkedGenus, PairIndex, TSubset};
use crate::rat::{int, parse, Rat};

/// The space a divisor class lives on.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Space {
    Mgn,
    MgnPs,
}

impl Space {
    pub fn name(self) -> &'static str {
        match self {
            Space::Mgn => "Mgn",
            Space::MgnPs => "MgnPs",
        }
    }
}

pub(crate) fn check_space(l: &DivisorClass, expected: Space) -> Result<()> {
    if l.space != expected {
        return Err(DomainError::WrongSpace {
            expected: expected.name(),
            found: l.space.name(),
        });
    }
    Ok(())
}

/// Whether a canonical class is of the form `[0, {k}]`, i.e. carries a
/// cotangent class rather than a boundary divisor.
pub fn is_psi_class(idx: &PairIndex) -> bool {
    idx.genus() == 0 && idx.marks().len() == 1
}

/// An exact divisor class in the spanning set `lambda`, `delta_irr`,
/// `delta_{i,I}` with sparse canonical boundary keys.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DivisorClass {
    space: Space,
    ambient: MarkedGenus,
    lambda: Rat,
    irr: Rat,
    boundary: BTreeMap<PairIndex, Rat>,
}

impl DivisorClass {
    pub fn zero(space: Space, ambient: MarkedGenus) -> Self {
        DivisorClass {
            space,
            ambient,
            lambda: Rat::zero(),
            irr: Rat::zero(),
            boundary: BTreeMap::new(),
        }
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn ambient(&self) -> MarkedGenus {
        self.ambient
    }

    /// Set the `lambda` coefficient. On genus-zero ambients `lambda`
    /// vanishes identically and a nonzero value is rejected.
    pub fn set_lambda(&mut self, c: Rat) -> Result<()> {
        if self.ambient.g == 0 && !c.is_zero() {
            return Err(DomainError::GenusZeroRelation);
        }
        self.lambda = c;
        Ok(())
    }

    /// Set the `delta_irr` coefficient, subject to the same genus-zero rule.
    pub fn set_irr(&mut self, c: Rat) -> Result<()> {
        if self.ambient.g == 0 && !c.is_zero() {
            return Err(DomainError::GenusZeroRelation);
        }
        self.irr = c;
        Ok(())
    }

    /// Set the coefficient of the boundary class of `(i, I)`, canonicalizing
    /// the index. On the pseudostable space the class `[1, {}]` vanishes and
    /// cannot carry a nonzero coefficient.
    pub fn set_boundary(
        &mut self,
        i: u32,
        marks: impl IntoIterator<Item = u32>,
        c: Rat,
    ) -> Result<()> {
        let idx = self.ambient.pair_class(i, marks)?;
        self.check_storable(&idx, &c)?;
        if c.is_zero() {
            self.boundary.remove(&idx);
        } else {
            self.boundary.insert(idx, c);
        }
        Ok(())
    }

    /// Add `c` to the coefficient of the class of `(i, I)`.
    pub fn add_boundary(
        &mut self,
        i: u32,
        marks: impl IntoIterator<Item = u32>,
        c: Rat,
    ) -> Result<()> {
        let idx = self.ambient.pair_class(i, marks)?;
        self.add_boundary_class(idx, c)
    }

    pub(crate) fn add_boundary_class(&mut self, idx: PairIndex, c: Rat) -> Result<()> {
        self.check_storable(&idx, &c)?;
        let new = self.coeff(&idx) + c;
        if new.is_zero() {
            self.boundary.remove(&idx);
        } else {
            self.boundary.insert(idx, new);
        }
        Ok(())
    }

    fn check_storable(&self, idx: &PairIndex, c: &Rat) -> Result<()> {
        if self.space == Space::MgnPs
            && !c.is_zero()
            && self.ambient.one_empty_class().as_ref() == Some(idx)
        {
            return Err(DomainError::OneEmptyOnPs);
        }
        Ok(())
    }

    pub fn lambda_coeff(&self) -> &Rat {
        &self.lambda
    }

    pub fn irr_coeff(&self) -> &Rat {
        &self.irr
    }

    /// Stored coefficient of a canonical class (zero when absent).
    pub fn coeff(&self, idx: &PairIndex) -> Rat {
        self.boundary.get(idx).cloned().unwrap_or_else(Rat::zero)
    }

    /// Coefficient of the class of a raw pair `(i, I)`, canonicalized.
    pub fn coeff_of(&self, i: u32, marks: impl IntoIterator<Item = u32>) -> Result<Rat> {
        Ok(self.coeff(&self.ambient.pair_class(i, marks)?))
    }

    pub fn boundary_terms(&self) -> impl Iterator<Item = (&PairIndex, &Rat)> {
        self.boundary.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.lambda.is_zero() && self.irr.is_zero() && self.boundary.is_empty()
    }

    pub fn checked_add(&self, other: &DivisorClass) -> Result<DivisorClass> {
        check_ambient(self.ambient, other.ambient)?;
        if self.space != other.space {
            return Err(DomainError::WrongSpace {
                expected: self.space.name(),
                found: other.space.name(),
            });
        }
        let mut out = self.clone();
        out.lambda += &other.lambda;
        out.irr += &other.irr;
        for (idx, c) in &other.boundary {
            out.add_boundary_class(idx.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &DivisorClass) -> Result<DivisorClass> {
        self.checked_add(&other.scale(&int(-1)))
    }

    pub fn scale(&self, r: &Rat) -> DivisorClass {
        let mut out = DivisorClass::zero(self.space, self.ambient);
        if r.is_zero() {
            return out;
        }
        out.lambda = &self.lambda * r;
        out.irr = &self.irr * r;
        out.boundary = self
            .boundary
            .iter()
            .map(|(idx, c)| (idx.clone(), c * r))
            .collect();
        out
    }

    /// The inverse of [`AdjointParams::divisor_class`] on its image:
    /// recover `(a, alpha_irr, alpha_{i,I})` when every bound holds, and
    /// `None` otherwise.
    pub fn to_adjoint(&self) -> Option<AdjointParams> {
        let a = &self.lambda - int(13);
        let alpha_irr = &self.irr + int(2);
        let mut alphas = BTreeMap::new();
        for idx in adjoint_classes(self.space, self.ambient) {
            let alpha = self.coeff(&idx) + int(2);
            alphas.insert(idx, alpha);
        }
        AdjointParams::new(self.space, self.ambient, a, alpha_irr, alphas).ok()
    }
}

/// The Mumford expansion `13 lambda - 2 delta + psi` of the canonical
/// class plus total cotangent class, expressed in the stored basis:
/// non-cotangent boundary classes carry `-2`, classes `[0, {k}]` carry
/// `-1`, and on the pseudostable space `[1, {}]` is omitted.
pub fn canonical_plus_psi(space: Space, ambient: MarkedGenus) -> DivisorClass {
    let mut out = DivisorClass::zero(space, ambient);
    if ambient.g > 0 {
        out.lambda = int(13);
        out.irr = int(-2);
    }
    let one_empty = ambient.one_empty_class();
    for idx in ambient.pair_classes() {
        if space == Space::MgnPs && Some(&idx) == one_empty.as_ref() {
            continue;
        }
        let c = if is_psi_class(&idx) { int(-1) } else { int(-2) };
        out.boundary.insert(idx, c);
    }
    out
}

fn adjoint_classes(space: Space, ambient: MarkedGenus) -> Vec<PairIndex> {
    let one_empty = ambient.one_empty_class();
    ambient
        .pair_classes()
        .into_iter()
        .filter(|idx| space == Space::Mgn || Some(idx) != one_empty.as_ref())
        .collect()
}

/// Coefficients `(a, alpha_irr, {alpha_{i,I}})` of an adjoint divisor
/// `K + psi + a*lambda + Delta`, with `a >= 0` and all multipliers in
/// `[0, 1]`. The multiplier map is total over the boundary classes of the
/// space (`[1, {}]` excluded on the pseudostable side).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AdjointParams {
    space: Space,
    ambient: MarkedGenus,
    a: Rat,
    alpha_irr: Rat,
    alphas: BTreeMap<PairIndex, Rat>,
}

impl AdjointParams {
    pub fn new(
        space: Space,
        ambient: MarkedGenus,
        a: Rat,
        alpha_irr: Rat,
        alphas: BTreeMap<PairIndex, Rat>,
    ) -> Result<Self> {
        if a < Rat::zero() {
            return Err(DomainError::CoefficientOutOfRange {
                name: "a".into(),
                value: a.to_string(),
            });
        }
        check_unit_interval("alpha_irr", &alpha_irr)?;
        let expected: BTreeSet<PairIndex> = adjoint_classes(space, ambient).into_iter().collect();
        for idx in &expected {
            match alphas.get(idx) {
                None => return Err(DomainError::MissingAlpha(idx.to_string())),
                Some(v) => check_unit_interval(&format!("alpha_{idx}"), v)?,
            }
        }
        if let Some(extra) = alphas.keys().find(|k| !expected.contains(k)) {
            return Err(DomainError::NotInIndexSet {
                index: extra.to_string(),
                g: ambient.g,
                n: ambient.n,
            });
        }
        Ok(AdjointParams {
            space,
            ambient,
            a,
            alpha_irr,
            alphas,
        })
    }

    /// All boundary multipliers equal to one value.
    pub fn uniform(
        space: Space,
        ambient: MarkedGenus,
        a: Rat,
        alpha_irr: Rat,
        alpha: Rat,
    ) -> Result<Self> {
        let alphas = adjoint_classes(space, ambient)
            .into_iter()
            .map(|idx| (idx, alpha.clone()))
            .collect();
        AdjointParams::new(space, ambient, a, alpha_irr, alphas)
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn ambient(&self) -> MarkedGenus {
        self.ambient
    }

    pub fn a(&self) -> &Rat {
        &self.a
    }

    pub fn alpha_irr(&self) -> &Rat {
        &self.alpha_irr
    }

    pub fn alphas(&self) -> impl Iterator<Item = (&PairIndex, &Rat)> {
        self.alphas.iter()
    }

    /// Multiplier of a canonical class. The map is total by construction,
    /// so a missing key means the class does not belong to this space.
    pub fn alpha(&self, idx: &PairIndex) -> &Rat {
        self.alphas
            .get(idx)
            .expect("adjoint multipliers are total over the boundary classes")
    }

    /// Multiplier of the class of a raw `(i, I)`, canonicalized.
    pub fn alpha_of(&self, i: u32, marks: impl IntoIterator<Item = u32>) -> Result<Rat> {
        Ok(self.alpha(&self.ambient.pair_class(i, marks)?).clone())
    }

    /// The multiplier of `[1, {}]`, present only on the stable-space side.
    pub fn alpha_one_empty(&self) -> Option<Rat> {
        if self.space != Space::Mgn {
            return None;
        }
        self.ambient
            .one_empty_class()
            .map(|idx| self.alpha(&idx).clone())
    }

    /// Expand into the basis: `(13+a) lambda - (2-alpha_irr) delta_irr -
    /// sum (2-alpha_{i,I}) delta_{i,I}`.
    pub fn divisor_class(&self) -> DivisorClass {
        let mut out = DivisorClass::zero(self.space, self.ambient);
        if self.ambient.g > 0 {
            out.lambda = int(13) + &self.a;
            out.irr = &self.alpha_irr - int(2);
        }
        for (idx, alpha) in &self.alphas {
            let c = alpha - int(2);
            if !c.is_zero() {
                out.boundary.insert(idx.clone(), c);
            }
        }
        out
    }

    /// Push forward along the contraction to the pseudostable space:
    /// the `[1, {}]` multiplier is dropped, everything else is kept.
    pub fn pushforward(&self) -> Result<AdjointParams> {
        check_space_params(self, Space::Mgn)?;
        let one_empty = self.ambient.one_empty_class();
        let alphas = self
            .alphas
            .iter()
            .filter(|(idx, _)| Some(*idx) != one_empty.as_ref())
            .map(|(idx, v)| (idx.clone(), v.clone()))
            .collect();
        AdjointParams::new(
            Space::MgnPs,
            self.ambient,
            self.a.clone(),
            self.alpha_irr.clone(),
            alphas,
        )
    }
}

fn check_unit_interval(name: &str, v: &Rat) -> Result<()> {
    if *v < Rat::zero() || *v > Rat::one() {
        return Err(DomainError::CoefficientOutOfRange {
            name: name.into(),
            value: v.to_string(),
        });
    }
    Ok(())
}

pub(crate) fn check_space_params(p: &AdjointParams, expected: Space) -> Result<()> {
    if p.space != expected {
        return Err(DomainError::WrongSpace {
            expected: expected.name(),
            found: p.space.name(),
        });
    }
    Ok(())
}

/// Push a class forward along the contraction of elliptic tails:
/// `lambda` and `delta_irr` are preserved, `delta_(1,{})` dies, every
/// other boundary class is preserved.
pub fn pushforward_upsilon(l: &DivisorClass) -> Result<DivisorClass> {
    check_space(l, Space::Mgn)?;
    let one_empty = l.ambient.one_empty_class();
    let mut out = DivisorClass::zero(Space::MgnPs, l.ambient);
    out.lambda = l.lambda.clone();
    out.irr = l.irr.clone();
    out.boundary = l
        .boundary
        .iter()
        .filter(|(idx, _)| Some(*idx) != one_empty.as_ref())
        .map(|(idx, c)| (idx.clone(), c.clone()))
        .collect();
    Ok(out)
}

/// Pull a class back from the pseudostable space:
/// `lambda -> lambda + delta_(1,{})`, `delta_irr -> delta_irr +
/// 12 delta_(1,{})`, boundary classes are preserved.
pub fn pullback_upsilon(l: &DivisorClass) -> Result<DivisorClass> {
    check_space(l, Space::MgnPs)?;
    let mut out = DivisorClass::zero(Space::Mgn, l.ambient);
    out.lambda = l.lambda.clone();
    out.irr = l.irr.clone();
    out.boundary = l.boundary.clone();
    if let Some(one_empty) = l.ambient.one_empty_class() {
        let c = &l.lambda + int(12) * &l.irr;
        if !c.is_zero() {
            out.boundary.insert(one_empty, c);
        }
    }
    Ok(out)
}

/// The exact multiple of `delta_(1,{})` separating an adjoint divisor
/// from the pullback of its pushforward:
/// `L = pull(push(L)) + (9 + alpha_(1,{}) - a - 12 alpha_irr) delta_(1,{})`.
pub fn push_pull_defect(p: &AdjointParams) -> Result<Rat> {
    check_space_params(p, Space::Mgn)?;
    let (g, n) = p.ambient.pair();
    if (g, n) == (1, 1) || (g, n) == (2, 0) {
        return Err(DomainError::ExcludedInstance {
            op: "push_pull_defect",
            g,
            n,
        });
    }
    let alpha_one = p
        .alpha_one_empty()
        .expect("[1,{}] exists away from the excluded instances");
    Ok(int(9) + alpha_one - &p.a - int(12) * &p.alpha_irr)
}

/// Consecutive class pairs `{[t, I], [t+1, I]}` contained in a subset,
/// deduplicated, each sorted. Pairs touching the class `[1, {}]` are
/// skipped: they carry no bridge curve and impose no relation.
pub(crate) fn consecutive_pairs_in(t: &TSubset) -> Vec<(PairIndex, PairIndex)> {
    let amb = t.ambient();
    let one_empty = amb.one_empty_class();
    let mut seen: BTreeSet<(PairIndex, PairIndex)> = BTreeSet::new();
    for m in t.pair_members() {
        if Some(m) == one_empty.as_ref() {
            continue;
        }
        // both representatives of the class give candidate partners
        let comp: BTreeSet<u32> = amb.marks().filter(|k| !m.marks().contains(k)).collect();
        let reps = [(m.genus(), m.marks().clone()), (amb.g - m.genus(), comp)];
        for (i, marks) in reps {
            if let Ok(up) = amb.pair_class(i + 1, marks.iter().copied()) {
                if t.contains_pair(&up) && Some(&up) != one_empty.as_ref() {
                    let (a, b) = if *m <= up {
                        (m.clone(), up)
                    } else {
                        (up, m.clone())
                    };
                    seen.insert((a, b));
                }
            }
        }
    }
    seen.into_iter().collect()
}

/// Whether a class on the pseudostable space is `T`-compatible:
/// `a + 10 b_irr = 0` when `irr` is in `T` (and `g >= 2`), and
/// `a + 12 b_irr - b_{t,I} - b_{t+1,I} = 0` for every consecutive pair in
/// `T` away from `[1, {}]`, coefficients read off the stored expansion.
/// Equivalently, the class kills every elliptic bridge curve whose type
/// lies in `T`; compatibility with `T` and with its admissible reduction
/// agree.
pub fn is_t_compatible(l: &DivisorClass, t: &TSubset) -> Result<bool> {
    check_space(l, Space::MgnPs)?;
    check_ambient(l.ambient, t.ambient())?;
    if l.ambient.g >= 2 && t.contains_irr() {
        let v = &l.lambda + int(10) * &l.irr;
        if !v.is_zero() {
            return Ok(false);
        }
    }
    for (a, b) in consecutive_pairs_in(t) {
        let v = &l.lambda + int(12) * &l.irr - l.coeff(&a) - l.coeff(&b);
        if !v.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The crepant pullback of the canonical class of the compactification
/// attached to a Q-Gorenstein subset `T`:
/// `13 lambda - 2 delta + psi - 8 sum delta_(1,{j})` over the mark pairs
/// `{[0,{j}], [1,{j}]}` contained in `T`.
///
/// Defined away from `(1,1)`, `(2,0)`, `(1,2)`, `(2,1)`, `(3,0)` and only
/// when the admissible reduction of `T` equals its divisorial part.
pub fn canonical_pullback(t: &TSubset) -> Result<DivisorClass> {
    let amb = t.ambient();
    let (g, n) = amb.pair();
    if [(1, 1), (2, 0), (1, 2), (2, 1), (3, 0)].contains(&(g, n)) {
        return Err(DomainError::ExcludedInstance {
            op: "canonical_pullback",
            g,
            n,
        });
    }
    let reduced = t.admissible_reduction();
    if reduced != t.divisorial_part() {
        return Err(DomainError::NotQGorenstein);
    }
    let mut out = canonical_plus_psi(Space::MgnPs, amb);
    let mut seen: BTreeSet<PairIndex> = BTreeSet::new();
    for j in amb.marks() {
        let (a, b) = match (amb.pair_class(0, [j]), amb.pair_class(1, [j])) {
            (Ok(a), Ok(b)) => (a, b),
            _ => continue,
        };
        if t.contains_pair(&a) && t.contains_pair(&b) && seen.insert(b.clone()) {
            out.add_boundary_class(b, int(-8))?;
        }
    }
    Ok(out)
}

/// Pull a class back along the gluing map from the genus-zero space with
/// `g + n` marks (elliptic tails at the last `g` marks):
/// `lambda` and `delta_irr` die, and `delta_{i,I}` spreads over
/// `delta_(0, I + J)` for the tail subsets `J` of size `i`.
pub fn pullback_flag_map(l: &DivisorClass) -> Result<DivisorClass> {
    check_space(l, Space::Mgn)?;
    let (g, n) = l.ambient.pair();
    let target = MarkedGenus::new(0, g + n);
    let tails: Vec<u32> = (n + 1..=n + g).collect();
    let mut out = DivisorClass::zero(Space::Mgn, target);
    for (idx, c) in &l.boundary {
        for tail_part in k_subsets(&tails, idx.genus() as usize) {
            let marks = idx.marks().iter().copied().chain(tail_part);
            out.add_boundary(0, marks, c.clone())?;
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Wire formats
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct BoundaryTermWire {
    i: u32,
    #[serde(rename = "I")]
    marks: Vec<u32>,
    c: String,
}

#[derive(Serialize, Deserialize)]
struct DivisorWire {
    space: Space,
    g: u32,
    n: u32,
    lambda: String,
    irr: String,
    boundary: Vec<BoundaryTermWire>,
}

impl Serialize for DivisorClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let wire = DivisorWire {
            space: self.space,
            g: self.ambient.g,
            n: self.ambient.n,
            lambda: self.lambda.to_string(),
            irr: self.irr.to_string(),
            boundary: self
                .boundary
                .iter()
                .map(|(idx, c)| BoundaryTermWire {
                    i: idx.genus(),
                    marks: idx.marks().iter().copied().collect(),
                    c: c.to_string(),
                })
                .collect(),
        };
        wire.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DivisorClass {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let wire = DivisorWire::deserialize(d)?;
        let ambient = MarkedGenus::new(wire.g, wire.n);
        let mut out = DivisorClass::zero(wire.space, ambient);
        let lambda = parse(&wire.lambda).map_err(D::Error::custom)?;
        out.set_lambda(lambda).map_err(D::Error::custom)?;
        let irr = parse(&wire.irr).map_err(D::Error::custom)?;
        out.set_irr(irr).map_err(D::Error::custom)?;
        for term in wire.boundary {
            let c = parse(&term.c).map_err(D::Error::custom)?;
            out.add_boundary(term.i, term.marks, c)
                .map_err(D::Error::custom)?;
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct AlphaTermWire {
    i: u32,
    #[serde(rename = "I")]
    marks: Vec<u32>,
    alpha: String,
}

#[derive(Serialize, Deserialize)]
struct AdjointWire {
    space: Space,
    g: u32,
    n: u32,
    a: String,
    alpha_irr: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alpha_default: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    alphas: Vec<AlphaTermWire>,
}

impl Serialize for AdjointParams {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let wire = AdjointWire {
            space: self.space,
            g: self.ambient.g,
            n: self.ambient.n,
            a: self.a.to_string(),
            alpha_irr: self.alpha_irr.to_string(),
            alpha_default: None,
            alphas: self
                .alphas
                .iter()
                .map(|(idx, v)| AlphaTermWire {
                    i: idx.genus(),
                    marks: idx.marks().iter().copied().collect(),
                    alpha: v.to_string(),
                })
                .collect(),
        };
        wire.serialize(s)
    }
}

impl<'de> Deserialize<'de> for AdjointParams {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let wire = AdjointWire::deserialize(d)?;
        let ambient = MarkedGenus::new(wire.g, wire.n);
        let a = parse(&wire.a).map_err(D::Error::custom)?;
        let alpha_irr = parse(&wire.alpha_irr).map_err(D::Error::custom)?;
        let mut alphas: BTreeMap<PairIndex, Rat> = BTreeMap::new();
        if let Some(default) = &wire.alpha_default {
            let v = parse(default).map_err(D::Error::custom)?;
            for idx in adjoint_classes(wire.space, ambient) {
                alphas.insert(idx, v.clone());
            }
        }
        for term in wire.alphas {
            let idx = ambient
                .pair_class(term.i, term.marks)
                .map_err(D::Error::custom)?;
            let v = parse(&term.alpha).map_err(D::Error::custom)?;
            alphas.insert(idx, v);
        }
        AdjointParams::new(wire.space, ambient, a, alpha_irr, alphas).map_err(D::Error::custom)
    }
}
