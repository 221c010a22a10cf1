//! The ample-model classifier for adjoint divisors, and the chamber
//! sweep over coefficient grids.
//!
//! For an adjoint divisor on the stable space the classifier walks a
//! decision ladder:
//!
//! - (A) F-ample by the closed form: the identity is the ample model.
//! - (B) F-nef with only the elliptic tail curve degenerate: the
//!   contraction to the pseudostable space.
//! - (C) inside the chamber-decomposition region (multiplier spread
//!   below `1/3`, the two lower bounds on `alpha_irr` holding): the
//!   model is read off wall comparisons, and the subset `T` collects the
//!   bridges whose lower bounds hold with equality.
//! - (D) otherwise, a capped search over admissible subsets looks for
//!   the unique `T` whose face matches the degeneracy pattern of the
//!   pushforward.
//!
//! Every classification carries a certificate: the clause that fired and
//! the inequalities it evaluated, with both sides as exact rationals.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::divisor::{pushforward_upsilon, AdjointParams, Space};
use crate::error::{DomainError, Result};
use crate::fcurve::{bridge_curves, BridgeType};
use crate::index_set::{MarkedGenus, PairIndex, TSubset};
use crate::positivity::{
    adjoint_fnef_closed_form, ps_adjoint_fnef_for_t, verdict_matches_t, FnefMode,
};
use crate::rat::{int, parse, rat, Rat};

/// Cap on the number of admissible subsets clause (D) will search.
pub const SEARCH_CAP: u64 = 1 << 16;

/// The ample model of an adjoint divisor, as far as it is characterized.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum AmpleModel {
    /// The divisor is ample; the identity is its own ample model.
    Identity,
    /// The contraction of elliptic tails to the pseudostable space.
    UpsilonPs,
    /// The contraction onto the compactification of an admissible `T`.
    UpsilonT(TSubset),
    /// No clause applies.
    Unclassified(UnclassifiedReason),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum UnclassifiedReason {
    /// The coefficients sit outside the characterized region.
    OutsideRegion,
    /// The admissible-subset search would exceed its cap.
    SearchCapped,
    /// The instance `(g, n)` is outside the supported range.
    UnsupportedInstance,
}

/// Which ladder clause produced the result.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Clause {
    /// (A) closed-form F-ample.
    FAmple,
    /// (B) closed-form F-nef with only the tail curve degenerate.
    NefEllOnly,
    /// (C) chamber region, ample wall.
    RegionIdentity,
    /// (C) chamber region, pseudostable band.
    RegionPs,
    /// (C) chamber region, contracted face read off wall equalities.
    RegionT,
    /// (D) admissible-subset search.
    SearchT,
    /// (D) search hit in the band where only the pushforward's ample
    /// model is asserted.
    SearchTPushforwardOnly,
    /// No clause fired.
    NoClause,
}

impl Clause {
    pub fn short(&self) -> &'static str {
        match self {
            Clause::FAmple => "A",
            Clause::NefEllOnly => "B",
            Clause::RegionIdentity => "C1",
            Clause::RegionPs => "C2",
            Clause::RegionT => "C3",
            Clause::SearchT => "D1",
            Clause::SearchTPushforwardOnly => "D2",
            Clause::NoClause => "-",
        }
    }
}

/// One recorded inequality: `lhs rel rhs`, both sides exact.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct IneqCheck {
    pub name: String,
    pub lhs: String,
    pub rel: &'static str,
    pub rhs: String,
    pub holds: bool,
}

impl IneqCheck {
    fn new(name: impl Into<String>, lhs: &Rat, rel: &'static str, rhs: &Rat, holds: bool) -> Self {
        IneqCheck {
            name: name.into(),
            lhs: lhs.to_string(),
            rel,
            rhs: rhs.to_string(),
            holds,
        }
    }

    fn flag(name: impl Into<String>, holds: bool) -> Self {
        IneqCheck {
            name: name.into(),
            lhs: String::new(),
            rel: "",
            rhs: String::new(),
            holds,
        }
    }
}

/// The clause that fired and the exact inequality evaluations behind it.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Certificate {
    pub clause: Clause,
    pub checks: Vec<IneqCheck>,
    pub notes: Vec<String>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AmpleModelResult {
    pub model: AmpleModel,
    pub certificate: Certificate,
}

impl AmpleModelResult {
    pub fn model_label(&self) -> String {
        match &self.model {
            AmpleModel::Identity => "identity".into(),
            AmpleModel::UpsilonPs => "ps".into(),
            AmpleModel::UpsilonT(_) => "upsilon_t".into(),
            AmpleModel::Unclassified(r) => format!(
                "unclassified:{}",
                match r {
                    UnclassifiedReason::OutsideRegion => "outside_region",
                    UnclassifiedReason::SearchCapped => "search_capped",
                    UnclassifiedReason::UnsupportedInstance => "unsupported_instance",
                }
            ),
        }
    }

    pub fn t_label(&self) -> String {
        match &self.model {
            AmpleModel::UpsilonT(t) => t.to_string(),
            _ => String::new(),
        }
    }
}

fn wall_ps(p: &AdjointParams) -> Option<Rat> {
    // (9 - a + alpha_(1,{})) / 12
    p.alpha_one_empty()
        .map(|alpha_one| (int(9) - p.a() + alpha_one) / int(12))
}

fn spread_bounds(p: &AdjointParams) -> Option<(Rat, Rat)> {
    let mut values = p.alphas().map(|(_, v)| v);
    let first = values.next()?.clone();
    let mut lo = first.clone();
    let mut hi = first;
    for v in values {
        if *v < lo {
            lo = v.clone();
        }
        if *v > hi {
            hi = v.clone();
        }
    }
    Some((lo, hi))
}

/// Classify the ample model of an adjoint divisor on the stable space.
/// Total: hypothesis failures yield `Unclassified`, never errors.
pub fn classify(p: &AdjointParams) -> AmpleModelResult {
    let mut checks: Vec<IneqCheck> = Vec::new();
    let mut notes: Vec<String> = Vec::new();
    if p.space() != Space::Mgn {
        notes.push("classification expects coefficients on the stable space".into());
        return AmpleModelResult {
            model: AmpleModel::Unclassified(UnclassifiedReason::UnsupportedInstance),
            certificate: Certificate {
                clause: Clause::NoClause,
                checks,
                notes,
            },
        };
    }
    let amb = p.ambient();
    let (g, n) = amb.pair();

    // (A) F-ample
    let ample = adjoint_fnef_closed_form(p, FnefMode::Ample).expect("stable-space closed form");
    checks.push(IneqCheck::flag("closed_form_f_ample", ample));
    if ample {
        return AmpleModelResult {
            model: AmpleModel::Identity,
            certificate: Certificate {
                clause: Clause::FAmple,
                checks,
                notes,
            },
        };
    }

    // (B) F-nef, tail curve only
    if (g, n) != (1, 1) && (g, n) != (2, 0) {
        let nef_tail =
            adjoint_fnef_closed_form(p, FnefMode::NefEllOnly).expect("stable-space closed form");
        checks.push(IneqCheck::flag("closed_form_f_nef_tail_only", nef_tail));
        if nef_tail {
            return AmpleModelResult {
                model: AmpleModel::UpsilonPs,
                certificate: Certificate {
                    clause: Clause::NefEllOnly,
                    checks,
                    notes,
                },
            };
        }
    }

    let supported = g >= 1 && ![(1, 0), (1, 1), (2, 0), (1, 2)].contains(&(g, n));
    if !supported {
        notes.push(format!(
            "instance ({g}, {n}) has no further characterization"
        ));
        return AmpleModelResult {
            model: AmpleModel::Unclassified(UnclassifiedReason::UnsupportedInstance),
            certificate: Certificate {
                clause: Clause::NoClause,
                checks,
                notes,
            },
        };
    }

    // (C) the chamber-decomposition region
    if let Some(result) = classify_in_region(p, &mut checks, &notes) {
        return result;
    }

    // (D) capped search over admissible subsets
    classify_by_search(p, checks, notes)
}

/// Clause (C): hypotheses and wall comparisons of the characterized
/// region. Returns `None` when a hypothesis fails, deferring to (D).
fn classify_in_region(
    p: &AdjointParams,
    checks: &mut Vec<IneqCheck>,
    notes: &[String],
) -> Option<AmpleModelResult> {
    let amb = p.ambient();
    let g = amb.g;
    let third = rat(1, 3);

    let (lo, hi) = spread_bounds(p)?;
    let spread = &hi - &lo;
    let spread_ok = spread < third;
    checks.push(IneqCheck::new(
        "multiplier_spread",
        &spread,
        "<",
        &third,
        spread_ok,
    ));
    if !spread_ok {
        return None;
    }

    let one = Rat::one();
    let irr_gate_ok = *p.alpha_irr() != one || lo > Rat::zero();
    checks.push(IneqCheck::flag(
        "alpha_irr_one_forces_positive_multipliers",
        irr_gate_ok,
    ));
    if !irr_gate_ok {
        return None;
    }

    // lower bound from the irr bridge
    let mut irr_equality = false;
    if g >= 2 {
        let bound = (int(7) - p.a()) / int(10);
        let ord = bound.cmp(p.alpha_irr());
        let holds = ord != Ordering::Greater;
        checks.push(IneqCheck::new(
            "irr_bridge_lower_bound",
            &bound,
            "<=",
            p.alpha_irr(),
            holds,
        ));
        if !holds {
            return None;
        }
        irr_equality = ord == Ordering::Equal;
    }

    // lower bounds from the pair bridges
    let mut equal_pairs: Vec<BridgeType> = Vec::new();
    for bridge in bridge_curves(amb, None) {
        if let BridgeType::Pair { low, high } = &bridge {
            let bound = (int(7) - p.a() + p.alpha(low) + p.alpha(high)) / int(12);
            let ord = bound.cmp(p.alpha_irr());
            let holds = ord != Ordering::Greater;
            checks.push(IneqCheck::new(
                format!("pair_bridge_lower_bound {bridge}"),
                &bound,
                "<=",
                p.alpha_irr(),
                holds,
            ));
            if !holds {
                return None;
            }
            if ord == Ordering::Equal {
                equal_pairs.push(bridge.clone());
            }
        }
    }

    let wall_identity = wall_ps(p).expect("[1,{}] exists on supported instances");
    let wall_t = (int(9) - p.a()) / int(12);
    let above_identity_wall = *p.alpha_irr() > wall_identity;
    checks.push(IneqCheck::new(
        "alpha_irr_vs_identity_wall",
        p.alpha_irr(),
        ">",
        &wall_identity,
        above_identity_wall,
    ));
    if above_identity_wall {
        return Some(AmpleModelResult {
            model: AmpleModel::Identity,
            certificate: Certificate {
                clause: Clause::RegionIdentity,
                checks: checks.clone(),
                notes: notes.to_vec(),
            },
        });
    }
    let above_t_wall = *p.alpha_irr() > wall_t;
    checks.push(IneqCheck::new(
        "alpha_irr_vs_contraction_wall",
        p.alpha_irr(),
        ">",
        &wall_t,
        above_t_wall,
    ));
    if above_t_wall {
        return Some(AmpleModelResult {
            model: AmpleModel::UpsilonPs,
            certificate: Certificate {
                clause: Clause::RegionPs,
                checks: checks.clone(),
                notes: notes.to_vec(),
            },
        });
    }

    // at or below the contraction wall: T collects the equality bridges
    let mut t = TSubset::empty(amb);
    if irr_equality {
        t.insert(crate::index_set::BoundaryIndex::Irr)
            .expect("irr is always canonical");
    }
    for bridge in &equal_pairs {
        for idx in bridge.type_classes() {
            t.insert(crate::index_set::BoundaryIndex::Pair(idx.clone()))
                .expect("bridge classes are canonical");
        }
    }
    debug_assert!(t.is_admissible());
    Some(finish_with_t(
        t,
        Clause::RegionT,
        checks.clone(),
        notes.to_vec(),
    ))
}

/// An `UpsilonT` result, with the empty subset canonicalized to the
/// pseudostable contraction for reporting.
fn finish_with_t(
    t: TSubset,
    clause: Clause,
    checks: Vec<IneqCheck>,
    mut notes: Vec<String>,
) -> AmpleModelResult {
    let model = if t.is_empty() {
        notes.push("empty T: the contraction is the pseudostable one".into());
        AmpleModel::UpsilonPs
    } else {
        AmpleModel::UpsilonT(t)
    };
    AmpleModelResult {
        model,
        certificate: Certificate {
            clause,
            checks,
            notes,
        },
    }
}

/// Clause (D): search all admissible subsets for the unique one whose
/// face matches the degeneracy pattern of the pushforward.
fn classify_by_search(
    p: &AdjointParams,
    mut checks: Vec<IneqCheck>,
    mut notes: Vec<String>,
) -> AmpleModelResult {
    let amb = p.ambient();
    let wall_identity = wall_ps(p).expect("[1,{}] exists on supported instances");
    let wall_adjoint = (int(10) - p.a()) / int(12);

    let below_identity_wall = *p.alpha_irr() <= wall_identity;
    checks.push(IneqCheck::new(
        "alpha_irr_vs_identity_wall",
        p.alpha_irr(),
        "<=",
        &wall_identity,
        below_identity_wall,
    ));
    let below_adjoint_wall = *p.alpha_irr() <= wall_adjoint;
    checks.push(IneqCheck::new(
        "alpha_irr_vs_adjoint_pullback_wall",
        p.alpha_irr(),
        "<=",
        &wall_adjoint,
        below_adjoint_wall,
    ));
    if !below_adjoint_wall {
        return AmpleModelResult {
            model: AmpleModel::Unclassified(UnclassifiedReason::OutsideRegion),
            certificate: Certificate {
                clause: Clause::NoClause,
                checks,
                notes,
            },
        };
    }

    let count = amb
        .count_admissible()
        .ok()
        .and_then(|c| c.to_u64())
        .unwrap_or(u64::MAX);
    if count > SEARCH_CAP {
        notes.push(format!(
            "admissible-subset search capped at {SEARCH_CAP} (instance has {count})"
        ));
        return AmpleModelResult {
            model: AmpleModel::Unclassified(UnclassifiedReason::SearchCapped),
            certificate: Certificate {
                clause: Clause::NoClause,
                checks,
                notes,
            },
        };
    }

    let pushed = p.pushforward().expect("classify works on the stable space");
    let mut hits: Vec<TSubset> = Vec::new();
    for t in amb
        .enumerate_admissible(SEARCH_CAP)
        .expect("search is capped")
    {
        if ps_adjoint_fnef_for_t(&pushed, &t).expect("supported instance") {
            hits.push(t);
        }
    }
    if hits.len() == 1 {
        let t = hits.pop().expect("one hit");
        checks.push(IneqCheck::flag("pushforward_face_match", true));
        if below_identity_wall {
            return finish_with_t(t, Clause::SearchT, checks, notes);
        }
        notes.push(
            "pushforward-only: the pushforward is semiample onto this model, \
             but the divisor itself sits above the identity wall"
                .into(),
        );
        return finish_with_t(t, Clause::SearchTPushforwardOnly, checks, notes);
    }
    if hits.is_empty() {
        checks.push(IneqCheck::flag("pushforward_face_match", false));
    } else {
        // the degeneracy pattern determines at most one subset
        notes.push("multiple matching subsets; refusing to choose".into());
    }
    AmpleModelResult {
        model: AmpleModel::Unclassified(UnclassifiedReason::OutsideRegion),
        certificate: Certificate {
            clause: Clause::NoClause,
            checks,
            notes,
        },
    }
}

/// Confirm an `UpsilonT` classification by brute force: the pushforward
/// must vanish exactly on the face of `T`, and the divisor must sit at
/// or below the identity wall.
pub fn uniqueness_check(p: &AdjointParams, r: &AmpleModelResult) -> Result<bool> {
    let AmpleModel::UpsilonT(t) = &r.model else {
        return Err(DomainError::NotAnUpsilonTResult);
    };
    let l_ps = pushforward_upsilon(&p.divisor_class())?;
    if !verdict_matches_t(&l_ps, t)? {
        return Ok(false);
    }
    let wall = wall_ps(p).ok_or(DomainError::ExcludedInstance {
        op: "uniqueness_check",
        g: p.ambient().g,
        n: p.ambient().n,
    })?;
    Ok(*p.alpha_irr() <= wall)
}

// ---------------------------------------------------------------------------
// Grid sweep
// ---------------------------------------------------------------------------

/// An inclusive arithmetic progression of exact rationals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatRange {
    pub start: Rat,
    pub stop: Rat,
    pub step: Rat,
}

impl RatRange {
    pub fn single(value: Rat) -> Self {
        RatRange {
            start: value.clone(),
            stop: value,
            step: Rat::one(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.step <= Rat::zero() {
            return Err(DomainError::InvalidGrid("step must be positive".into()));
        }
        if self.start > self.stop {
            return Err(DomainError::InvalidGrid("empty range".into()));
        }
        Ok(())
    }

    /// The values `start, start + step, ..., <= stop`.
    pub fn values(&self) -> Result<Vec<Rat>> {
        self.validate()?;
        let count = ((&self.stop - &self.start) / &self.step)
            .floor()
            .to_integer()
            .to_u64()
            .ok_or_else(|| DomainError::InvalidGrid("range too large".into()))?;
        if count > 1_000_000 {
            return Err(DomainError::InvalidGrid("range too large".into()));
        }
        Ok((0..=count)
            .map(|k| &self.start + int(k as i64) * &self.step)
            .collect())
    }
}

/// The boundary-multiplier profile of a sweep: one shared value running
/// over a range, or a fixed per-class assignment.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum AlphaProfile {
    Uniform(RatRange),
    PerIndex(BTreeMap<PairIndex, Rat>),
}

/// A coefficient grid: ranges for `a` and `alpha_irr`, and a multiplier
/// profile. Points are visited in row-major order (`a` outermost, then
/// the profile value, then `alpha_irr`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GridSpec {
    pub ambient: MarkedGenus,
    pub a: RatRange,
    pub alpha_irr: RatRange,
    pub profile: AlphaProfile,
}

/// One classified grid point.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChamberRecord {
    pub point: AdjointParams,
    pub a: Rat,
    pub alpha_irr: Rat,
    /// The shared multiplier value for uniform profiles.
    pub alpha: Option<Rat>,
    pub result: AmpleModelResult,
}

/// Streaming iterator over the classified grid.
pub struct Sweep {
    ambient: MarkedGenus,
    a_values: Vec<Rat>,
    alpha_values: Vec<Option<Rat>>,
    irr_values: Vec<Rat>,
    per_index: Option<BTreeMap<PairIndex, Rat>>,
    next: usize,
}

impl Sweep {
    pub fn len(&self) -> usize {
        self.a_values.len() * self.alpha_values.len() * self.irr_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl Iterator for Sweep {
    type Item = ChamberRecord;

    fn next(&mut self) -> Option<ChamberRecord> {
        if self.next >= self.len() {
            return None;
        }
        let idx = self.next;
        self.next += 1;
        let per_irr = self.irr_values.len();
        let per_alpha = self.alpha_values.len() * per_irr;
        let a = &self.a_values[idx / per_alpha];
        let alpha = &self.alpha_values[idx % per_alpha / per_irr];
        let alpha_irr = &self.irr_values[idx % per_irr];
        let point = match (alpha, &self.per_index) {
            (Some(alpha), _) => AdjointParams::uniform(
                Space::Mgn,
                self.ambient,
                a.clone(),
                alpha_irr.clone(),
                alpha.clone(),
            ),
            (None, Some(map)) => AdjointParams::new(
                Space::Mgn,
                self.ambient,
                a.clone(),
                alpha_irr.clone(),
                map.clone(),
            ),
            (None, None) => unreachable!("profile fixed at construction"),
        }
        .expect("grid bounds validated at construction");
        let result = classify(&point);
        Some(ChamberRecord {
            a: a.clone(),
            alpha_irr: alpha_irr.clone(),
            alpha: alpha.clone(),
            result,
            point,
        })
    }
}

/// Classify every point of a grid, in row-major order.
pub fn sweep(spec: &GridSpec) -> Result<Sweep> {
    let a_values = spec.a.values()?;
    if a_values.iter().any(|v| *v < Rat::zero()) {
        return Err(DomainError::InvalidGrid("a must stay nonnegative".into()));
    }
    let irr_values = spec.alpha_irr.values()?;
    let unit = |v: &Rat| *v >= Rat::zero() && *v <= Rat::one();
    if !irr_values.iter().all(unit) {
        return Err(DomainError::InvalidGrid(
            "alpha_irr must stay within [0, 1]".into(),
        ));
    }
    let (alpha_values, per_index) = match &spec.profile {
        AlphaProfile::Uniform(range) => {
            let values = range.values()?;
            if !values.iter().all(unit) {
                return Err(DomainError::InvalidGrid(
                    "multipliers must stay within [0, 1]".into(),
                ));
            }
            (values.into_iter().map(Some).collect(), None)
        }
        AlphaProfile::PerIndex(map) => {
            // validated here so iteration cannot fail
            AdjointParams::new(
                Space::Mgn,
                spec.ambient,
                a_values[0].clone(),
                irr_values[0].clone(),
                map.clone(),
            )?;
            (vec![None], Some(map.clone()))
        }
    };
    Ok(Sweep {
        ambient: spec.ambient,
        a_values,
        alpha_values,
        irr_values,
        per_index,
        next: 0,
    })
}

/// Tally of model labels over a sweep.
#[derive(Clone, Default, Debug, Serialize)]
pub struct SweepSummary {
    pub counts: BTreeMap<String, u64>,
}

impl SweepSummary {
    pub fn record(&mut self, r: &AmpleModelResult) {
        *self.counts.entry(r.model_label()).or_insert(0) += 1;
    }
}

// ---------------------------------------------------------------------------
// Wire formats
// ---------------------------------------------------------------------------

impl Serialize for AmpleModelResult {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            model: &'a str,
            #[serde(skip_serializing_if = "Option::is_none")]
            t: Option<&'a TSubset>,
            clause: &'a str,
            certificate: &'a Certificate,
        }
        let model = self.model_label();
        let t = match &self.model {
            AmpleModel::UpsilonT(t) => Some(t),
            _ => None,
        };
        Wire {
            model: &model,
            t,
            clause: self.certificate.clause.short(),
            certificate: &self.certificate,
        }
        .serialize(s)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RangeWire {
    Single(String),
    Range {
        start: String,
        stop: String,
        step: String,
    },
}

#[derive(Serialize, Deserialize)]
struct ProfileWire {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    uniform: Option<RangeWire>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    per_index: Vec<(u32, Vec<u32>, String)>,
}

#[derive(Serialize, Deserialize)]
struct GridWire {
    g: u32,
    n: u32,
    a: RangeWire,
    alpha_irr: RangeWire,
    alpha: ProfileWire,
}

fn range_from_wire(wire: &RangeWire) -> Result<RatRange> {
    let bad = |e: num_rational::ParseRatioError| DomainError::InvalidGrid(e.to_string());
    Ok(match wire {
        RangeWire::Single(v) => RatRange::single(parse(v).map_err(bad)?),
        RangeWire::Range { start, stop, step } => RatRange {
            start: parse(start).map_err(bad)?,
            stop: parse(stop).map_err(bad)?,
            step: parse(step).map_err(bad)?,
        },
    })
}

fn range_to_wire(range: &RatRange) -> RangeWire {
    if range.start == range.stop {
        RangeWire::Single(range.start.to_string())
    } else {
        RangeWire::Range {
            start: range.start.to_string(),
            stop: range.stop.to_string(),
            step: range.step.to_string(),
        }
    }
}

impl Serialize for GridSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let alpha = match &self.profile {
            AlphaProfile::Uniform(range) => ProfileWire {
                uniform: Some(range_to_wire(range)),
                per_index: Vec::new(),
            },
            AlphaProfile::PerIndex(map) => ProfileWire {
                uniform: None,
                per_index: map
                    .iter()
                    .map(|(idx, v)| {
                        (
                            idx.genus(),
                            idx.marks().iter().copied().collect(),
                            v.to_string(),
                        )
                    })
                    .collect(),
            },
        };
        GridWire {
            g: self.ambient.g,
            n: self.ambient.n,
            a: range_to_wire(&self.a),
            alpha_irr: range_to_wire(&self.alpha_irr),
            alpha,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GridSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let wire = GridWire::deserialize(d)?;
        let ambient = MarkedGenus::new(wire.g, wire.n);
        let a = range_from_wire(&wire.a).map_err(D::Error::custom)?;
        let alpha_irr = range_from_wire(&wire.alpha_irr).map_err(D::Error::custom)?;
        let profile = match (wire.alpha.uniform, wire.alpha.per_index) {
            (Some(range), per) if per.is_empty() => {
                AlphaProfile::Uniform(range_from_wire(&range).map_err(D::Error::custom)?)
            }
            (None, per) if !per.is_empty() => {
                let mut map = BTreeMap::new();
                for (i, marks, v) in per {
                    let idx = ambient.pair_class(i, marks).map_err(D::Error::custom)?;
                    let v = parse(&v).map_err(D::Error::custom)?;
                    map.insert(idx, v);
                }
                AlphaProfile::PerIndex(map)
            }
            _ => {
                return Err(D::Error::custom(
                    "alpha profile needs exactly one of `uniform` or `per_index`",
                ))
            }
        };
        Ok(GridSpec {
            ambient,
            a,
            alpha_irr,
            profile,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index_set::BoundaryIndex;

    fn mg(g: u32, n: u32) -> MarkedGenus {
        MarkedGenus::new(g, n)
    }

    fn uniform_point(g: u32, n: u32, a: Rat, airr: Rat, alpha: Rat) -> AdjointParams {
        AdjointParams::uniform(Space::Mgn, mg(g, n), a, airr, alpha).unwrap()
    }

    #[test]
    fn classify_ladder_examples() {
        // (3,1), a = 0, all multipliers 1
        let r = classify(&uniform_point(3, 1, int(0), int(1), int(1)));
        assert_eq!(r.model, AmpleModel::Identity);
        assert_eq!(r.certificate.clause, Clause::FAmple);

        // alpha_irr = 4/5 sits between the walls 9/12 and 10/12
        let r = classify(&uniform_point(3, 1, int(0), rat(4, 5), int(1)));
        assert_eq!(r.model, AmpleModel::UpsilonPs);

        // alpha_irr = 7/10 with all multipliers 7/10: both lower bounds
        // are equalities, so T is the full maximal admissible subset
        let p = uniform_point(3, 1, int(0), rat(7, 10), rat(7, 10));
        let r = classify(&p);
        let amb = mg(3, 1);
        let full = TSubset::from_members(
            amb,
            [
                BoundaryIndex::Irr,
                amb.boundary_class(0, [1]).unwrap(),
                amb.boundary_class(1, [1]).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(r.model, AmpleModel::UpsilonT(full));
        assert_eq!(r.certificate.clause, Clause::RegionT);
        assert!(uniqueness_check(&p, &r).unwrap());
    }

    #[test]
    fn classify_wall_point_is_ps_with_empty_t() {
        // exactly on the contraction wall with no bridge equalities
        let p = uniform_point(3, 1, int(0), rat(9, 12), rat(11, 12));
        let r = classify(&p);
        assert_eq!(r.model, AmpleModel::UpsilonPs);
        assert_eq!(r.certificate.clause, Clause::RegionT);
        assert!(r.certificate.notes.iter().any(|n| n.contains("empty T")));
    }

    #[test]
    fn classify_outside_region() {
        // alpha_irr below every bridge wall: nothing is characterized
        let r = classify(&uniform_point(3, 1, int(0), rat(1, 2), int(1)));
        assert_eq!(
            r.model,
            AmpleModel::Unclassified(UnclassifiedReason::OutsideRegion)
        );

        // the alpha_irr = 1 gate with a vanishing multiplier falls
        // through to the search, which also finds nothing
        let r = classify(&uniform_point(3, 1, int(0), int(1), int(0)));
        assert_eq!(
            r.model,
            AmpleModel::Unclassified(UnclassifiedReason::OutsideRegion)
        );

        // a spread of at least 1/3 disables the region clause, and here
        // the search finds no matching face either
        let amb = mg(3, 1);
        let one_empty = amb.one_empty_class().unwrap();
        let mut alphas: BTreeMap<PairIndex, Rat> = amb
            .pair_classes()
            .into_iter()
            .map(|idx| (idx, int(1)))
            .collect();
        alphas.insert(one_empty, int(0));
        let p = AdjointParams::new(Space::Mgn, amb, int(0), rat(18, 25), alphas).unwrap();
        let r = classify(&p);
        assert_eq!(
            r.model,
            AmpleModel::Unclassified(UnclassifiedReason::OutsideRegion)
        );
        assert_eq!(r.certificate.clause, Clause::NoClause);
    }

    #[test]
    fn classify_search_clause_agrees_with_region_clause() {
        // spread >= 1/3 disables the region clause; the search must find
        // the same subset the region clause would have produced
        let amb = mg(3, 1);
        let one_empty = amb.one_empty_class().unwrap();
        let mut alphas: BTreeMap<PairIndex, Rat> = amb
            .pair_classes()
            .into_iter()
            .map(|idx| (idx, rat(7, 10)))
            .collect();
        alphas.insert(one_empty, rat(1, 5));
        // pair bridge wall: (7 + 7/10 + 7/10)/12 = 7/10
        let p = AdjointParams::new(Space::Mgn, amb, int(0), rat(7, 10), alphas).unwrap();
        let r = classify(&p);
        assert_eq!(r.certificate.clause, Clause::SearchT);
        match &r.model {
            AmpleModel::UpsilonT(t) => {
                assert!(t.contains_irr());
                assert_eq!(t.len(), 3);
            }
            other => panic!("expected a contraction, got {other:?}"),
        }
        assert!(uniqueness_check(&p, &r).unwrap());
    }

    #[test]
    fn classify_pushforward_only_band() {
        // above the identity wall but below the adjoint-pullback wall,
        // with the tail multiplier forcing a spread of 1: the ladder's
        // closed forms and region clause all fail, yet the pushforward is
        // still ample on the pseudostable space. The search reports the
        // pseudostable model flagged as pushforward-only. A bridge
        // equality is arithmetically impossible in this band, so the
        // matching face is always empty.
        let amb = mg(3, 1);
        let one_empty = amb.one_empty_class().unwrap();
        let mut alphas: BTreeMap<PairIndex, Rat> = amb
            .pair_classes()
            .into_iter()
            .map(|idx| (idx, int(1)))
            .collect();
        alphas.insert(one_empty, int(0));
        // identity wall (9 + 0)/12 = 18/24 < 19/24 <= 20/24 = pullback wall
        let p = AdjointParams::new(Space::Mgn, amb, int(0), rat(19, 24), alphas).unwrap();
        let r = classify(&p);
        assert_eq!(r.certificate.clause, Clause::SearchTPushforwardOnly);
        assert_eq!(r.model, AmpleModel::UpsilonPs);
        assert!(r
            .certificate
            .notes
            .iter()
            .any(|n| n.contains("pushforward-only")));
        // the pushforward pattern matches the empty face by brute force
        let pushed = pushforward_upsilon(&p.divisor_class()).unwrap();
        assert!(verdict_matches_t(&pushed, &TSubset::empty(amb)).unwrap());
    }

    #[test]
    fn uniqueness_check_rejects_wrong_subsets() {
        let amb = mg(3, 1);
        let p = uniform_point(3, 1, int(0), rat(7, 10), rat(7, 10));
        let r = classify(&p);
        assert!(uniqueness_check(&p, &r).unwrap());

        // a strictly smaller admissible subset fails the sign pattern
        let mut irr_only = TSubset::empty(amb);
        irr_only.insert(BoundaryIndex::Irr).unwrap();
        let fake = AmpleModelResult {
            model: AmpleModel::UpsilonT(irr_only),
            certificate: r.certificate.clone(),
        };
        assert!(!uniqueness_check(&p, &fake).unwrap());

        // perturbing one multiplier off the wall changes T
        let p2 = uniform_point(3, 1, int(0), rat(7, 10), rat(7, 10) - rat(1, 1000));
        let r2 = classify(&p2);
        match &r2.model {
            AmpleModel::UpsilonT(t) => assert_eq!(t.len(), 1),
            other => panic!("expected a contraction, got {other:?}"),
        }
        assert!(!uniqueness_check(&p2, &r).unwrap());
    }

    #[test]
    fn ladder_clauses_are_consistent() {
        // on a grid crossing all walls, clause (A) fires exactly when the
        // region clause would report the identity
        for k in 0..=24 {
            let p = uniform_point(3, 1, int(0), rat(k, 24), rat(5, 6));
            let r = classify(&p);
            match r.certificate.clause {
                Clause::FAmple => {
                    assert_eq!(r.model, AmpleModel::Identity);
                    let wall = (int(9) + rat(5, 6)) / int(12);
                    assert!(*p.alpha_irr() > wall);
                }
                Clause::RegionIdentity => {
                    panic!("the region clause should never out-run clause (A)")
                }
                _ => {}
            }
            if let AmpleModel::UpsilonT(t) = &r.model {
                assert!(t.is_admissible());
                assert!(uniqueness_check(&p, &r).unwrap());
            }
        }
    }

    #[test]
    fn sweep_orders_and_counts() {
        let spec = GridSpec {
            ambient: mg(3, 1),
            a: RatRange::single(int(0)),
            alpha_irr: RatRange {
                start: rat(12, 24),
                stop: int(1),
                step: rat(1, 24),
            },
            profile: AlphaProfile::Uniform(RatRange::single(int(1))),
        };
        let records: Vec<ChamberRecord> = sweep(&spec).unwrap().collect();
        assert_eq!(records.len(), 13);
        // with a uniform multiplier of 1 the pair wall sits at 9/12 and
        // the identity wall at 10/12, so the labels transition
        // unclassified -> T -> ps -> identity as alpha_irr grows
        let labels: Vec<String> = records.iter().map(|r| r.result.model_label()).collect();
        let expect = [
            "unclassified:outside_region", // 12/24
            "unclassified:outside_region",
            "unclassified:outside_region",
            "unclassified:outside_region",
            "unclassified:outside_region",
            "unclassified:outside_region", // 17/24
            "upsilon_t",                   // 18/24 = 9/12, pair equality
            "ps",                          // 19/24
            "ps",                          // 20/24 = 10/12, tail wall
            "identity",
            "identity",
            "identity",
            "identity",
        ];
        assert_eq!(labels, expect);
        let mut summary = SweepSummary::default();
        for r in &records {
            summary.record(&r.result);
        }
        assert_eq!(summary.counts.values().sum::<u64>(), 13);
        assert_eq!(summary.counts["identity"], 4);
    }

    #[test]
    fn sweep_with_per_index_profile() {
        let amb = mg(3, 1);
        let profile: BTreeMap<PairIndex, Rat> = amb
            .pair_classes()
            .into_iter()
            .map(|idx| {
                let v = if idx.genus() == 0 {
                    rat(7, 10)
                } else {
                    rat(4, 5)
                };
                (idx, v)
            })
            .collect();
        let spec = GridSpec {
            ambient: amb,
            a: RatRange::single(int(0)),
            alpha_irr: RatRange {
                start: rat(3, 4),
                stop: rat(5, 6),
                step: rat(1, 24),
            },
            profile: AlphaProfile::PerIndex(profile),
        };
        let records: Vec<ChamberRecord> = sweep(&spec).unwrap().collect();
        assert_eq!(records.len(), 3);
        assert!(records.iter().all(|r| r.alpha.is_none()));
        // per-index profiles survive the JSON round trip too
        let text = serde_json::to_string(&spec).unwrap();
        let back: GridSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn grid_spec_round_trip() {
        let spec = GridSpec {
            ambient: mg(3, 1),
            a: RatRange::single(int(0)),
            alpha_irr: RatRange {
                start: int(0),
                stop: int(1),
                step: rat(1, 60),
            },
            profile: AlphaProfile::Uniform(RatRange {
                start: int(0),
                stop: int(1),
                step: rat(1, 60),
            }),
        };
        let text = serde_json::to_string(&spec).unwrap();
        let back: GridSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn invalid_grids_are_rejected() {
        let mut spec = GridSpec {
            ambient: mg(3, 1),
            a: RatRange::single(int(0)),
            alpha_irr: RatRange {
                start: int(0),
                stop: int(1),
                step: int(0),
            },
            profile: AlphaProfile::Uniform(RatRange::single(int(1))),
        };
        assert!(sweep(&spec).is_err());
        spec.alpha_irr.step = int(1);
        spec.alpha_irr.stop = int(2);
        assert!(sweep(&spec).is_err());
    }
}
