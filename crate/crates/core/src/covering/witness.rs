//! Witness searches for the covering theorems on lattice models.
//!
//! Verifiers check the hypotheses on the given instance, search for the
//! discrete witness, and report a counterexample candidate verbatim when the
//! search comes back empty.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::model::{LatticeCover, LatticeFacet, ModelKind};
use super::CoverError;
use crate::chow::DivisorJson;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Theorem {
    Lebesgue,
    Kkm,
    Complement,
    Axes,
    KkmLebesgue,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    WitnessFound,
    HypothesisViolated,
    CounterexampleCandidate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A set touching both facets of an opposite pair.
    SpanningSet { set: usize, name: String, axis: usize },
    /// A complement component meeting every `k`-face of the simplex; faces are
    /// listed by their supporting barycentric coordinates.
    ComplementComponent { k: usize, points: Vec<Vec<u32>>, faces: Vec<Vec<usize>> },
    /// A complement component meeting every `k`-face of the cube parallel to the
    /// coordinate subspace of `axes`.
    ParallelFaces { k: usize, axes: Vec<usize>, points: Vec<Vec<u32>> },
    /// A connected component of set `set` touching both facets of axis `set`.
    SpanningComponent { set: usize, name: String, axis: usize, points: Vec<Vec<u32>> },
    /// A set touching at least `n + 1` facets of a polytope.
    FacetToucher { set: usize, name: String, touched: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Uncovered { point: Vec<u32> },
    UncoveredSample { index: usize },
    Multiplicity { measured: u32, bound: u32 },
    TouchesAllFacets { set: usize, name: String },
    SpansPair { set: usize, name: String, axis: usize },
}

/// Inessentiality certificate attached to a set touching at most `n` facets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TouchCertificate {
    pub set: usize,
    pub name: String,
    pub touched: Vec<usize>,
    pub certificate: Option<DivisorJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Outcome {
    WitnessFound { witness: Witness },
    HypothesisViolated { violation: Violation },
    CounterexampleCandidate { detail: String, instance: serde_json::Value },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub theorem: Theorem,
    #[serde(flatten)]
    pub outcome: Outcome,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub certificates: Vec<TouchCertificate>,
}

impl WitnessReport {
    fn new(theorem: Theorem, outcome: Outcome) -> Self {
        WitnessReport { theorem, outcome, certificates: Vec::new() }
    }

    pub fn verdict(&self) -> Verdict {
        match self.outcome {
            Outcome::WitnessFound { .. } => Verdict::WitnessFound,
            Outcome::HypothesisViolated { .. } => Verdict::HypothesisViolated,
            Outcome::CounterexampleCandidate { .. } => Verdict::CounterexampleCandidate,
        }
    }

    pub fn witness(&self) -> Option<&Witness> {
        match &self.outcome {
            Outcome::WitnessFound { witness } => Some(witness),
            _ => None,
        }
    }

    /// Rechecks a lattice witness against `cover` from scratch. Reports without a
    /// witness, and polytope witnesses, return `false`.
    pub fn revalidate(&self, cover: &LatticeCover) -> bool {
        let Some(w) = self.witness() else { return false };
        let model = &cover.model;
        let to_idx = |pts: &[Vec<u32>]| -> Option<Vec<usize>> { pts.iter().map(|p| model.index_of(p)).collect() };
        let free: Vec<bool> = cover.counts().iter().map(|&c| c == 0).collect();
        match w {
            Witness::SpanningSet { set, axis, .. } => *set < cover.sets.len() && cover.spans_pair(*set, *axis),
            Witness::ComplementComponent { k, points, .. } => {
                let Some(idx) = to_idx(points) else { return false };
                idx.iter().all(|&p| free[p])
                    && is_component(cover, &free, &idx)
                    && simplex_faces(model.n(), *k)
                        .iter()
                        .all(|face| idx.iter().any(|&p| on_simplex_face(model.point(p), face)))
            }
            Witness::ParallelFaces { k, axes, points } => {
                let Some(idx) = to_idx(points) else { return false };
                axes.len() == *k
                    && idx.iter().all(|&p| free[p])
                    && is_component(cover, &free, &idx)
                    && cube_faces_met(cover, &idx, axes) == 1usize << (model.n() - k)
            }
            Witness::SpanningComponent { set, axis, points, .. } => {
                let Some(idx) = to_idx(points) else { return false };
                if *set >= cover.sets.len() || set != axis {
                    return false;
                }
                let m = cover.membership(*set);
                let lo = LatticeFacet::Cube { axis: *axis, upper: false };
                let hi = LatticeFacet::Cube { axis: *axis, upper: true };
                idx.iter().all(|&p| m[p])
                    && is_component(cover, &m, &idx)
                    && idx.iter().any(|&p| model.on_facet(p, lo))
                    && idx.iter().any(|&p| model.on_facet(p, hi))
            }
            Witness::FacetToucher { .. } => false,
        }
    }
}

/// True iff `idx` is exactly one connected component of `subset`.
fn is_component(cover: &LatticeCover, subset: &[bool], idx: &[usize]) -> bool {
    let mut sorted = idx.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    cover.model.components(subset).contains(&sorted)
}

fn require(cover: &LatticeCover, kind: ModelKind) -> Result<(), CoverError> {
    if cover.model.kind() == kind {
        Ok(())
    } else {
        Err(CoverError::WrongModel { expected: kind, got: cover.model.kind() })
    }
}

fn coords(cover: &LatticeCover, idx: &[usize]) -> Vec<Vec<u32>> {
    idx.iter().map(|&p| cover.model.point(p).to_vec()).collect()
}

fn echo(cover: &LatticeCover) -> serde_json::Value {
    serde_json::to_value(cover.to_json()).expect("cover JSON serializes")
}

fn check_full_cover(cover: &LatticeCover) -> Option<Violation> {
    cover
        .uncovered_point()
        .map(|p| Violation::Uncovered { point: cover.model.point(p).to_vec() })
}

fn check_multiplicity(cover: &LatticeCover, bound: usize) -> Option<Violation> {
    let measured = cover.multiplicity();
    (measured as usize > bound).then_some(Violation::Multiplicity { measured, bound: bound as u32 })
}

/// Closed cover of the cube with multiplicity at most `n`: some set touches two
/// opposite facets.
pub fn lebesgue_witness(cover: &LatticeCover) -> Result<WitnessReport, CoverError> {
    require(cover, ModelKind::Cube)?;
    let n = cover.model.n();
    let t = Theorem::Lebesgue;
    if let Some(violation) = check_full_cover(cover).or_else(|| check_multiplicity(cover, n)) {
        return Ok(WitnessReport::new(t, Outcome::HypothesisViolated { violation }));
    }
    for (set, s) in cover.sets.iter().enumerate() {
        if let Some(axis) = (0..n).find(|&axis| cover.spans_pair(set, axis)) {
            let witness = Witness::SpanningSet { set, name: s.name.clone(), axis };
            return Ok(WitnessReport::new(t, Outcome::WitnessFound { witness }));
        }
    }
    Ok(WitnessReport::new(
        t,
        Outcome::CounterexampleCandidate {
            detail: "no set touches both facets of any opposite pair".into(),
            instance: echo(cover),
        },
    ))
}

/// `k`-faces of the `n`-simplex as the `(k+1)`-sets of barycentric coordinates
/// allowed to be nonzero.
pub fn simplex_faces(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0..=n).combinations(k + 1).collect()
}

fn on_simplex_face(point: &[u32], support: &[usize]) -> bool {
    point.iter().enumerate().all(|(i, &a)| a == 0 || support.contains(&i))
}

/// Sets each missing a facet of the simplex, no `k + 1` of them sharing a point:
/// some complement component meets every `k`-face.
pub fn kkm_witness(cover: &LatticeCover, k: usize) -> Result<WitnessReport, CoverError> {
    require(cover, ModelKind::Simplex)?;
    let n = cover.model.n();
    if k > n {
        return Err(CoverError::BadParameter(format!("k = {k} exceeds n = {n}")));
    }
    let t = Theorem::Kkm;
    let facets = cover.model.facets();
    for (set, s) in cover.sets.iter().enumerate() {
        if facets.iter().all(|&f| cover.touches_facet(set, f)) {
            let violation = Violation::TouchesAllFacets { set, name: s.name.clone() };
            return Ok(WitnessReport::new(t, Outcome::HypothesisViolated { violation }));
        }
    }
    if let Some(violation) = check_multiplicity(cover, k) {
        return Ok(WitnessReport::new(t, Outcome::HypothesisViolated { violation }));
    }
    let faces = simplex_faces(n, k);
    for comp in cover.complement_components() {
        let meets_all = faces
            .iter()
            .all(|face| comp.iter().any(|&p| on_simplex_face(cover.model.point(p), face)));
        if meets_all {
            let witness = Witness::ComplementComponent { k, points: coords(cover, &comp), faces };
            return Ok(WitnessReport::new(t, Outcome::WitnessFound { witness }));
        }
    }
    Ok(WitnessReport::new(
        t,
        Outcome::CounterexampleCandidate {
            detail: format!("no complement component meets every {k}-face"),
            instance: echo(cover),
        },
    ))
}

/// Number of distinct cube faces parallel to `R^axes` that `comp` meets.
fn cube_faces_met(cover: &LatticeCover, comp: &[usize], axes: &[usize]) -> usize {
    let r = cover.model.r();
    let n = cover.model.n();
    let fixed: Vec<usize> = (0..n).filter(|j| !axes.contains(j)).collect();
    let mut seen = std::collections::HashSet::new();
    for &p in comp {
        let pt = cover.model.point(p);
        if fixed.iter().all(|&j| pt[j] == 0 || pt[j] == r) {
            let pattern: Vec<bool> = fixed.iter().map(|&j| pt[j] == r).collect();
            seen.insert(pattern);
        }
    }
    seen.len()
}

/// Sets spanning no opposite pair, multiplicity at most `k`: some complement
/// component meets all `2^(n-k)` faces parallel to some `k`-dimensional
/// coordinate subspace.
pub fn complement_witness(cover: &LatticeCover, k: usize) -> Result<WitnessReport, CoverError> {
    require(cover, ModelKind::Cube)?;
    let n = cover.model.n();
    if k > n {
        return Err(CoverError::BadParameter(format!("k = {k} exceeds n = {n}")));
    }
    let t = Theorem::Complement;
    for (set, s) in cover.sets.iter().enumerate() {
        if let Some(axis) = (0..n).find(|&axis| cover.spans_pair(set, axis)) {
            let violation = Violation::SpansPair { set, name: s.name.clone(), axis };
            return Ok(WitnessReport::new(t, Outcome::HypothesisViolated { violation }));
        }
    }
    if let Some(violation) = check_multiplicity(cover, k) {
        return Ok(WitnessReport::new(t, Outcome::HypothesisViolated { violation }));
    }
    let needed = 1usize << (n - k);
    for comp in cover.complement_components() {
        for axes in (0..n).combinations(k) {
            if cube_faces_met(cover, &comp, &axes) == needed {
                let witness = Witness::ParallelFaces { k, axes, points: coords(cover, &comp) };
                return Ok(WitnessReport::new(t, Outcome::WitnessFound { witness }));
            }
        }
    }
    Ok(WitnessReport::new(
        t,
        Outcome::CounterexampleCandidate {
            detail: format!("no complement component meets all faces parallel to a {k}-dimensional coordinate subspace"),
            instance: echo(cover),
        },
    ))
}

/// Cover of the cube by exactly `n` sets, set `i` paired with axis `i`: some
/// component of some `X_i` touches both facets of axis `i`.
pub fn axes_witness(cover: &LatticeCover) -> Result<WitnessReport, CoverError> {
    require(cover, ModelKind::Cube)?;
    let n = cover.model.n();
    if cover.sets.len() != n {
        return Err(CoverError::WrongArity { expected: n, got: cover.sets.len() });
    }
    let t = Theorem::Axes;
    if let Some(violation) = check_full_cover(cover) {
        return Ok(WitnessReport::new(t, Outcome::HypothesisViolated { violation }));
    }
    for (set, s) in cover.sets.iter().enumerate() {
        let lo = LatticeFacet::Cube { axis: set, upper: false };
        let hi = LatticeFacet::Cube { axis: set, upper: true };
        for comp in cover.set_components(set) {
            let touches = |f| comp.iter().any(|&p| cover.model.on_facet(p, f));
            if touches(lo) && touches(hi) {
                let witness = Witness::SpanningComponent {
                    set,
                    name: s.name.clone(),
                    axis: set,
                    points: coords(cover, &comp),
                };
                return Ok(WitnessReport::new(t, Outcome::WitnessFound { witness }));
            }
        }
    }
    Ok(WitnessReport::new(
        t,
        Outcome::CounterexampleCandidate {
            detail: "no component of any X_i touches both facets of axis i".into(),
            instance: echo(cover),
        },
    ))
}
