//! Simple polytopes in H-representation.
//!
//! A polytope is `{x : <u_F, x> + b_F >= 0 for every facet F}` with primitive
//! integer inward normals `u_F` and rational offsets `b_F`. Vertices are always
//! derived by solving every n-subset of facet equalities, never supplied.

use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;
use num::integer::Integer;
use num::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg;
use crate::rational::{dot_int, q, serde_q, Q};

/// Largest ambient dimension accepted by [`SimplePolytope::from_halfspaces`].
pub const MAX_DIM: usize = 6;
/// Largest facet count accepted by [`SimplePolytope::from_halfspaces`].
pub const MAX_FACETS: usize = 20;
/// Halvings attempted by [`SimplePolytope::perturb`] before giving up.
pub const PERTURB_ATTEMPTS: usize = 24;
/// Seed used by [`SimplePolytope::perturb`].
pub const DEFAULT_PERTURB_SEED: u64 = 0x5eed;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolytopeError {
    #[error("dimension must be between 1 and {MAX_DIM}, got {0}")]
    BadDimension(usize),
    #[error("facet {facet}: normal has length {got}, expected {expected}")]
    DimensionMismatch { facet: usize, got: usize, expected: usize },
    #[error("{normals} normals but {offsets} offsets")]
    LengthMismatch { normals: usize, offsets: usize },
    #[error("need between n+1 = {min} and {MAX_FACETS} facets, got {got}")]
    FacetCount { min: usize, got: usize },
    #[error("facet {0}: normal is zero")]
    ZeroNormal(usize),
    #[error("facet {0}: normal is not primitive")]
    NotPrimitive(usize),
    #[error("facet {0}: normal entry out of range")]
    NormalOverflow(usize),
    #[error("vertex {0:?} lies on more than n facets")]
    NotSimple(Vec<usize>),
    #[error("facet {0} is redundant (does not support an (n-1)-face)")]
    RedundantFacet(usize),
    #[error("polytope is unbounded")]
    Unbounded,
    #[error("polytope is empty")]
    Empty,
    #[error("no generic perturbation found after {0} attempts")]
    BudgetExhausted(usize),
    #[error("perturbation budget must be positive")]
    BadBudget,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Facet {
    pub normal: Vec<i64>,
    #[serde(with = "serde_q")]
    pub offset: Q,
}

impl Facet {
    pub fn eval(&self, x: &[Q]) -> Q {
        dot_int(&self.normal, x) + &self.offset
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub coords: Vec<Q>,
    pub facets: BTreeSet<usize>,
}

/// A `k`-face, named by the facets containing it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FaceDescriptor {
    pub facet_ids: BTreeSet<usize>,
    pub dim: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StandardKind {
    Simplex,
    Cube,
}

/// Solution set of a system of half-spaces, possibly empty or degenerate.
///
/// Vertices carry every inequality that is tight at them.
#[derive(Debug, Clone)]
pub struct HalfspaceRegion {
    pub dim: usize,
    pub facets: Vec<Facet>,
    pub vertices: Vec<Vertex>,
}

impl HalfspaceRegion {
    /// Enumerates vertices by solving every `dim`-subset of equalities.
    ///
    /// The caller guarantees the recession cone is trivial (normals positively span).
    pub fn new(dim: usize, facets: Vec<Facet>) -> Self {
        let mut vertices: Vec<Vertex> = Vec::new();
        let mut seen: HashMap<Vec<Q>, usize> = HashMap::new();
        for subset in (0..facets.len()).combinations(dim) {
            let a: Vec<Vec<Q>> = subset
                .iter()
                .map(|&f| facets[f].normal.iter().map(|&x| q(x)).collect())
                .collect();
            if linalg::rank(&a) < dim {
                continue;
            }
            let b: Vec<Q> = subset.iter().map(|&f| -facets[f].offset.clone()).collect();
            let Some(x) = linalg::solve(&a, &b, dim) else { continue };
            let mut tight = BTreeSet::new();
            let mut feasible = true;
            for (id, f) in facets.iter().enumerate() {
                let v = f.eval(&x);
                if v.is_negative() {
                    feasible = false;
                    break;
                }
                if v.is_zero() {
                    tight.insert(id);
                }
            }
            if feasible && !seen.contains_key(&x) {
                seen.insert(x.clone(), vertices.len());
                vertices.push(Vertex { coords: x, facets: tight });
            }
        }
        HalfspaceRegion { dim, facets, vertices }
    }

    pub fn is_feasible(&self) -> bool {
        !self.vertices.is_empty()
    }

    /// Affine dimension of the region, or `None` when it is empty.
    pub fn affine_dim(&self) -> Option<usize> {
        let points: Vec<&Vec<Q>> = self.vertices.iter().map(|v| &v.coords).collect();
        affine_dim(&points)
    }

    /// Sorted vertex-facet incidence sets; equal patterns mean equal normal fans.
    pub fn incidence_pattern(&self) -> Vec<BTreeSet<usize>> {
        let mut pattern: Vec<_> = self.vertices.iter().map(|v| v.facets.clone()).collect();
        pattern.sort();
        pattern
    }
}

pub(crate) fn affine_dim(points: &[&Vec<Q>]) -> Option<usize> {
    let (base, rest) = points.split_first()?;
    let diffs: Vec<Vec<Q>> = rest
        .iter()
        .map(|p| p.iter().zip(base.iter()).map(|(a, b)| a - b).collect())
        .collect();
    Some(linalg::rank(&diffs))
}

/// A bounded, full-dimensional, simple polytope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplePolytope {
    dim: usize,
    facets: Vec<Facet>,
    vertices: Vec<Vertex>,
}

/// JSON form: `{"dim": n, "facets": [{"normal": [..], "offset": "p/q"}]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeJson {
    pub dim: usize,
    pub facets: Vec<Facet>,
}

impl TryFrom<PolytopeJson> for SimplePolytope {
    type Error = PolytopeError;

    fn try_from(json: PolytopeJson) -> Result<Self, Self::Error> {
        if json.dim == 0 || json.dim > MAX_DIM {
            return Err(PolytopeError::BadDimension(json.dim));
        }
        for (i, f) in json.facets.iter().enumerate() {
            if f.normal.len() != json.dim {
                return Err(PolytopeError::DimensionMismatch {
                    facet: i,
                    got: f.normal.len(),
                    expected: json.dim,
                });
            }
        }
        let (normals, offsets) = json.facets.into_iter().map(|f| (f.normal, f.offset)).unzip();
        SimplePolytope::from_halfspaces(normals, offsets)
    }
}

impl From<&SimplePolytope> for PolytopeJson {
    fn from(p: &SimplePolytope) -> Self {
        PolytopeJson { dim: p.dim, facets: p.facets.clone() }
    }
}

impl Serialize for SimplePolytope {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolytopeJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for SimplePolytope {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let json = PolytopeJson::deserialize(d)?;
        SimplePolytope::try_from(json).map_err(serde::de::Error::custom)
    }
}

fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// True iff no nonzero direction `d` has `<u_F, d> >= 0` for every facet.
fn has_trivial_recession_cone(dim: usize, normals: &[Vec<i64>]) -> bool {
    let rows: Vec<Vec<Q>> = normals
        .iter()
        .map(|u| u.iter().map(|&x| q(x)).collect())
        .collect();
    if linalg::rank(&rows) < dim {
        return false;
    }
    // The cone is pointed; it is nontrivial iff it has an extreme ray, and every
    // extreme ray is cut out by dim-1 independent tight constraints.
    for subset in (0..rows.len()).combinations(dim - 1) {
        let sub: Vec<Vec<Q>> = subset.iter().map(|&i| rows[i].clone()).collect();
        if linalg::rank(&sub) != dim - 1 {
            continue;
        }
        let k = linalg::kernel(&sub, dim);
        let d = &k[0];
        for sign in [1, -1] {
            let ok = rows.iter().all(|u| {
                let s: Q = u.iter().zip(d).map(|(a, b)| a * b).sum();
                !(s * q(sign)).is_negative()
            });
            if ok {
                return false;
            }
        }
    }
    true
}

impl SimplePolytope {
    pub fn from_halfspaces(normals: Vec<Vec<i64>>, offsets: Vec<Q>) -> Result<Self, PolytopeError> {
        if normals.len() != offsets.len() {
            return Err(PolytopeError::LengthMismatch {
                normals: normals.len(),
                offsets: offsets.len(),
            });
        }
        let dim = normals.first().map_or(0, Vec::len);
        if dim == 0 || dim > MAX_DIM {
            return Err(PolytopeError::BadDimension(dim));
        }
        if normals.len() < dim + 1 || normals.len() > MAX_FACETS {
            return Err(PolytopeError::FacetCount { min: dim + 1, got: normals.len() });
        }
        for (i, u) in normals.iter().enumerate() {
            if u.len() != dim {
                return Err(PolytopeError::DimensionMismatch { facet: i, got: u.len(), expected: dim });
            }
            // Keeps every gcd, dot product and determinant far from i64 limits.
            if u.iter().any(|x| x.unsigned_abs() > 1 << 40) {
                return Err(PolytopeError::NormalOverflow(i));
            }
            match gcd_all(u) {
                0 => return Err(PolytopeError::ZeroNormal(i)),
                1 => {}
                _ => return Err(PolytopeError::NotPrimitive(i)),
            }
        }
        if !has_trivial_recession_cone(dim, &normals) {
            return Err(PolytopeError::Unbounded);
        }
        let facets: Vec<Facet> = normals
            .into_iter()
            .zip(offsets)
            .map(|(normal, offset)| Facet { normal, offset })
            .collect();
        let region = HalfspaceRegion::new(dim, facets);
        if region.vertices.is_empty() {
            return Err(PolytopeError::Empty);
        }
        if let Some(v) = region.vertices.iter().find(|v| v.facets.len() != dim) {
            return Err(PolytopeError::NotSimple(v.facets.iter().copied().collect()));
        }
        for f in 0..region.facets.len() {
            let on: Vec<&Vec<Q>> = region
                .vertices
                .iter()
                .filter(|v| v.facets.contains(&f))
                .map(|v| &v.coords)
                .collect();
            if on.len() < dim || affine_dim(&on) != Some(dim - 1) {
                return Err(PolytopeError::RedundantFacet(f));
            }
        }
        Ok(SimplePolytope { dim, facets: region.facets, vertices: region.vertices })
    }

    /// Unit cube `{0 <= x_j <= 1}` or standard simplex `{x_i >= 0, sum x_i <= 1}`.
    ///
    /// Cube facet ids: `2j` is `F_j^-` (`x_j >= 0`), `2j + 1` is `F_j^+` (`1 - x_j >= 0`).
    /// Simplex facet ids: `i < n` is `x_i >= 0`, `n` is `1 - sum x_i >= 0`.
    pub fn standard(kind: StandardKind, n: usize) -> Self {
        let unit = |j: usize, s: i64| -> Vec<i64> {
            let mut v = vec![0; n];
            v[j] = s;
            v
        };
        let (normals, offsets): (Vec<Vec<i64>>, Vec<Q>) = match kind {
            StandardKind::Cube => (0..n)
                .flat_map(|j| [(unit(j, 1), q(0)), (unit(j, -1), q(1))])
                .unzip(),
            StandardKind::Simplex => (0..n)
                .map(|i| (unit(i, 1), q(0)))
                .chain(std::iter::once((vec![-1; n], q(1))))
                .unzip(),
        };
        Self::from_halfspaces(normals, offsets).expect("standard polytopes are simple")
    }

    pub fn cube(n: usize) -> Self {
        Self::standard(StandardKind::Cube, n)
    }

    pub fn simplex(n: usize) -> Self {
        Self::standard(StandardKind::Simplex, n)
    }

    /// Facet id of `F_axis^-` or `F_axis^+` in [`SimplePolytope::cube`].
    pub fn cube_facet(axis: usize, upper: bool) -> usize {
        2 * axis + usize::from(upper)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn facet_count(&self) -> usize {
        self.facets.len()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn normal(&self, facet: usize) -> &[i64] {
        &self.facets[facet].normal
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        self.facets.iter().all(|f| !f.eval(x).is_negative())
    }

    pub fn as_region(&self) -> HalfspaceRegion {
        HalfspaceRegion {
            dim: self.dim,
            facets: self.facets.clone(),
            vertices: self.vertices.clone(),
        }
    }

    pub fn incidence_pattern(&self) -> Vec<BTreeSet<usize>> {
        self.as_region().incidence_pattern()
    }

    /// Cartesian product; facets of `self` come first, then those of `other`.
    pub fn product(&self, other: &SimplePolytope) -> SimplePolytope {
        let dim = self.dim + other.dim;
        let shift = self.facets.len();
        let mut facets = Vec::with_capacity(shift + other.facets.len());
        for f in &self.facets {
            let mut normal = f.normal.clone();
            normal.resize(dim, 0);
            facets.push(Facet { normal, offset: f.offset.clone() });
        }
        for f in &other.facets {
            let mut normal = vec![0; self.dim];
            normal.extend_from_slice(&f.normal);
            facets.push(Facet { normal, offset: f.offset.clone() });
        }
        let mut vertices = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                let mut coords = a.coords.clone();
                coords.extend(b.coords.iter().cloned());
                let mut inc = a.facets.clone();
                inc.extend(b.facets.iter().map(|f| f + shift));
                vertices.push(Vertex { coords, facets: inc });
            }
        }
        SimplePolytope { dim, facets, vertices }
    }

    /// All `k`-faces as the `(n - k)`-sets of facets containing them, sorted.
    pub fn faces(&self, k: usize) -> Vec<FaceDescriptor> {
        if k > self.dim {
            return Vec::new();
        }
        let size = self.dim - k;
        let mut out: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        for v in &self.vertices {
            for c in v.facets.iter().copied().combinations(size) {
                out.insert(c.into_iter().collect());
            }
        }
        out.into_iter()
            .map(|facet_ids| FaceDescriptor { facet_ids, dim: k })
            .collect()
    }

    /// True iff a face of the polytope lies on all of `facet_ids`.
    pub fn is_face(&self, facet_ids: &BTreeSet<usize>) -> bool {
        self.vertices.iter().any(|v| facet_ids.is_subset(&v.facets))
    }

    /// True iff every n-subset of facet normals is linearly independent.
    pub fn generic_normals_check(&self) -> bool {
        (0..self.facets.len()).combinations(self.dim).all(|subset| {
            let m: Vec<Vec<Q>> = subset
                .iter()
                .map(|&f| self.facets[f].normal.iter().map(|&x| q(x)).collect())
                .collect();
            !linalg::determinant(&m).is_zero()
        })
    }

    /// Average of the vertices, an interior point.
    pub fn centroid(&self) -> Vec<Q> {
        let count = q(self.vertices.len() as i64);
        (0..self.dim)
            .map(|i| self.vertices.iter().map(|v| &v.coords[i]).sum::<Q>() / &count)
            .collect()
    }

    /// The translate `self + shift`.
    pub fn translated(&self, shift: &[Q]) -> SimplePolytope {
        let facets = self
            .facets
            .iter()
            .map(|f| Facet {
                normal: f.normal.clone(),
                offset: &f.offset - dot_int(&f.normal, shift),
            })
            .collect();
        let vertices = self
            .vertices
            .iter()
            .map(|v| Vertex {
                coords: v.coords.iter().zip(shift).map(|(a, b)| a + b).collect(),
                facets: v.facets.clone(),
            })
            .collect();
        SimplePolytope { dim: self.dim, facets, vertices }
    }

    pub fn perturb(&self, budget: &Q) -> Result<SimplePolytope, PolytopeError> {
        self.perturb_seeded(budget, DEFAULT_PERTURB_SEED)
    }

    /// Tilts every facet normal by at most `budget` per entry until the normals are generic and the
    /// vertex-facet incidences are unchanged. The budget is halved on each failed
    /// attempt. In dimension one the input is returned unchanged.
    ///
    /// A tilt `u + k * step` with `step = budget / 8` and integer `k` in `[-8, 8]`
    /// is brought back to a primitive integer vector by scaling with the
    /// denominator of `step` and dividing by the gcd.
    pub fn perturb_seeded(&self, budget: &Q, seed: u64) -> Result<SimplePolytope, PolytopeError> {
        if !budget.is_positive() {
            return Err(PolytopeError::BadBudget);
        }
        if self.dim == 1 {
            return Ok(self.clone());
        }
        let target = self.incidence_pattern();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut step = budget / q(8);
        for _ in 0..PERTURB_ATTEMPTS {
            let numer = step.numer().clone();
            let denom = step.denom().clone();
            let (Ok(p), Ok(d)) = (i64::try_from(numer), i64::try_from(denom)) else {
                break;
            };
            let mut normals = Vec::with_capacity(self.facets.len());
            let mut offsets = Vec::with_capacity(self.facets.len());
            let mut overflow = false;
            for (id, f) in self.facets.iter().enumerate() {
                let tilted: Option<Vec<i64>> = f
                    .normal
                    .iter()
                    .map(|&u| {
                        let k: i64 = rng.random_range(-8..=8);
                        u.checked_mul(d)?.checked_add(k.checked_mul(p)?)
                    })
                    .collect();
                let Some(tilted) = tilted else {
                    overflow = true;
                    break;
                };
                let g = gcd_all(&tilted);
                if g == 0 {
                    overflow = true;
                    break;
                }
                let normal: Vec<i64> = tilted.iter().map(|x| x / g).collect();
                // The tilted hyperplane pivots about one vertex of the old facet.
                let anchor = self
                    .vertices
                    .iter()
                    .find(|v| v.facets.contains(&id))
                    .expect("every facet carries vertices");
                offsets.push(-dot_int(&normal, &anchor.coords));
                normals.push(normal);
            }
            if !overflow {
                if let Ok(candidate) = SimplePolytope::from_halfspaces(normals, offsets) {
                    if candidate.generic_normals_check() && candidate.incidence_pattern() == target {
                        return Ok(candidate);
                    }
                }
            }
            step /= q(2);
        }
        Err(PolytopeError::BudgetExhausted(PERTURB_ATTEMPTS))
    }
}
