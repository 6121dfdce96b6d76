//! Lattice stand-ins for the cube and the simplex, and covers by named point sets.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::CoverError;
use crate::dsu::UnionFind;

/// Largest number of lattice points a model may have.
pub const MAX_POINTS: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Cube,
    Simplex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    pub kind: ModelKind,
    pub n: usize,
    pub r: u32,
}

/// A facet of the lattice model: the cube's `a_axis = 0` / `a_axis = r`, or the
/// simplex's `a_coord = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LatticeFacet {
    Cube { axis: usize, upper: bool },
    Simplex { coord: usize },
}

/// Cube: `a in {0..r}^n`, neighbours differ by one in one coordinate.
/// Simplex: `a in Z_{>=0}^{n+1}` with `sum a = r`, neighbours differ by `+1/-1` in
/// exactly two coordinates.
#[derive(Debug)]
pub struct LatticeModel {
    params: ModelParams,
    points: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

fn compositions(total: u32, parts: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if parts == 1 {
        prefix.push(total);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for first in (0..=total).rev() {
        prefix.push(first);
        compositions(total - first, parts - 1, prefix, out);
        prefix.pop();
    }
}

impl LatticeModel {
    pub fn new(params: ModelParams) -> Result<Arc<Self>, CoverError> {
        let ModelParams { kind, n, r } = params;
        if n == 0 || n > 8 || r == 0 {
            return Err(CoverError::BadModel(format!("need n in 1..=8 and r >= 1, got n={n} r={r}")));
        }
        let count = match kind {
            ModelKind::Cube => (r as u128 + 1).checked_pow(n as u32),
            // C(r + n, n)
            ModelKind::Simplex => {
                Some((1..=n as u128).fold(1u128, |acc, i| acc * (r as u128 + i) / i))
            }
        };
        if count.is_none_or(|c| c > MAX_POINTS as u128) {
            return Err(CoverError::BadModel(format!("model has more than {MAX_POINTS} points")));
        }
        let mut points = Vec::new();
        match kind {
            ModelKind::Cube => {
                let mut p = vec![0u32; n];
                loop {
                    points.push(p.clone());
                    let mut j = 0;
                    while j < n && p[j] == r {
                        p[j] = 0;
                        j += 1;
                    }
                    if j == n {
                        break;
                    }
                    p[j] += 1;
                }
            }
            ModelKind::Simplex => compositions(r, n + 1, &mut Vec::new(), &mut points),
        }
        let index = points.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        Ok(Arc::new(LatticeModel { params, points, index }))
    }

    pub fn cube(n: usize, r: u32) -> Result<Arc<Self>, CoverError> {
        Self::new(ModelParams { kind: ModelKind::Cube, n, r })
    }

    pub fn simplex(n: usize, r: u32) -> Result<Arc<Self>, CoverError> {
        Self::new(ModelParams { kind: ModelKind::Simplex, n, r })
    }

    pub fn params(&self) -> ModelParams {
        self.params
    }

    pub fn kind(&self) -> ModelKind {
        self.params.kind
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn r(&self) -> u32 {
        self.params.r
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, idx: usize) -> &[u32] {
        &self.points[idx]
    }

    pub fn points(&self) -> &[Vec<u32>] {
        &self.points
    }

    pub fn index_of(&self, p: &[u32]) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn neighbors(&self, idx: usize) -> Vec<usize> {
        let p = &self.points[idx];
        let r = self.params.r;
        let mut out = Vec::new();
        match self.params.kind {
            ModelKind::Cube => {
                for j in 0..p.len() {
                    let mut q = p.clone();
                    if p[j] > 0 {
                        q[j] = p[j] - 1;
                        out.push(self.index[&q]);
                    }
                    if p[j] < r {
                        q[j] = p[j] + 1;
                        out.push(self.index[&q]);
                    }
                }
            }
            ModelKind::Simplex => {
                for i in 0..p.len() {
                    for j in 0..p.len() {
                        if i != j && p[j] > 0 {
                            let mut q = p.clone();
                            q[i] += 1;
                            q[j] -= 1;
                            out.push(self.index[&q]);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn facets(&self) -> Vec<LatticeFacet> {
        match self.params.kind {
            ModelKind::Cube => (0..self.params.n)
                .flat_map(|axis| [false, true].map(|upper| LatticeFacet::Cube { axis, upper }))
                .collect(),
            ModelKind::Simplex => (0..=self.params.n).map(|coord| LatticeFacet::Simplex { coord }).collect(),
        }
    }

    pub fn facet_is_valid(&self, facet: LatticeFacet) -> bool {
        match (self.params.kind, facet) {
            (ModelKind::Cube, LatticeFacet::Cube { axis, .. }) => axis < self.params.n,
            (ModelKind::Simplex, LatticeFacet::Simplex { coord }) => coord <= self.params.n,
            _ => false,
        }
    }

    pub fn on_facet(&self, idx: usize, facet: LatticeFacet) -> bool {
        let p = &self.points[idx];
        match facet {
            LatticeFacet::Cube { axis, upper } => p[axis] == if upper { self.params.r } else { 0 },
            LatticeFacet::Simplex { coord } => p[coord] == 0,
        }
    }

    /// Connected components of `subset` in the adjacency graph, each sorted,
    /// ordered by smallest point index.
    pub fn components(&self, subset: &[bool]) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.len());
        for (i, &inside) in subset.iter().enumerate() {
            if inside {
                for j in self.neighbors(i) {
                    if j > i && subset[j] {
                        uf.union(i, j);
                    }
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        let mut first_of_root: HashMap<usize, usize> = HashMap::new();
        for (i, &inside) in subset.iter().enumerate() {
            if inside {
                let root = uf.find(i);
                let key = *first_of_root.entry(root).or_insert(i);
                groups.entry(key).or_default().push(i);
            }
        }
        groups.into_values().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverSet {
    pub name: String,
    /// Sorted, deduplicated point indices.
    pub points: Vec<usize>,
}

/// A finite family of named point sets in a lattice model. Set ids follow the
/// lexicographic order of names.
#[derive(Debug, Clone)]
pub struct LatticeCover {
    pub model: Arc<LatticeModel>,
    pub sets: Vec<CoverSet>,
}

/// JSON cover format: `{"model": {"kind", "n", "r"}, "sets": {"<name>": [[ints]...]}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverJson {
    pub model: ModelParams,
    pub sets: BTreeMap<String, Vec<Vec<u32>>>,
}

impl LatticeCover {
    /// Sets are sorted by name; duplicate points inside a set are merged.
    pub fn new(model: Arc<LatticeModel>, sets: Vec<(String, Vec<usize>)>) -> Result<Self, CoverError> {
        let mut by_name: BTreeMap<String, BTreeSet<usize>> = BTreeMap::new();
        for (name, pts) in sets {
            if let Some(&bad) = pts.iter().find(|&&p| p >= model.len()) {
                return Err(CoverError::BadPoint { set: name, detail: format!("index {bad} out of range") });
            }
            if by_name.insert(name.clone(), pts.into_iter().collect()).is_some() {
                return Err(CoverError::DuplicateSet(name));
            }
        }
        let sets = by_name
            .into_iter()
            .map(|(name, pts)| CoverSet { name, points: pts.into_iter().collect() })
            .collect();
        Ok(LatticeCover { model, sets })
    }

    pub fn from_json(json: &CoverJson) -> Result<Self, CoverError> {
        let model = LatticeModel::new(json.model)?;
        let mut sets = Vec::with_capacity(json.sets.len());
        for (name, pts) in &json.sets {
            if pts.is_empty() {
                return Err(CoverError::EmptySet(name.clone()));
            }
            let idx: Result<Vec<usize>, CoverError> = pts
                .iter()
                .map(|p| {
                    model.index_of(p).ok_or_else(|| CoverError::BadPoint {
                        set: name.clone(),
                        detail: format!("{p:?} is not a point of the model"),
                    })
                })
                .collect();
            sets.push((name.clone(), idx?));
        }
        LatticeCover::new(model, sets)
    }

    pub fn to_json(&self) -> CoverJson {
        CoverJson {
            model: self.model.params(),
            sets: self
                .sets
                .iter()
                .map(|s| (s.name.clone(), s.points.iter().map(|&p| self.model.point(p).to_vec()).collect()))
                .collect(),
        }
    }

    pub fn set_id(&self, name: &str) -> Option<usize> {
        self.sets.iter().position(|s| s.name == name)
    }

    /// Number of sets containing each point.
    pub fn counts(&self) -> Vec<u32> {
        let mut counts = vec![0u32; self.model.len()];
        for s in &self.sets {
            for &p in &s.points {
                counts[p] += 1;
            }
        }
        counts
    }

    pub fn multiplicity(&self) -> u32 {
        self.counts().into_iter().max().unwrap_or(0)
    }

    /// First point covered by no set, if any.
    pub fn uncovered_point(&self) -> Option<usize> {
        self.counts().iter().position(|&c| c == 0)
    }

    pub fn membership(&self, set: usize) -> Vec<bool> {
        let mut m = vec![false; self.model.len()];
        for &p in &self.sets[set].points {
            m[p] = true;
        }
        m
    }

    pub fn touches_facet(&self, set: usize, facet: LatticeFacet) -> bool {
        self.model.facet_is_valid(facet)
            && self.sets[set].points.iter().any(|&p| self.model.on_facet(p, facet))
    }

    /// Touches both `a_axis = 0` and `a_axis = r` (cube models only).
    pub fn spans_pair(&self, set: usize, axis: usize) -> bool {
        self.model.kind() == ModelKind::Cube
            && self.touches_facet(set, LatticeFacet::Cube { axis, upper: false })
            && self.touches_facet(set, LatticeFacet::Cube { axis, upper: true })
    }

    pub fn complement_components(&self) -> Vec<Vec<usize>> {
        let free: Vec<bool> = self.counts().iter().map(|&c| c == 0).collect();
        self.model.components(&free)
    }

    pub fn set_components(&self, set: usize) -> Vec<Vec<usize>> {
        self.model.components(&self.membership(set))
    }
}
