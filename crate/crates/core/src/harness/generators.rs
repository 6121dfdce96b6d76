//! Structured and random covers.
//!
//! Random covers are built so that each generated family is the lattice trace
//! of a genuine closed cover. Sets in the same layer never share an elementary
//! cell: for the cube a `2^n` block (points within l-infinity distance 1), for
//! the simplex a cell of its triangulated lattice (differences with entries in
//! `{-1, 0, 1}`). A family of `m` such layers therefore has multiplicity at most
//! `m` even when each set is read as the union of the closed cells around its
//! points, which is the reading under which the continuous theorems apply.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::covering::model::{LatticeCover, LatticeFacet, LatticeModel, ModelKind, ModelParams};
use crate::covering::sample::{lattice_sample, PointCloudCover};
use crate::covering::CoverError;
use crate::polytope::SimplePolytope;
use crate::rational::{q, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenerateError {
    #[error("resolution r = {r} must be a positive multiple of 2n = {}", 2 * n)]
    BadResolution { n: usize, r: u32 },
    #[error("target multiplicity must be at least 1")]
    BadMultiplicity,
    #[error(transparent)]
    Cover(#[from] CoverError),
}

/// A generated cover with its measured multiplicity.
#[derive(Debug, Clone)]
pub struct Generated {
    pub cover: LatticeCover,
    pub seed: u64,
    pub multiplicity: u32,
}

impl Generated {
    fn stamp(cover: LatticeCover, seed: u64) -> Self {
        let multiplicity = cover.multiplicity();
        Generated { cover, seed, multiplicity }
    }
}

/// Points of a lattice or sample on an integer grid, with the model adjacency
/// and the "same elementary cell" relation, both precomputed.
struct Grid {
    size: usize,
    steps: Vec<Vec<usize>>,
    mates: Vec<Vec<usize>>,
}

impl Grid {
    /// `reach` is the l-infinity radius, in grid units, within which two points
    /// are treated as sharing a cell.
    fn new(coords: &[Vec<i64>], zero_sum: bool, reach: i64) -> Self {
        let dim = coords.first().map_or(0, Vec::len);
        let lo: Vec<i64> = (0..dim).map(|j| coords.iter().map(|c| c[j]).min().unwrap_or(0) - reach).collect();
        let hi: Vec<i64> = (0..dim).map(|j| coords.iter().map(|c| c[j]).max().unwrap_or(0) + reach).collect();
        let mut strides = vec![1usize; dim];
        for j in (0..dim.saturating_sub(1)).rev() {
            strides[j] = strides[j + 1] * (hi[j + 1] - lo[j + 1] + 1) as usize;
        }
        let linear = |c: &[i64]| -> usize { (0..dim).map(|j| (c[j] - lo[j]) as usize * strides[j]).sum() };
        let volume = if dim == 0 { 1 } else { strides[0] * (hi[0] - lo[0] + 1) as usize };
        let mut table = vec![usize::MAX; volume];
        for (i, c) in coords.iter().enumerate() {
            table[linear(c)] = i;
        }
        let offsets: Vec<Vec<i64>> = (0..dim)
            .map(|_| -reach..=reach)
            .multi_cartesian_product()
            .filter(|v| v.iter().any(|&x| x != 0))
            .filter(|v| !zero_sum || v.iter().sum::<i64>() == 0)
            .collect();
        let is_step = |v: &[i64]| {
            let nonzero = v.iter().filter(|&&x| x != 0).count();
            v.iter().all(|x| x.abs() <= 1) && nonzero == if zero_sum { 2 } else { 1 }
        };
        let mut steps = Vec::with_capacity(coords.len());
        let mut mates = Vec::with_capacity(coords.len());
        for c in coords {
            let (mut st, mut ma) = (Vec::new(), Vec::new());
            for o in &offsets {
                let shifted: Vec<i64> = c.iter().zip(o).map(|(a, b)| a + b).collect();
                let j = table[linear(&shifted)];
                if j != usize::MAX {
                    ma.push(j);
                    if is_step(o) {
                        st.push(j);
                    }
                }
            }
            steps.push(st);
            mates.push(ma);
        }
        Grid { size: coords.len(), steps, mates }
    }

    fn from_model(model: &LatticeModel) -> Self {
        let coords: Vec<Vec<i64>> = model
            .points()
            .iter()
            .map(|p| p.iter().map(|&x| i64::from(x)).collect())
            .collect();
        Grid::new(&coords, model.kind() == ModelKind::Simplex, 1)
    }

    fn len(&self) -> usize {
        self.size
    }

    fn neighbors(&self, i: usize) -> &[usize] {
        &self.steps[i]
    }

    fn cellmates(&self, i: usize) -> &[usize] {
        &self.mates[i]
    }

    /// Random multi-source BFS partition of the `allowed` points into regions
    /// grown from `seeds` random seeds; unreachable points stay unlabeled.
    fn voronoi(&self, allowed: &[bool], seeds: usize, rng: &mut ChaCha8Rng) -> Vec<Option<usize>> {
        let mut label = vec![None; self.len()];
        let mut pool: Vec<usize> = (0..self.len()).filter(|&i| allowed[i]).collect();
        pool.shuffle(rng);
        let mut queue = VecDeque::new();
        for (region, &s) in pool.iter().take(seeds.max(1)).enumerate() {
            label[s] = Some(region);
            queue.push_back(s);
        }
        while let Some(i) = queue.pop_front() {
            let mut next = self.neighbors(i).to_vec();
            next.shuffle(rng);
            for j in next {
                if allowed[j] && label[j].is_none() {
                    label[j] = label[i];
                    queue.push_back(j);
                }
            }
        }
        label
    }

    /// Drops every labeled point sharing a cell with a differently labeled point.
    fn separate(&self, label: &[Option<usize>]) -> Vec<Option<usize>> {
        (0..self.len())
            .map(|i| {
                let l = label[i]?;
                let clash = self.cellmates(i).iter().any(|&j| label[j].is_some_and(|o| o != l));
                (!clash).then_some(l)
            })
            .collect()
    }

    /// Components of `subset` under the "same cell" relation; distinct
    /// components never share a cell.
    fn cell_components(&self, subset: &[bool]) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if !subset[start] || seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut k = 0;
            while k < comp.len() {
                for &j in self.cellmates(comp[k]) {
                    if subset[j] && !seen[j] {
                        seen[j] = true;
                        comp.push(j);
                    }
                }
                k += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// `m` layers of cell-separated regions covering every point. Each layer
    /// but the last is a separated random partition of what is still
    /// uncovered; the last takes the cell components of the remainder.
    fn layered_cover(&self, m: usize, seeds: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
        let mut uncovered = vec![true; self.len()];
        let mut sets = Vec::new();
        for _ in 1..m {
            let label = self.separate(&self.voronoi(&uncovered, seeds, rng));
            let mut regions: HashMap<usize, Vec<usize>> = HashMap::new();
            for (i, l) in label.iter().enumerate() {
                if let Some(l) = l {
                    regions.entry(*l).or_default().push(i);
                    uncovered[i] = false;
                }
            }
            sets.extend(regions.into_values().sorted());
        }
        sets.extend(self.cell_components(&uncovered));
        sets
    }

    /// `layers` layers of cell-separated random blobs, each region kept with
    /// probability 3/4; no coverage requirement.
    fn layered_family(&self, layers: usize, seeds: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
        let all = vec![true; self.len()];
        let mut sets = Vec::new();
        for _ in 0..layers {
            let label = self.separate(&self.voronoi(&all, seeds, rng));
            let mut regions: HashMap<usize, Vec<usize>> = HashMap::new();
            for (i, l) in label.iter().enumerate() {
                if let Some(l) = l {
                    regions.entry(*l).or_default().push(i);
                }
            }
            for region in regions.into_values().sorted() {
                if rng.random_bool(0.75) {
                    sets.push(region);
                }
            }
        }
        sets
    }
}

fn seed_count(points: usize, n: usize) -> usize {
    (points / 48).max(n + 1)
}

fn named(sets: Vec<Vec<usize>>, prefix: &str) -> Vec<(String, Vec<usize>)> {
    let width = sets.len().max(1).to_string().len();
    sets.into_iter()
        .enumerate()
        .map(|(i, s)| (format!("{prefix}{i:0width$}"), s))
        .collect()
}

/// Staggered closed bricks of side `r/2` with multiplicity exactly `n + 1`.
///
/// Brick `c` spans `[c_j s - o_j, (c_j + 1) s - o_j]` along axis `j`, clipped to
/// `[0, r]`, where `s = r/2` and the stagger is
/// `o_j = (r / 2n) * ((c_{j+1} + ... + c_{n-1}) mod n)`. Each brick is shorter than
/// the cube along every axis, so none touches two opposite facets. Bricks that
/// clip down to a boundary slice are dropped.
pub fn shifted_brick_cover(n: usize, r: u32) -> Result<Generated, GenerateError> {
    if n == 0 || r == 0 || !r.is_multiple_of(2 * n as u32) {
        return Err(GenerateError::BadResolution { n, r });
    }
    let model = LatticeModel::cube(n, r)?;
    let side = i64::from(r / 2);
    let unit = i64::from(r) / (2 * n as i64);
    let r = i64::from(r);
    let mut sets = Vec::new();
    for c in (0..n).map(|_| 0i64..=3).multi_cartesian_product() {
        let mut ranges = Vec::with_capacity(n);
        for j in 0..n {
            let tail: i64 = c[j + 1..].iter().sum();
            let o = unit * tail.rem_euclid(n as i64);
            let lo = (c[j] * side - o).max(0);
            let hi = ((c[j] + 1) * side - o).min(r);
            ranges.push(lo..=hi);
        }
        if ranges.iter().any(|rg| rg.start() >= rg.end()) {
            continue;
        }
        let pts: Vec<usize> = ranges
            .iter()
            .cloned()
            .multi_cartesian_product()
            .map(|p| {
                let p: Vec<u32> = p.into_iter().map(|x| x as u32).collect();
                model.index_of(&p).expect("clipped to the cube")
            })
            .sorted()
            .collect();
        sets.push((format!("B{}", c.iter().join("_")), pts));
    }
    sets.sort_by(|a, b| a.1.cmp(&b.1));
    sets.dedup_by(|a, b| a.1 == b.1);
    Ok(Generated::stamp(LatticeCover::new(model, sets)?, 0))
}

/// `X_i = {a : a_i >= a_j for all j}` on the simplex lattice.
pub fn kkm_standard_cover(n: usize, r: u32) -> Result<Generated, GenerateError> {
    let model = LatticeModel::simplex(n, r)?;
    let sets = (0..=n)
        .map(|i| {
            let pts = (0..model.len())
                .filter(|&k| {
                    let p = model.point(k);
                    p.iter().all(|&a| p[i] >= a)
                })
                .collect();
            (format!("X{i}"), pts)
        })
        .collect();
    Ok(Generated::stamp(LatticeCover::new(model, sets)?, 0))
}

/// Full cover with multiplicity at most `m` (measured and stamped). For `m = 1`
/// the only such closed cover of a connected model is the single set of all points.
pub fn random_low_multiplicity_cover(params: ModelParams, m: usize, seed: u64) -> Result<Generated, GenerateError> {
    if m == 0 {
        return Err(GenerateError::BadMultiplicity);
    }
    let model = LatticeModel::new(params)?;
    let grid = Grid::from_model(&model);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sets = grid.layered_cover(m, seed_count(model.len(), params.n), &mut rng);
    Ok(Generated::stamp(LatticeCover::new(model, named(sets, "X"))?, seed))
}

/// Family on the simplex with multiplicity at most `k`, every set missing a facet.
pub fn random_kkm_family(n: usize, r: u32, k: usize, seed: u64) -> Result<Generated, GenerateError> {
    if k == 0 {
        return Err(GenerateError::BadMultiplicity);
    }
    let model = LatticeModel::simplex(n, r)?;
    let grid = Grid::from_model(&model);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sets = Vec::new();
    for blob in grid.layered_family(k, seed_count(model.len(), n), &mut rng) {
        let missed = LatticeFacet::Simplex { coord: rng.random_range(0..=n) };
        let kept: Vec<usize> = blob.into_iter().filter(|&p| !model.on_facet(p, missed)).collect();
        if !kept.is_empty() {
            sets.push(kept);
        }
    }
    Ok(Generated::stamp(LatticeCover::new(model, named(sets, "X"))?, seed))
}

/// Family on the cube with multiplicity at most `k`, no set touching both
/// facets of any axis.
pub fn random_complement_family(n: usize, r: u32, k: usize, seed: u64) -> Result<Generated, GenerateError> {
    if k == 0 {
        return Err(GenerateError::BadMultiplicity);
    }
    let model = LatticeModel::cube(n, r)?;
    let grid = Grid::from_model(&model);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sets = Vec::new();
    for mut blob in grid.layered_family(k, seed_count(model.len(), n), &mut rng) {
        for axis in 0..n {
            let lo = LatticeFacet::Cube { axis, upper: false };
            let hi = LatticeFacet::Cube { axis, upper: true };
            let spans = blob.iter().any(|&p| model.on_facet(p, lo)) && blob.iter().any(|&p| model.on_facet(p, hi));
            if spans {
                let side = if rng.random_bool(0.5) { lo } else { hi };
                blob.retain(|&p| !model.on_facet(p, side));
            }
        }
        if !blob.is_empty() {
            sets.push(blob);
        }
    }
    Ok(Generated::stamp(LatticeCover::new(model, named(sets, "X"))?, seed))
}

/// Full cover of the cube by exactly `n` sets: unit cells are coloured by a
/// random BFS partition and `X_i` is the set of corners of cells of colour `i`.
/// Every colour is used.
pub fn random_axes_cover(n: usize, r: u32, seed: u64) -> Result<Generated, GenerateError> {
    let model = LatticeModel::cube(n, r)?;
    let cells = LatticeModel::cube(n, r - 1).map_err(GenerateError::Cover)?;
    let cell_grid = Grid::from_model(&cells);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let seeds = seed_count(cells.len(), n).max(n);
    let label = cell_grid.voronoi(&vec![true; cells.len()], seeds, &mut rng);
    let mut colors: Vec<usize> = (0..seeds).map(|s| if s < n { s } else { rng.random_range(0..n) }).collect();
    colors.shuffle(&mut rng);
    let mut members = vec![vec![false; model.len()]; n];
    for (c, l) in label.iter().enumerate() {
        let color = colors[l.expect("the cell grid is connected")];
        let base = cells.point(c);
        for corner in (0..n).map(|_| 0u32..=1).multi_cartesian_product() {
            let p: Vec<u32> = base.iter().zip(&corner).map(|(a, b)| a + b).collect();
            members[color][model.index_of(&p).expect("corner inside the cube")] = true;
        }
    }
    let sets = members
        .into_iter()
        .enumerate()
        .map(|(i, m)| (format!("X{}", i + 1), (0..m.len()).filter(|&p| m[p]).collect()))
        .collect();
    Ok(Generated::stamp(LatticeCover::new(model, sets)?, seed))
}

/// `P ∩ (1/denominator) Z^n` covered by `m` separated layers.
///
/// A sample set is read as the union of the cubes of radius `1/denominator`
/// around its points, intersected with `P`. Those cubes reach the slanted
/// facets of a perturbed polytope, and a point touches a facet in this reading
/// exactly when it does so with slack `eps = 1/denominator`. Sets in one layer
/// stay at l-infinity distance at least three grid steps, so their cubes are disjoint.
pub fn random_sample_cover(
    p: &SimplePolytope,
    denominator: u32,
    m: usize,
    seed: u64,
) -> Result<PointCloudCover, GenerateError> {
    if m == 0 {
        return Err(GenerateError::BadMultiplicity);
    }
    let points = lattice_sample(p, denominator)?;
    let scale = q(denominator.into());
    let coords: Vec<Vec<i64>> = points
        .iter()
        .map(|x| {
            x.iter()
                .map(|v| {
                    let s: Q = v * &scale;
                    i64::try_from(s.to_integer()).expect("sample coordinates are small")
                })
                .collect()
        })
        .collect();
    let grid = Grid::new(&coords, false, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sets = grid.layered_cover(m, seed_count(grid.len(), p.dim()), &mut rng);
    Ok(PointCloudCover::new(points, named(sets, "X").into_iter().collect())?)
}

/// Largest number of distinct sets meeting one `2^n` block of a cube cover.
pub fn cube_block_multiplicity(cover: &LatticeCover) -> usize {
    let model: &Arc<LatticeModel> = &cover.model;
    assert_eq!(model.kind(), ModelKind::Cube);
    let n = model.n();
    let mut owners: Vec<Vec<usize>> = vec![Vec::new(); model.len()];
    for (id, s) in cover.sets.iter().enumerate() {
        for &p in &s.points {
            owners[p].push(id);
        }
    }
    let Ok(cells) = LatticeModel::cube(n, model.r().saturating_sub(1).max(1)) else { return 0 };
    let mut best = 0;
    for c in 0..cells.len() {
        let base = cells.point(c);
        let mut ids: Vec<usize> = Vec::new();
        for corner in (0..n).map(|_| 0u32..=1).multi_cartesian_product() {
            let p: Vec<u32> = base.iter().zip(&corner).map(|(a, b)| a + b).collect();
            if let Some(i) = model.index_of(&p) {
                ids.extend(&owners[i]);
            }
        }
        ids.sort_unstable();
        ids.dedup();
        best = best.max(ids.len());
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pattern {
    Bricks,
    Kkm,
    Random,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bricks_have_multiplicity_n_plus_one() {
        for (n, r) in [(2, 4), (2, 16), (3, 6), (3, 12), (4, 8)] {
            let g = shifted_brick_cover(n, r).unwrap();
            assert_eq!(g.multiplicity as usize, n + 1, "n={n} r={r}");
            assert!(g.cover.uncovered_point().is_none());
            assert!(!(0..g.cover.sets.len()).any(|s| (0..n).any(|a| g.cover.spans_pair(s, a))));
        }
    }

    #[test]
    fn bricks_in_one_dimension() {
        let g = shifted_brick_cover(1, 4).unwrap();
        assert_eq!(g.multiplicity, 2);
        assert_eq!(g.cover.sets.len(), 2);
        assert!(shifted_brick_cover(2, 6).is_err());
    }

    #[test]
    fn kkm_standard_small() {
        let g = kkm_standard_cover(1, 4).unwrap();
        assert_eq!(g.multiplicity, 2);
        let g = kkm_standard_cover(2, 9).unwrap();
        assert_eq!(g.multiplicity, 3);
        let bary = g.cover.model.index_of(&[3, 3, 3]).unwrap();
        assert_eq!(g.cover.counts()[bary], 3);
    }

    #[test]
    fn random_cover_is_deterministic() {
        let params = ModelParams { kind: ModelKind::Cube, n: 2, r: 16 };
        let a = random_low_multiplicity_cover(params, 2, 7).unwrap();
        let b = random_low_multiplicity_cover(params, 2, 7).unwrap();
        assert_eq!(a.cover.sets, b.cover.sets);
        assert!((1..=2).contains(&a.multiplicity));
        assert!(a.cover.uncovered_point().is_none());
    }

    #[test]
    fn single_layer_is_one_set() {
        let params = ModelParams { kind: ModelKind::Cube, n: 2, r: 5 };
        let g = random_low_multiplicity_cover(params, 1, 3).unwrap();
        assert_eq!(g.cover.sets.len(), 1);
        assert_eq!(g.multiplicity, 1);
    }

    #[test]
    fn axes_cover_uses_every_color() {
        let g = random_axes_cover(3, 6, 11).unwrap();
        assert_eq!(g.cover.sets.len(), 3);
        assert!(g.cover.sets.iter().all(|s| !s.points.is_empty()));
        assert!(g.cover.uncovered_point().is_none());
    }
}

