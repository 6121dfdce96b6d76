//! Exact Euclidean volume by recursive boundary triangulation.
//!
//! A `k`-face with base vertex `b` is the union of cones from `b` over those of
//! its `(k-1)`-faces that avoid `b`; recursing down to vertices yields a
//! triangulation into `n`-simplices whose determinants sum to `n! * volume`.

use std::collections::BTreeSet;

use num::{Signed, Zero};

use crate::linalg;
use crate::polytope::{affine_dim, HalfspaceRegion};
use crate::rational::{factorial, Q};

fn triangulate(region: &HalfspaceRegion, face: &[usize], k: usize, out: &mut Vec<Vec<usize>>, prefix: &mut Vec<usize>) {
    let base = face[0];
    if k == 0 {
        let mut simplex = prefix.clone();
        simplex.push(base);
        out.push(simplex);
        return;
    }
    let mut subfaces: BTreeSet<Vec<usize>> = BTreeSet::new();
    for f in 0..region.facets.len() {
        let sub: Vec<usize> = face
            .iter()
            .copied()
            .filter(|&v| region.vertices[v].facets.contains(&f))
            .collect();
        if sub.is_empty() || sub.len() == face.len() || sub.contains(&base) {
            continue;
        }
        let pts: Vec<&Vec<Q>> = sub.iter().map(|&v| &region.vertices[v].coords).collect();
        if affine_dim(&pts) == Some(k - 1) {
            subfaces.insert(sub);
        }
    }
    prefix.push(base);
    for sub in subfaces {
        triangulate(region, &sub, k - 1, out, prefix);
    }
    prefix.pop();
}

/// Simplices (as vertex index lists) of a triangulation of a full-dimensional region.
pub fn triangulation(region: &HalfspaceRegion) -> Vec<Vec<usize>> {
    let all: Vec<usize> = (0..region.vertices.len()).collect();
    let mut out = Vec::new();
    if region.affine_dim() == Some(region.dim) {
        triangulate(region, &all, region.dim, &mut out, &mut Vec::new());
    }
    out
}

/// Exact volume of a bounded region; zero for empty or lower-dimensional regions.
pub fn region_volume(region: &HalfspaceRegion) -> Q {
    let n = region.dim;
    let mut total = Q::zero();
    for simplex in triangulation(region) {
        let base = &region.vertices[simplex[0]].coords;
        let rows: Vec<Vec<Q>> = simplex[1..]
            .iter()
            .map(|&v| {
                region.vertices[v]
                    .coords
                    .iter()
                    .zip(base)
                    .map(|(a, b)| a - b)
                    .collect()
            })
            .collect();
        total += linalg::determinant(&rows).abs();
    }
    total / factorial(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::SimplePolytope;
    use crate::rational::{frac, q};

    #[test]
    fn unit_cube_and_simplex() {
        for n in 1..=4 {
            assert_eq!(region_volume(&SimplePolytope::cube(n).as_region()), q(1));
            assert_eq!(
                region_volume(&SimplePolytope::simplex(n).as_region()),
                q(1) / factorial(n)
            );
        }
    }

    #[test]
    fn triangulation_of_square_has_two_triangles() {
        assert_eq!(triangulation(&SimplePolytope::cube(2).as_region()).len(), 2);
    }

    #[test]
    fn hexagon() {
        // |x| <= 1, |y| <= 1, |x + y| <= 1: area 3.
        let p = SimplePolytope::from_halfspaces(
            vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1], vec![1, 1], vec![-1, -1]],
            vec![q(1); 6],
        )
        .unwrap();
        assert_eq!(region_volume(&p.as_region()), q(3));
        let half = p.translated(&[frac(1, 3), q(0)]);
        assert_eq!(region_volume(&half.as_region()), q(3));
    }
}
