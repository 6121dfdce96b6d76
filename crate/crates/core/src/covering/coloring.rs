//! Refinement of a multiplicity-`k` cover into `k` colors of pairwise disjoint pieces.
//!
//! Piece `A_S` collects the points covered by exactly the sets in `S`; it goes
//! into color `|S|`. Points with different signatures are different points, so
//! pieces of one color never meet.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::model::LatticeCover;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Piece {
    /// Ids of the covering sets containing every point of the piece.
    pub sets: Vec<usize>,
    pub points: Vec<usize>,
}

/// `classes[i]` holds the pieces of color `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    pub classes: Vec<Vec<Piece>>,
}

pub fn palais_coloring(cover: &LatticeCover) -> Coloring {
    let k = cover.multiplicity() as usize;
    let mut signature: Vec<Vec<usize>> = vec![Vec::new(); cover.model.len()];
    for (id, s) in cover.sets.iter().enumerate() {
        for &p in &s.points {
            signature[p].push(id);
        }
    }
    let mut pieces: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (p, sig) in signature.into_iter().enumerate() {
        if !sig.is_empty() {
            pieces.entry(sig).or_default().push(p);
        }
    }
    let mut classes = vec![Vec::new(); k];
    for (sets, points) in pieces {
        classes[sets.len() - 1].push(Piece { sets, points });
    }
    Coloring { classes }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ColoringDefect {
    #[error("color {color}: piece {piece} is not inside covering set {set}")]
    NotRefinement { color: usize, piece: usize, set: usize },
    #[error("color {color}: pieces {a} and {b} share a point")]
    Overlap { color: usize, a: usize, b: usize },
    #[error("point {0} of the cover is in no piece")]
    Lost(usize),
    #[error("point {0} is in a piece but in no covering set")]
    Extra(usize),
    #[error("color count {got} differs from multiplicity {expected}")]
    ColorCount { expected: usize, got: usize },
}

/// Checks refinement, within-color disjointness and union preservation directly.
pub fn validate_coloring(cover: &LatticeCover, coloring: &Coloring) -> Result<(), ColoringDefect> {
    let expected = cover.multiplicity() as usize;
    if coloring.classes.len() != expected {
        return Err(ColoringDefect::ColorCount { expected, got: coloring.classes.len() });
    }
    let members: Vec<Vec<bool>> = (0..cover.sets.len()).map(|s| cover.membership(s)).collect();
    let mut in_pieces = vec![false; cover.model.len()];
    for (color, class) in coloring.classes.iter().enumerate() {
        let mut owner: Vec<Option<usize>> = vec![None; cover.model.len()];
        for (pi, piece) in class.iter().enumerate() {
            for &set in &piece.sets {
                if set >= members.len() || piece.points.iter().any(|&p| !members[set][p]) {
                    return Err(ColoringDefect::NotRefinement { color: color + 1, piece: pi, set });
                }
            }
            for &p in &piece.points {
                if let Some(other) = owner[p] {
                    return Err(ColoringDefect::Overlap { color: color + 1, a: other, b: pi });
                }
                owner[p] = Some(pi);
                in_pieces[p] = true;
            }
        }
    }
    let covered: Vec<bool> = (0..cover.model.len()).map(|p| members.iter().any(|m| m[p])).collect();
    for p in 0..cover.model.len() {
        match (covered[p], in_pieces[p]) {
            (true, false) => return Err(ColoringDefect::Lost(p)),
            (false, true) => return Err(ColoringDefect::Extra(p)),
            _ => {}
        }
    }
    Ok(())
}
